#include "fsnlab/blocks.hpp"

#include "fsnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace fsnlab {

bool BlockDecomposition::is_cut(int node) const {
  return std::binary_search(cut_nodes.begin(), cut_nodes.end(), node);
}

std::vector<int> BlockDecomposition::blocks_of(int node) const {
  std::vector<int> out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (std::binary_search(blocks[b].begin(), blocks[b].end(), node)) out.push_back(static_cast<int>(b));
  return out;
}

std::vector<int> BlockDecomposition::block_edge_counts() const {
  std::vector<int> c(blocks.size(), 0);
  for (int b : edge_block) ++c[b];
  return c;
}

BlockDecomposition block_cut_tree(const Network& net) {
  if (!is_connected(net)) fail(ErrorKind::precondition, "block_cut_tree: network is disconnected");
  const int n = net.size();
  const auto& edges = net.edges();

  // incidence lists carrying edge ids so parallel traversal of the parent edge is skipped by id
  std::vector<std::vector<std::pair<int, int>>> inc(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    inc[edges[k].i - 1].emplace_back(edges[k].j - 1, static_cast<int>(k));
    inc[edges[k].j - 1].emplace_back(edges[k].i - 1, static_cast<int>(k));
  }
  for (auto& l : inc) std::sort(l.begin(), l.end());

  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<int> edge_stack;
  std::vector<std::vector<int>> raw_blocks;  // as edge id lists
  std::vector<char> cut(n, 0);

  struct Frame {
    int node;
    int parent_edge;
    std::size_t next;
  };
  int timer = 0;
  int root_children = 0;
  std::vector<Frame> stack;
  stack.push_back({0, -1, 0});
  disc[0] = low[0] = timer++;

  while (!stack.empty()) {
    Frame& f = stack.back();
    const int u = f.node;
    if (f.next < inc[u].size()) {
      auto [w, eid] = inc[u][f.next++];
      if (eid == f.parent_edge) continue;
      if (disc[w] == -1) {
        edge_stack.push_back(eid);
        disc[w] = low[w] = timer++;
        if (u == 0) ++root_children;
        stack.push_back({w, eid, 0});
      } else if (disc[w] < disc[u]) {
        edge_stack.push_back(eid);
        low[u] = std::min(low[u], disc[w]);
      }
      continue;
    }
    const int pedge = f.parent_edge;
    stack.pop_back();
    if (stack.empty()) break;
    const int p = stack.back().node;
    low[p] = std::min(low[p], low[u]);
    if (low[u] >= disc[p]) {
      if (p != 0) cut[p] = 1;
      std::vector<int> blk;
      while (true) {
        int e = edge_stack.back();
        edge_stack.pop_back();
        blk.push_back(e);
        if (e == pedge) break;
      }
      raw_blocks.push_back(std::move(blk));
    }
  }
  if (root_children > 1) cut[0] = 1;

  BlockDecomposition d;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> tmp;  // (nodes, edges)
  for (auto& eids : raw_blocks) {
    std::set<int> nodes;
    for (int e : eids) {
      nodes.insert(edges[e].i);
      nodes.insert(edges[e].j);
    }
    tmp.emplace_back(std::vector<int>(nodes.begin(), nodes.end()), eids);
  }
  if (n == 1) tmp.emplace_back(std::vector<int>{1}, std::vector<int>{});
  std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  d.edge_block.assign(edges.size(), -1);
  for (std::size_t b = 0; b < tmp.size(); ++b) {
    d.blocks.push_back(tmp[b].first);
    for (int e : tmp[b].second) d.edge_block[e] = static_cast<int>(b);
  }
  for (int k = 0; k < n; ++k)
    if (cut[k]) d.cut_nodes.push_back(k + 1);
  for (std::size_t b = 0; b < d.blocks.size(); ++b)
    for (int v : d.blocks[b])
      if (cut[v - 1]) d.tree_links.emplace_back(static_cast<int>(b), v);
  return d;
}

std::vector<int> FiedlerClassification::zero_block_nodes(const BlockDecomposition& d) const {
  std::set<int> s;
  for (std::size_t b = 0; b < block_label.size(); ++b)
    if (block_label[b] == BlockLabel::zero) s.insert(d.blocks[b].begin(), d.blocks[b].end());
  return {s.begin(), s.end()};
}

const char* to_string(NodeSign s) {
  switch (s) {
    case NodeSign::positive: return "positive";
    case NodeSign::negative: return "negative";
    default: return "zero";
  }
}

const char* to_string(BlockLabel b) {
  switch (b) {
    case BlockLabel::positive: return "positive";
    case BlockLabel::negative: return "negative";
    case BlockLabel::zero: return "zero";
    default: return "core";
  }
}

namespace {

// Walk the block-cut tree outward from the core and compare consecutive cut
// node entries along every path.
void audit_monotone(const BlockDecomposition& d, const Vector& v2, FiedlerClassification& c, double zero) {
  const int nb = static_cast<int>(d.blocks.size());
  std::map<int, std::vector<int>> cut_blocks;
  for (auto [b, cnode] : d.tree_links) cut_blocks[cnode].push_back(b);

  std::vector<char> seen_block(nb, 0);
  std::set<int> seen_cut;
  struct Item {
    bool is_block;
    int id;
    int prev_cut;  // 0 if none
  };
  std::queue<Item> q;
  if (c.which == FiedlerClassification::Case::core_block) {
    q.push({true, c.core_block, 0});
    seen_block[c.core_block] = 1;
  } else {
    q.push({false, c.core_node, 0});
    seen_cut.insert(c.core_node);
  }

  double worst = 0.0;
  std::ostringstream where;
  while (!q.empty()) {
    Item it = q.front();
    q.pop();
    if (it.is_block) {
      for (int v : d.blocks[it.id]) {
        if (!d.is_cut(v) || seen_cut.count(v)) continue;
        seen_cut.insert(v);
        if (it.prev_cut != 0) {
          double a = v2(it.prev_cut - 1), b = v2(v - 1);
          double viol = std::max(0.0, std::abs(a) - std::abs(b));
          if (std::abs(a) > zero && std::abs(b) > zero && (a > 0) != (b > 0))
            viol = std::max(viol, std::min(std::abs(a), std::abs(b)));
          if (viol > 0.0) {
            where << " " << it.prev_cut << "->" << v << " (" << viol << ")";
            worst = std::max(worst, viol);
          }
        }
        q.push({false, v, v});
      }
    } else {
      for (int b : cut_blocks[it.id]) {
        if (seen_block[b]) continue;
        seen_block[b] = 1;
        q.push({true, b, it.id});
      }
    }
  }
  if (worst > 10.0 * zero)
    fail(ErrorKind::precondition, "classify_fiedler: cut-node entries are not monotone away from the core:" + where.str());
  if (worst > 0.0) c.warnings.push_back("monotonicity audit: small violations" + where.str());
}

}  // namespace

FiedlerClassification classify_fiedler(const BlockDecomposition& decomp, const Vector& v2, const Tolerances& tol) {
  const int n = static_cast<int>(v2.size());
  const double zero = tol.zero * inf_norm(v2);
  FiedlerClassification c;
  c.node_sign.resize(n);
  for (int k = 0; k < n; ++k)
    c.node_sign[k] = std::abs(v2(k)) <= zero ? NodeSign::zero : (v2(k) > 0 ? NodeSign::positive : NodeSign::negative);

  std::vector<int> mixed;
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    bool pos = false, neg = false;
    for (int v : decomp.blocks[b]) {
      if (v < 1 || v > n) fail(ErrorKind::invalid_input, "classify_fiedler: vector length does not match network");
      pos |= c.node_sign[v - 1] == NodeSign::positive;
      neg |= c.node_sign[v - 1] == NodeSign::negative;
    }
    if (pos && neg) {
      c.block_label.push_back(BlockLabel::core);
      mixed.push_back(static_cast<int>(b));
    } else if (pos) {
      c.block_label.push_back(BlockLabel::positive);
    } else if (neg) {
      c.block_label.push_back(BlockLabel::negative);
    } else {
      c.block_label.push_back(BlockLabel::zero);
    }
  }

  if (mixed.size() > 1)
    fail(ErrorKind::precondition, "classify_fiedler: " + std::to_string(mixed.size()) + " blocks mix signs");
  if (mixed.size() == 1) {
    c.which = FiedlerClassification::Case::core_block;
    c.core_block = mixed.front();
  } else {
    std::vector<int> candidates;
    for (int v = 1; v <= n; ++v) {
      if (c.node_sign[v - 1] != NodeSign::zero) continue;
      for (int b : decomp.blocks_of(v))
        if (c.block_label[b] != BlockLabel::zero) {
          candidates.push_back(v);
          break;
        }
    }
    if (candidates.size() != 1 || !decomp.is_cut(candidates.front()))
      fail(ErrorKind::precondition,
           "classify_fiedler: neither a core block nor a single zero cut node with a nonzero neighbour");
    c.which = FiedlerClassification::Case::core_node;
    c.core_node = candidates.front();
  }
  audit_monotone(decomp, v2, c, zero);
  return c;
}

}  // namespace fsnlab
