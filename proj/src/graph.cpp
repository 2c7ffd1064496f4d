#include "fsnlab/graph.hpp"

#include "fsnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace fsnlab {

namespace {

std::string pair_str(int i, int j) {
  std::ostringstream os;
  os << "{" << i << "," << j << "}";
  return os.str();
}

// BFS two-colouring; colour[k] in {0,1}, -1 unvisited. Returns false on conflict.
bool two_colour(int nodes, const std::vector<std::vector<std::pair<int, int>>>& adj,
                std::vector<int>& colour) {
  colour.assign(nodes, -1);
  for (int start = 0; start < nodes; ++start) {
    if (colour[start] != -1) continue;
    colour[start] = 0;
    std::queue<int> q;
    q.push(start);
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (auto [b, s] : adj[a]) {
        int want = s > 0 ? colour[a] : 1 - colour[a];
        if (colour[b] == -1) {
          colour[b] = want;
          q.push(b);
        } else if (colour[b] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

Bipartition split(const std::vector<int>& colour, int n) {
  Bipartition p;
  for (int k = 0; k < n; ++k) (colour[k] == colour[0] ? p.first : p.second).push_back(k + 1);
  return p;
}

}  // namespace

Network::Network(int n, std::vector<Edge> edges, std::string name)
    : n_(n), name_(std::move(name)) {
  if (n < 1) fail(ErrorKind::invalid_input, "network must have at least one node");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges) {
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
      fail(ErrorKind::invalid_input, "edge " + pair_str(e.i, e.j) + ": node id out of range 1.." +
                                         std::to_string(n));
    if (e.i == e.j) fail(ErrorKind::invalid_input, "edge " + pair_str(e.i, e.j) + ": self-loop");
    if (e.w == 0.0 || !std::isfinite(e.w))
      fail(ErrorKind::invalid_input, "edge " + pair_str(e.i, e.j) + ": weight must be finite and nonzero");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.i, e.j).second)
      fail(ErrorKind::invalid_input, "edge " + pair_str(e.i, e.j) + ": duplicate edge");
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  edges_ = std::move(edges);
  adjacency_.assign(n, {});
  for (const auto& e : edges_) {
    adjacency_[e.i - 1].push_back({e.j, e.w});
    adjacency_[e.j - 1].push_back({e.i, e.w});
  }
  for (auto& nb : adjacency_)
    std::sort(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

std::optional<std::size_t> Network::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(i, j),
                             [](const Edge& e, const std::pair<int, int>& key) {
                               return std::tie(e.i, e.j) < std::tie(key.first, key.second);
                             });
  if (it == edges_.end() || it->i != i || it->j != j) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<double> Network::weight(int i, int j) const {
  auto k = edge_index(i, j);
  if (!k) return std::nullopt;
  return edges_[*k].w;
}

bool Network::is_signed() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w < 0; });
}

Network Network::absolute() const {
  auto e = edges_;
  for (auto& x : e) x.w = std::abs(x.w);
  return Network(n_, std::move(e), name_);
}

void SemiAutonomousConfig::validate(int n) const {
  if (m < 0) fail(ErrorKind::invalid_input, "input count must be non-negative");
  std::set<int> nodes;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto& l = links[k];
    std::string ctx = "leaders[" + std::to_string(k) + "]: ";
    if (l.node < 1 || l.node > n) fail(ErrorKind::invalid_input, ctx + "node id out of range");
    if (l.input < 1 || l.input > m) fail(ErrorKind::invalid_input, ctx + "input index out of range 1.." + std::to_string(m));
    if (l.sign != 1 && l.sign != -1) fail(ErrorKind::invalid_input, ctx + "sign must be +1 or -1");
    if (!nodes.insert(l.node).second)
      fail(ErrorKind::invalid_input, ctx + "leader node " + std::to_string(l.node) + " repeated");
  }
  if (!inputs.empty()) {
    if (static_cast<int>(inputs.size()) != m)
      fail(ErrorKind::invalid_input, "inputs: expected " + std::to_string(m) + " vectors");
    for (const auto& u : inputs)
      if (u.size() != inputs.front().size() || u.empty())
        fail(ErrorKind::invalid_input, "inputs: vectors must share a nonzero dimension");
  }
}

bool SemiAutonomousConfig::is_leader(int node) const {
  return std::any_of(links.begin(), links.end(), [node](const LeaderLink& l) { return l.node == node; });
}

bool SemiAutonomousConfig::is_signed() const {
  return std::any_of(links.begin(), links.end(), [](const LeaderLink& l) { return l.sign < 0; });
}

std::vector<int> SemiAutonomousConfig::leaders() const {
  std::vector<int> out;
  for (const auto& l : links) out.push_back(l.node);
  std::sort(out.begin(), out.end());
  return out;
}

Matrix SemiAutonomousConfig::input_matrix(int n) const {
  Matrix B = Matrix::Zero(n, m);
  for (const auto& l : links) B(l.node - 1, l.input - 1) = l.sign;
  return B;
}

Vector SemiAutonomousConfig::leader_diagonal(int n) const {
  Vector d = Vector::Zero(n);
  for (const auto& l : links) d(l.node - 1) += 1.0;
  return d;
}

Matrix SemiAutonomousConfig::input_values() const {
  Matrix U = Matrix::Zero(m, dimension());
  for (int l = 0; l < m && l < static_cast<int>(inputs.size()); ++l)
    for (int c = 0; c < dimension(); ++c) U(l, c) = inputs[l][c];
  return U;
}

DirectedNetwork::DirectedNetwork(int n, std::vector<Arc> arcs) : n_(n) {
  for (const auto& a : arcs) {
    if (a.follower < 1 || a.follower > n || a.followed < 1 || a.followed > n || a.follower == a.followed)
      fail(ErrorKind::invalid_input, "arc " + pair_str(a.follower, a.followed) + ": invalid endpoints");
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.follower, a.followed) < std::tie(b.follower, b.followed);
  });
  auto dup = std::adjacent_find(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return a.follower == b.follower && a.followed == b.followed;
  });
  if (dup != arcs.end())
    fail(ErrorKind::invalid_input, "arc " + pair_str(dup->follower, dup->followed) + ": duplicate arc");
  arcs_ = std::move(arcs);
}

bool DirectedNetwork::has_arc(int follower, int followed) const {
  return std::binary_search(arcs_.begin(), arcs_.end(), Arc{follower, followed, 0.0},
                            [](const Arc& a, const Arc& b) {
                              return std::tie(a.follower, a.followed) < std::tie(b.follower, b.followed);
                            });
}

std::vector<int> DirectedNetwork::retained_by(int follower) const {
  std::vector<int> out;
  for (const auto& a : arcs_)
    if (a.follower == follower) out.push_back(a.followed);
  return out;
}

DirectedNetwork DirectedNetwork::reversed() const {
  std::vector<Arc> r;
  r.reserve(arcs_.size());
  for (const auto& a : arcs_) r.push_back({a.followed, a.follower, a.w});
  return DirectedNetwork(n_, std::move(r));
}

bool DirectedNetwork::same_arcs(const DirectedNetwork& other) const {
  if (n_ != other.n_ || arcs_.size() != other.arcs_.size()) return false;
  for (std::size_t k = 0; k < arcs_.size(); ++k)
    if (arcs_[k].follower != other.arcs_[k].follower || arcs_[k].followed != other.arcs_[k].followed)
      return false;
  return true;
}

Matrix laplacian(const Network& net) {
  const int n = net.size();
  Matrix L = Matrix::Zero(n, n);
  for (const auto& e : net.edges()) {
    L(e.i - 1, e.j - 1) -= e.w;
    L(e.j - 1, e.i - 1) -= e.w;
    L(e.i - 1, e.i - 1) += e.w;
    L(e.j - 1, e.j - 1) += e.w;
  }
  return L;
}

Matrix perturbed_laplacian(const Network& net, const SemiAutonomousConfig& cfg) {
  cfg.validate(net.size());
  if (cfg.is_signed())
    fail(ErrorKind::invalid_input, "perturbed_laplacian: signed leader link; use the signed variant");
  Matrix L = laplacian(net);
  L.diagonal() += cfg.leader_diagonal(net.size());
  return L;
}

Matrix signed_laplacian(const Network& net) {
  const int n = net.size();
  Matrix L = Matrix::Zero(n, n);
  for (const auto& e : net.edges()) {
    L(e.i - 1, e.j - 1) -= e.w;
    L(e.j - 1, e.i - 1) -= e.w;
    L(e.i - 1, e.i - 1) += std::abs(e.w);
    L(e.j - 1, e.j - 1) += std::abs(e.w);
  }
  return L;
}

Matrix signed_perturbed_laplacian(const Network& net, const SemiAutonomousConfig& cfg) {
  cfg.validate(net.size());
  Matrix L = signed_laplacian(net);
  L.diagonal() += cfg.leader_diagonal(net.size());
  return L;
}

bool is_connected(const Network& net) {
  const int n = net.size();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{1};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (const auto& nb : net.neighbors(a)) {
      if (!seen[nb.node - 1]) {
        seen[nb.node - 1] = 1;
        ++count;
        stack.push_back(nb.node);
      }
    }
  }
  return count == n;
}

std::optional<Bipartition> structural_balance_partition(const Network& net) {
  if (!is_connected(net)) fail(ErrorKind::precondition, "structural_balance_partition: network is disconnected");
  const int n = net.size();
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (const auto& e : net.edges()) {
    int s = e.w > 0 ? 1 : -1;
    adj[e.i - 1].emplace_back(e.j - 1, s);
    adj[e.j - 1].emplace_back(e.i - 1, s);
  }
  std::vector<int> colour;
  if (!two_colour(n, adj, colour)) return std::nullopt;
  return split(colour, n);
}

std::optional<Bipartition> augmented_balance_partition(const Network& net,
                                                       const SemiAutonomousConfig& cfg) {
  cfg.validate(net.size());
  if (!is_connected(net)) fail(ErrorKind::precondition, "augmented_balance_partition: network is disconnected");
  const int n = net.size();
  std::vector<std::vector<std::pair<int, int>>> adj(n + cfg.m);
  for (const auto& e : net.edges()) {
    int s = e.w > 0 ? 1 : -1;
    adj[e.i - 1].emplace_back(e.j - 1, s);
    adj[e.j - 1].emplace_back(e.i - 1, s);
  }
  for (const auto& l : cfg.links) {
    adj[l.node - 1].emplace_back(n + l.input - 1, l.sign);
    adj[n + l.input - 1].emplace_back(l.node - 1, l.sign);
  }
  std::vector<int> colour;
  if (!two_colour(n + cfg.m, adj, colour)) return std::nullopt;
  return split(colour, n);
}

Vector gauge_signature(const Bipartition& part, int n) {
  Vector s = Vector::Zero(n);
  for (int k : part.first) s(k - 1) = 1.0;
  for (int k : part.second) s(k - 1) = -1.0;
  for (int k = 0; k < n; ++k)
    if (s(k) == 0.0) fail(ErrorKind::invalid_input, "gauge: node " + std::to_string(k + 1) + " missing from partition");
  return s;
}

Matrix gauge_matrix(const Bipartition& part, int n) { return gauge_signature(part, n).asDiagonal(); }

Matrix reduced_laplacian(const DirectedNetwork& dnet) {
  const int n = dnet.size();
  Matrix L = Matrix::Zero(n, n);
  for (const auto& a : dnet.arcs()) {
    L(a.follower - 1, a.followed - 1) -= a.w;
    L(a.follower - 1, a.follower - 1) += a.w;
  }
  return L;
}

Matrix signed_reduced_laplacian(const DirectedNetwork& dnet) {
  const int n = dnet.size();
  Matrix L = Matrix::Zero(n, n);
  for (const auto& a : dnet.arcs()) {
    L(a.follower - 1, a.followed - 1) -= a.w;
    L(a.follower - 1, a.follower - 1) += std::abs(a.w);
  }
  return L;
}

}  // namespace fsnlab
