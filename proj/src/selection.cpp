#include "fsnlab/selection.hpp"

#include "fsnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace fsnlab {

namespace {

void require_positive(const Vector& v1, int n, const Tolerances& tol, const char* who) {
  if (v1.size() != n) fail(ErrorKind::invalid_input, std::string(who) + ": eigenvector length does not match network");
  for (int k = 0; k < n; ++k)
    if (!(v1(k) > tol.pos))
      fail(ErrorKind::precondition, std::string(who) + ": eigenvector entry " + std::to_string(k + 1) +
                                        " is not strictly positive");
}

bool is_tie(double r, const Tolerances& tol) { return std::abs(r - 1.0) < tol.tie; }

template <class Keep>
DirectedNetwork select_by_ratio(const Network& net, const Vector& v, Keep keep) {
  std::vector<Arc> arcs;
  for (const auto& e : net.edges()) {
    double r = v(e.i - 1) / v(e.j - 1);
    if (keep(r)) arcs.push_back({e.i, e.j, e.w});
    if (keep(1.0 / r)) arcs.push_back({e.j, e.i, e.w});
  }
  return DirectedNetwork(net.size(), std::move(arcs));
}

}  // namespace

DirectedNetwork fsn_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1,
                        const Tolerances& tol) {
  cfg.validate(net.size());
  require_positive(v1, net.size(), tol, "fsn_san");
  return select_by_ratio(net, v1, [&](double r) { return r > 1.0 && !is_tie(r, tol); });
}

DirectedNetwork ffn_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1,
                        const Tolerances& tol) {
  cfg.validate(net.size());
  require_positive(v1, net.size(), tol, "ffn_san");
  return select_by_ratio(net, v1, [&](double r) { return r < 1.0 && !is_tie(r, tol); });
}

DirectedNetwork fsn_signed_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1s,
                               const Tolerances& tol) {
  cfg.validate(net.size());
  if (!augmented_balance_partition(net, cfg))
    fail(ErrorKind::precondition, "fsn_signed_san: network with its inputs is not structurally balanced");
  require_positive(v1s.cwiseAbs(), net.size(), tol, "fsn_signed_san");
  return select_by_ratio(net, v1s, [&](double r) {
    double a = std::abs(r);
    return a > 1.0 && !is_tie(a, tol);
  });
}

DirectedNetwork fsn_fan(const Network& net, const Vector& v2, const BlockDecomposition& decomp,
                        const FiedlerClassification& cls, const Tolerances& tol) {
  if (v2.size() != net.size()) fail(ErrorKind::invalid_input, "fsn_fan: eigenvector length does not match network");
  if (decomp.edge_block.size() != net.edges().size())
    fail(ErrorKind::invalid_input, "fsn_fan: block decomposition does not belong to this network");
  auto keep = [&](int i, int j) {
    double r = entry_ratio(v2, i, j, tol);
    return (r > 1.0 && !is_tie(r, tol)) || r < 0.0;
  };
  std::vector<Arc> arcs;
  const auto& edges = net.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    BlockLabel lab = cls.block_label.at(decomp.edge_block[k]);
    if (lab == BlockLabel::positive || lab == BlockLabel::negative) {
      if (keep(e.i, e.j)) arcs.push_back({e.i, e.j, e.w});
      if (keep(e.j, e.i)) arcs.push_back({e.j, e.i, e.w});
    } else {
      arcs.push_back({e.i, e.j, e.w});
      arcs.push_back({e.j, e.i, e.w});
    }
  }
  return DirectedNetwork(net.size(), std::move(arcs));
}

std::vector<bool> reachable_from(const DirectedNetwork& dnet, const std::vector<int>& sources) {
  const int n = dnet.size();
  std::vector<std::vector<int>> out(n);
  for (const auto& a : dnet.arcs()) out[a.followed - 1].push_back(a.follower - 1);
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  for (int s : sources) {
    if (s < 1 || s > n) fail(ErrorKind::invalid_input, "reachable_from: source out of range");
    if (!seen[s - 1]) {
      seen[s - 1] = true;
      q.push(s - 1);
    }
  }
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int b : out[a])
      if (!seen[b]) {
        seen[b] = true;
        q.push(b);
      }
  }
  return seen;
}

std::vector<bool> reachable_from_inputs(const DirectedNetwork& dnet, const SemiAutonomousConfig& cfg) {
  return reachable_from(dnet, cfg.leaders());
}

std::vector<int> fan_core_sources(const BlockDecomposition& decomp, const FiedlerClassification& cls) {
  if (cls.which == FiedlerClassification::Case::core_block) return decomp.blocks.at(cls.core_block);
  return {cls.core_node};
}

bool has_directed_cycle(const DirectedNetwork& dnet) {
  const int n = dnet.size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& a : dnet.arcs()) {
    out[a.followed - 1].push_back(a.follower - 1);
    ++indeg[a.follower - 1];
  }
  std::queue<int> q;
  for (int k = 0; k < n; ++k)
    if (indeg[k] == 0) q.push(k);
  int removed = 0;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    ++removed;
    for (int b : out[a])
      if (--indeg[b] == 0) q.push(b);
  }
  return removed != n;
}

namespace {

// Tarjan's SCC with an explicit stack.
std::vector<std::vector<int>> strongly_connected(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  std::vector<std::vector<int>> adj(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && M(a, b) != 0.0) adj[a].push_back(b);

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stk;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  for (int s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    std::vector<std::pair<int, std::size_t>> call{{s, 0}};
    index[s] = low[s] = counter++;
    stk.push_back(s);
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [u, next] = call.back();
      if (next < adj[u].size()) {
        int w = adj[u][next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stk.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[u] = std::min(low[u], index[w]);
        }
        continue;
      }
      int done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<int> comp;
        int w;
        do {
          w = stk.back();
          stk.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

}  // namespace

Vector reduced_spectrum(const Matrix& generator) {
  const int n = static_cast<int>(generator.rows());
  std::vector<double> vals;
  vals.reserve(n);
  const double scale = std::max(1.0, inf_norm(generator));
  for (const auto& comp : strongly_connected(generator)) {
    const int k = static_cast<int>(comp.size());
    if (k == 1) {
      vals.push_back(generator(comp[0], comp[0]));
      continue;
    }
    Matrix sub(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = generator(comp[a], comp[b]);
    if ((sub - sub.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      fail(ErrorKind::precondition, "reduced_spectrum: a strongly connected component is not symmetric");
    auto ed = jacobi_eigen(sub);
    for (int a = 0; a < k; ++a) vals.push_back(ed.values(a));
  }
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<Vector>(vals.data(), n);
}

double reduced_san_lambda1(const DirectedNetwork& dnet, const SemiAutonomousConfig& cfg) {
  cfg.validate(dnet.size());
  Matrix G = reduced_laplacian(dnet);
  G.diagonal() += cfg.leader_diagonal(dnet.size());
  return reduced_spectrum(G)(0);
}

double reduced_fan_lambda2(const DirectedNetwork& dnet) {
  if (dnet.size() < 2) fail(ErrorKind::precondition, "reduced_fan_lambda2: need at least two nodes");
  return reduced_spectrum(reduced_laplacian(dnet))(1);
}

SymmetrizedConnectivity symmetrized_connectivity(const DirectedNetwork& dnet) {
  const int n = dnet.size();
  if (n < 2) fail(ErrorKind::precondition, "symmetrized_connectivity: need at least two nodes");
  Matrix Lb = reduced_laplacian(dnet);
  Matrix S = (Lb + Lb.transpose()) / 2.0;

  // Householder reflector sending 1/sqrt(n) to e1; its other columns span the complement of 1.
  Vector u = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
  u(0) -= 1.0;
  Matrix H = Matrix::Identity(n, n) - 2.0 * u * u.transpose() / u.squaredNorm();
  Matrix Q = H.rightCols(n - 1);

  auto ed = jacobi_eigen(Q.transpose() * S * Q);
  SymmetrizedConnectivity out;
  out.value = ed.values(0);
  out.vector = Q * ed.vectors.col(0);
  normalize_sign(out.vector);
  return out;
}

double fiedler_lower_bound(const Matrix& L, const DirectedNetwork& dnet, const Vector& vbar) {
  const int n = static_cast<int>(L.rows());
  if (dnet.size() != n || vbar.size() != n)
    fail(ErrorKind::invalid_input, "fiedler_lower_bound: dimension mismatch");
  double bound = fiedler_pair(L).value;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j || L(i - 1, j - 1) == 0.0 || dnet.has_arc(i, j)) continue;
      double w = -L(i - 1, j - 1);
      bound += w * vbar(i - 1) * (vbar(j - 1) - vbar(i - 1));
    }
  }
  return bound;
}

bool is_tree(const Network& net) {
  return static_cast<int>(net.edges().size()) == net.size() - 1 && is_connected(net);
}

bool is_star(const Network& net) {
  if (!is_tree(net) || net.size() < 3) return false;
  for (int v = 1; v <= net.size(); ++v)
    if (static_cast<int>(net.neighbors(v).size()) == net.size() - 1) return true;
  return false;
}

namespace {
std::pair<int, int> farthest(const Network& net, int from) {
  std::vector<int> dist(net.size(), -1);
  std::queue<int> q;
  dist[from - 1] = 0;
  q.push(from);
  int far = from;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    if (dist[a - 1] > dist[far - 1]) far = a;
    for (const auto& nb : net.neighbors(a))
      if (dist[nb.node - 1] < 0) {
        dist[nb.node - 1] = dist[a - 1] + 1;
        q.push(nb.node);
      }
  }
  return {far, dist[far - 1]};
}
}  // namespace

int tree_diameter(const Network& net) {
  if (!is_tree(net)) fail(ErrorKind::precondition, "tree_diameter: network is not a tree");
  auto [a, da] = farthest(net, 1);
  (void)da;
  return farthest(net, a).second;
}

double tree_diameter_bound(int diam) {
  if (diam < 1) fail(ErrorKind::invalid_input, "tree_diameter_bound: diameter must be at least 1");
  return 2.0 * (1.0 - std::cos(M_PI / (diam + 1)));
}

}  // namespace fsnlab
