#pragma once

// Seeded generators and small oracles shared by the test binaries.

#include "fsnlab/graph.hpp"
#include "fsnlab/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fsntest {

using fsnlab::Edge;
using fsnlab::Matrix;
using fsnlab::Network;
using fsnlab::Vector;

inline std::string fixture(const std::string& name) { return std::string(FSNLAB_DATA_DIR) + "/" + name + ".json"; }

inline fsnlab::NetworkFile load(const std::string& name) { return fsnlab::load_network_file(fixture(name)); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  std::mt19937_64& rng() { return rng_; }

  // Random labelled tree: node k attaches to an earlier node, then labels are permuted.
  std::vector<std::pair<int, int>> tree_edges(int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng_);
    std::vector<std::pair<int, int>> e;
    for (int k = 1; k < n; ++k) e.emplace_back(perm[uniform_int(0, k - 1)], perm[k]);
    return e;
  }

  Network tree(int n) {
    std::vector<Edge> e;
    for (auto [a, b] : tree_edges(n)) e.push_back({a, b, 1.0});
    return Network(n, e);
  }

  // Connected graph: random tree plus up to `extra` random chords.
  Network connected(int n, int extra, bool random_weights = false) {
    std::set<std::pair<int, int>> s;
    for (auto [a, b] : tree_edges(n)) s.emplace(std::min(a, b), std::max(a, b));
    for (int k = 0; k < extra; ++k) {
      int a = uniform_int(1, n), b = uniform_int(1, n);
      if (a != b) s.emplace(std::min(a, b), std::max(a, b));
    }
    std::vector<Edge> e;
    for (auto [a, b] : s) e.push_back({a, b, random_weights ? uniform(0.5, 2.0) : 1.0});
    return Network(n, e);
  }

  // Non-empty random leader set, each on its own input.
  fsnlab::SemiAutonomousConfig leaders(int n, int dims = 1) {
    int k = uniform_int(1, n);
    std::vector<int> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 1);
    std::shuffle(nodes.begin(), nodes.end(), rng_);
    nodes.resize(k);
    fsnlab::SemiAutonomousConfig cfg;
    cfg.m = k;
    for (int l = 0; l < k; ++l) {
      cfg.links.push_back({nodes[l], l + 1, 1});
      std::vector<double> u(dims);
      for (auto& x : u) x = uniform();
      cfg.inputs.push_back(u);
    }
    return cfg;
  }

  Matrix state(int n, int d) {
    Matrix X(n, d);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < d; ++b) X(a, b) = uniform();
    return X;
  }

 private:
  std::mt19937_64 rng_;
};

// Independent eigen-oracle.
inline Eigen::SelfAdjointEigenSolver<Matrix> oracle_eigen(const Matrix& M) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(M);
}

// Connectivity of the subgraph induced by `keep`.
inline bool induced_connected(const Network& net, const std::vector<char>& keep) {
  int start = -1, count = 0;
  for (int v = 1; v <= net.size(); ++v)
    if (keep[v - 1]) {
      ++count;
      if (start < 0) start = v;
    }
  if (count <= 1) return true;
  std::vector<char> seen(net.size(), 0);
  std::vector<int> st{start};
  seen[start - 1] = 1;
  int reached = 1;
  while (!st.empty()) {
    int a = st.back();
    st.pop_back();
    for (const auto& nb : net.neighbors(a))
      if (keep[nb.node - 1] && !seen[nb.node - 1]) {
        seen[nb.node - 1] = 1;
        ++reached;
        st.push_back(nb.node);
      }
  }
  return reached == count;
}

}  // namespace fsntest
