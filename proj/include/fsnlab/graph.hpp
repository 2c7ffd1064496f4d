#pragma once

// Graph model: undirected weighted (possibly signed) networks, leader/input
// configuration for semi-autonomous networks, and the directed "influence"
// networks produced by neighbor selection. Node ids are 1-based everywhere;
// matrix row/column k corresponds to node k+1.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fsnlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;
};

struct Neighbor {
  int node = 0;
  double w = 0.0;
};

class Network {
 public:
  Network() = default;
  // Validates: 1 <= i,j <= n, i != j, w != 0, no duplicate unordered pair.
  // Edges are normalized to i < j and sorted lexicographically.
  Network(int n, std::vector<Edge> edges, std::string name = {});

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& name() const { return name_; }

  const std::vector<Neighbor>& neighbors(int node) const { return adjacency_.at(node - 1); }
  std::optional<double> weight(int i, int j) const;
  // Index into edges() of the unordered pair {i, j}.
  std::optional<std::size_t> edge_index(int i, int j) const;
  bool is_signed() const;

  // Same topology with |w| on every edge.
  Network absolute() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::string name_;
};

struct LeaderLink {
  int node = 0;
  int input = 0;  // 1-based input index
  int sign = 1;   // +1, or -1 for signed SANs
};

// B matrix and input vectors of a semi-autonomous network.
struct SemiAutonomousConfig {
  int m = 0;
  std::vector<LeaderLink> links;
  std::vector<std::vector<double>> inputs;  // m vectors of common dimension d (may be empty)

  // Throws invalid_input on any violated invariant.
  void validate(int n) const;

  int dimension() const { return inputs.empty() ? 0 : static_cast<int>(inputs.front().size()); }
  bool is_leader(int node) const;
  bool is_signed() const;
  std::vector<int> leaders() const;

  Matrix input_matrix(int n) const;    // B, n x m, entries b_il in {0, +1, -1}
  Vector leader_diagonal(int n) const; // |B| 1_m
  Matrix input_values() const;         // m x d
};

struct Arc {
  int follower = 0;  // i: the agent that retains the neighbor
  int followed = 0;  // j: the retained neighbor (influence flows j -> i)
  double w = 1.0;
};

class DirectedNetwork {
 public:
  DirectedNetwork() = default;
  explicit DirectedNetwork(int n, std::vector<Arc> arcs = {});

  int size() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool has_arc(int follower, int followed) const;
  std::vector<int> retained_by(int follower) const;
  DirectedNetwork reversed() const;

  // Arc sets are compared as (follower, followed) pairs; weights are ignored.
  bool same_arcs(const DirectedNetwork& other) const;

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;  // sorted by (follower, followed), unique
};

struct Bipartition {
  std::vector<int> first;   // contains node 1
  std::vector<int> second;  // may be empty
};

Matrix laplacian(const Network& net);
// Unsigned SANs only: rejects signed leader links.
Matrix perturbed_laplacian(const Network& net, const SemiAutonomousConfig& cfg);
Matrix signed_laplacian(const Network& net);
// L^s + diag(|B| 1_m).
Matrix signed_perturbed_laplacian(const Network& net, const SemiAutonomousConfig& cfg);

bool is_connected(const Network& net);

// Two-colouring on edge signs. Requires a connected network.
std::optional<Bipartition> structural_balance_partition(const Network& net);
// Balance of the network augmented with its input nodes (input l joined to
// each of its leaders with the link sign).
std::optional<Bipartition> augmented_balance_partition(const Network& net,
                                                       const SemiAutonomousConfig& cfg);

Vector gauge_signature(const Bipartition& part, int n);  // sigma_i = +1 on first, -1 on second
Matrix gauge_matrix(const Bipartition& part, int n);

// Out-degree Laplacian of a directed network: row i holds the retained
// neighbours of i.
Matrix reduced_laplacian(const DirectedNetwork& dnet);
// Same with |w| accumulated on the diagonal, for reduced signed networks.
Matrix signed_reduced_laplacian(const DirectedNetwork& dnet);

}  // namespace fsnlab
