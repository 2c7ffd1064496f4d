#pragma once

#include "fsnlab/blocks.hpp"
#include "fsnlab/graph.hpp"
#include "fsnlab/spectral.hpp"

#include <vector>

namespace fsnlab {

DirectedNetwork fsn_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1,
                        const Tolerances& tol = {});
DirectedNetwork ffn_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1,
                        const Tolerances& tol = {});
DirectedNetwork fsn_fan(const Network& net, const Vector& v2, const BlockDecomposition& decomp,
                        const FiedlerClassification& cls, const Tolerances& tol = {});
DirectedNetwork fsn_signed_san(const Network& net, const SemiAutonomousConfig& cfg, const Vector& v1s,
                               const Tolerances& tol = {});

// Forward reachability along arcs, followed -> follower.
std::vector<bool> reachable_from(const DirectedNetwork& dnet, const std::vector<int>& sources);
std::vector<bool> reachable_from_inputs(const DirectedNetwork& dnet, const SemiAutonomousConfig& cfg);
std::vector<int> fan_core_sources(const BlockDecomposition& decomp, const FiedlerClassification& cls);

bool has_directed_cycle(const DirectedNetwork& dnet);

// Spectrum of a generator whose off-diagonal pattern is block triangular
// after ordering strongly connected components. Each non-trivial component
// block has to be symmetric. Ascending.
Vector reduced_spectrum(const Matrix& generator);

// Smallest eigenvalue of reduced_laplacian + leader diagonal.
double reduced_san_lambda1(const DirectedNetwork& dnet, const SemiAutonomousConfig& cfg);
// Second smallest eigenvalue of the reduced (FAN) generator.
double reduced_fan_lambda2(const DirectedNetwork& dnet);

struct SymmetrizedConnectivity {
  double value = 0.0;  // min over unit x orthogonal to 1 of x^T L_bar x
  Vector vector;       // the minimiser
};
SymmetrizedConnectivity symmetrized_connectivity(const DirectedNetwork& dnet);

// lambda2(L) + sum over dropped directed choices (i <- j) of w_ij vbar_i (vbar_j - vbar_i).
// Edge weights are read off the off-diagonal of L.
double fiedler_lower_bound(const Matrix& L, const DirectedNetwork& dnet, const Vector& vbar);

bool is_tree(const Network& net);
bool is_star(const Network& net);
int tree_diameter(const Network& net);
double tree_diameter_bound(int diam);

}  // namespace fsnlab
