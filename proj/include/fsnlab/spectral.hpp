#pragma once

#include "fsnlab/graph.hpp"

#include <limits>
#include <vector>

namespace fsnlab {

struct Tolerances {
  double gap = 1e-8;    // relative to ||M||_inf; eigenvalues closer than this are repeated
  double zero = 1e-8;   // relative to ||v||_inf; smaller entries are "zero nodes"
  double pos = 1e-10;   // absolute positivity floor for v1(L_B)
  double tie = 1e-10;   // |ratio - 1| below this is a tie and the edge is dropped
  double still = 1e-14; // difference norms below this stall a tempo sample
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
  bool simple = true;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns, orthonormal
};

// Cyclic Jacobi rotations. Throws invalid_input if M is not symmetric.
EigenDecomposition jacobi_eigen(const Matrix& M, int max_sweeps = 100);

double inf_norm(const Matrix& M);
double inf_norm(const Vector& v);

// First k eigenpairs in ascending order. simple is set against both
// neighbours in the full spectrum.
std::vector<EigenPair> smallest_eigenpairs(const Matrix& M, int k, const Tolerances& tol = {});

EigenPair principal_pair_perturbed(const Matrix& LB, const Tolerances& tol = {});
EigenPair fiedler_pair(const Matrix& L, const Tolerances& tol = {});
// Smallest pair of a signed perturbed Laplacian; sigma is the gauge signature
// and the returned vector satisfies sigma_i * v_i > 0.
EigenPair principal_pair_signed(const Matrix& LBs, const Vector& sigma, const Tolerances& tol = {});

// Flip v so that its largest-magnitude entry is positive. Among entries whose
// magnitudes tie within a few ulps the lowest index decides.
void normalize_sign(Vector& v);

double entry_ratio(const Vector& v, int i, int j, const Tolerances& tol = {});

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace fsnlab
