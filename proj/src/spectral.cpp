#include "fsnlab/spectral.hpp"

#include "fsnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsnlab {

double inf_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return M.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

EigenDecomposition jacobi_eigen(const Matrix& M, int max_sweeps) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) fail(ErrorKind::invalid_input, "jacobi_eigen: matrix is not square");
  const double scale = std::max(1.0, inf_norm(M));
  if (n > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorKind::invalid_input, "jacobi_eigen: matrix is not symmetric");

  Matrix A = (M + M.transpose()) / 2.0;
  Matrix V = Matrix::Identity(n, n);

  auto off = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += A(p, q) * A(p, q);
    return std::sqrt(s);
  };

  const double target = std::numeric_limits<double>::epsilon() * std::max(1e-300, A.norm());
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off() <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (apq == 0.0) continue;
        double app = A(p, p), aqq = A(q, q);
        // tan of the rotation angle, smaller root for stability
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off() > 1e3 * target)
    fail(ErrorKind::non_termination, "jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) < A(b, b); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = A(order[k], order[k]);
    out.vectors.col(k) = V.col(order[k]).normalized();
  }
  return out;
}

std::vector<EigenPair> smallest_eigenpairs(const Matrix& M, int k, const Tolerances& tol) {
  const int n = static_cast<int>(M.rows());
  if (k < 0 || k > n) fail(ErrorKind::invalid_input, "smallest_eigenpairs: k out of range");
  auto ed = jacobi_eigen(M);
  const double gap = tol.gap * std::max(1.0, inf_norm(M));
  std::vector<EigenPair> out;
  for (int i = 0; i < k; ++i) {
    EigenPair p;
    p.value = ed.values(i);
    p.vector = ed.vectors.col(i);
    bool below = i > 0 && std::abs(ed.values(i) - ed.values(i - 1)) < gap;
    bool above = i + 1 < n && std::abs(ed.values(i + 1) - ed.values(i)) < gap;
    p.simple = !(below || above);
    out.push_back(std::move(p));
  }
  return out;
}

void normalize_sign(Vector& v) {
  if (v.size() == 0) return;
  const double mx = inf_norm(v);
  if (mx == 0.0) return;
  int pick = 0;
  for (int k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) >= mx * (1.0 - 1e-12)) {
      pick = k;
      break;
    }
  }
  if (v(pick) < 0) v = -v;
}

EigenPair principal_pair_perturbed(const Matrix& LB, const Tolerances& tol) {
  if (LB.rows() == 0) fail(ErrorKind::invalid_input, "principal_pair_perturbed: empty matrix");
  auto pairs = smallest_eigenpairs(LB, 1, tol);
  EigenPair p = pairs.front();
  const double gap = tol.gap * std::max(1.0, inf_norm(LB));
  if (p.value <= gap)
    fail(ErrorKind::precondition,
         "principal_pair_perturbed: smallest eigenvalue is zero (disconnected network or no leader)");
  if (!p.simple)
    fail(ErrorKind::precondition, "principal_pair_perturbed: smallest eigenvalue is repeated");
  if (p.vector.sum() < 0) p.vector = -p.vector;
  for (int k = 0; k < p.vector.size(); ++k) {
    if (p.vector(k) < tol.pos)
      fail(ErrorKind::precondition, "principal_pair_perturbed: eigenvector entry " + std::to_string(k + 1) +
                                        " is not positive");
  }
  return p;
}

EigenPair principal_pair_signed(const Matrix& LBs, const Vector& sigma, const Tolerances& tol) {
  if (sigma.size() != LBs.rows()) fail(ErrorKind::invalid_input, "principal_pair_signed: signature length mismatch");
  Matrix G = sigma.asDiagonal();
  EigenPair p = principal_pair_perturbed(G * LBs * G, tol);
  p.vector = G * p.vector;
  return p;
}

EigenPair fiedler_pair(const Matrix& L, const Tolerances& tol) {
  if (L.rows() < 2) fail(ErrorKind::precondition, "fiedler_pair: need at least two nodes");
  auto pairs = smallest_eigenpairs(L, 2, tol);
  const double gap = tol.gap * std::max(1.0, inf_norm(L));
  if (pairs[1].value <= gap) fail(ErrorKind::precondition, "fiedler_pair: network is disconnected (lambda2 = 0)");
  // lambda1 = 0 is already separated by the check above, so simple reflects the gap to lambda3.
  EigenPair p = pairs[1];
  normalize_sign(p.vector);
  return p;
}

double entry_ratio(const Vector& v, int i, int j, const Tolerances& tol) {
  if (i == j) return 1.0;
  const double vi = v(i - 1), vj = v(j - 1);
  const double zero = tol.zero * inf_norm(v);
  if (std::abs(vj) <= zero) {
    if (std::abs(vi) <= zero) return 1.0;
    return vi > 0 ? kInf : -kInf;
  }
  if (std::abs(vi) <= zero) return 0.0;
  return vi / vj;
}

}  // namespace fsnlab
