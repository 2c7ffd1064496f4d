#include "fsnlab/dynamics.hpp"

#include "fsnlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fsnlab {

const char* to_string(Method m) { return m == Method::euler ? "euler" : "rk4"; }

const char* to_string(Model m) {
  switch (m) {
    case Model::fan: return "fan";
    case Model::san: return "san";
    case Model::signed_san: return "signed-san";
    case Model::signed_fan: return "signed-fan";
    default: return "reduced-directed";
  }
}

std::size_t Trajectory::index_at(double t) const {
  if (times.empty()) fail(ErrorKind::invalid_input, "trajectory is empty");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t k = static_cast<std::size_t>(it - times.begin());
  if (k > 0 && std::abs(times[k - 1] - t) <= std::abs(times[k] - t)) --k;
  return k;
}

void check_step(const Matrix& generator, double dt, Method method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::invalid_input, "simulation step must be positive");
  if (method != Method::euler || generator.rows() == 0) return;
  double dmax = generator.diagonal().cwiseAbs().maxCoeff();
  if (dmax > 0.0 && dt >= 1.0 / (2.0 * dmax))
    fail(ErrorKind::invalid_input, "euler step " + std::to_string(dt) + " is unstable; need dt < " +
                                       std::to_string(1.0 / (2.0 * dmax)));
}

Stepper::Stepper(Matrix generator, std::optional<Drive> drive, Matrix x0, double dt, Method method)
    : g_(std::move(generator)), x_(std::move(x0)), dt_(dt), method_(method) {
  const auto n = g_.rows();
  if (g_.cols() != n || x_.rows() != n)
    fail(ErrorKind::invalid_input, "simulate: generator and initial state dimensions disagree");
  check_step(g_, dt, method);
  forcing_ = Matrix::Zero(n, x_.cols());
  if (drive) {
    if (drive->B.rows() != n || drive->B.cols() != drive->U.rows() || drive->U.cols() != x_.cols())
      fail(ErrorKind::invalid_input, "simulate: input matrix dimensions disagree");
    forcing_ = drive->B * drive->U;
  }
}

Matrix Stepper::rhs(const Matrix& x) const { return forcing_ - g_ * x; }

void Stepper::step() {
  if (method_ == Method::euler) {
    x_ += dt_ * rhs(x_);
  } else {
    Matrix k1 = rhs(x_);
    Matrix k2 = rhs(x_ + 0.5 * dt_ * k1);
    Matrix k3 = rhs(x_ + 0.5 * dt_ * k2);
    Matrix k4 = rhs(x_ + dt_ * k3);
    x_ += (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  ++steps_;
}

Trajectory simulate(const Matrix& generator, const std::optional<Drive>& drive, const Matrix& x0,
                    const SimulationConfig& cfg, Model model) {
  if (!(cfg.horizon >= cfg.dt)) fail(ErrorKind::invalid_input, "simulate: horizon shorter than one step");
  Stepper s(generator, drive, x0, cfg.dt, cfg.method);
  const long steps = std::lround(cfg.horizon / cfg.dt);
  Trajectory t;
  t.model = model;
  t.times.reserve(steps + 1);
  t.states.reserve(steps + 1);
  t.times.push_back(0.0);
  t.states.push_back(s.state());
  for (long k = 0; k < steps; ++k) {
    s.step();
    t.times.push_back(s.time());
    t.states.push_back(s.state());
  }
  return t;
}

Matrix steady_state_san(const Matrix& LB, const Matrix& B, const Matrix& U) {
  if (LB.rows() != B.rows() || B.cols() != U.rows())
    fail(ErrorKind::invalid_input, "steady_state_san: dimension mismatch");
  Eigen::LLT<Matrix> llt(LB);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::precondition, "steady_state_san: perturbed Laplacian is not positive definite");
  return llt.solve(B * U);
}

Vector fan_fsn_consensus_value(const Matrix& x0, const BlockDecomposition& decomp,
                               const FiedlerClassification& cls) {
  std::set<int> nodes;
  if (cls.which == FiedlerClassification::Case::core_block) {
    const auto& b = decomp.blocks.at(cls.core_block);
    nodes.insert(b.begin(), b.end());
  } else {
    nodes.insert(cls.core_node);
  }
  for (int v : cls.zero_block_nodes(decomp)) nodes.insert(v);
  Vector avg = Vector::Zero(x0.cols());
  for (int v : nodes) {
    if (v > x0.rows()) fail(ErrorKind::invalid_input, "fan_fsn_consensus_value: x0 has too few rows");
    avg += x0.row(v - 1).transpose();
  }
  return avg / static_cast<double>(nodes.size());
}

RateEstimate empirical_rate(const Trajectory& traj, const Matrix& target) {
  if (traj.size() < 3) fail(ErrorKind::invalid_input, "empirical_rate: trajectory too short");
  const double floor = 1e-12 * std::max(1.0, target.cwiseAbs().maxCoeff());
  std::vector<double> err(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) err[k] = (traj.states[k] - target).norm();

  // effective horizon: last sample still above the round-off floor
  std::size_t last = 0;
  for (std::size_t k = 0; k < err.size(); ++k)
    if (err[k] > floor) last = k;

  RateEstimate r;
  const double t_end = traj.times[last];
  std::size_t first = traj.index_at(t_end / 2.0);
  if (last < first + 2) {
    r.converging = last == 0;  // already at the target from the start
    r.monotone = true;
    return r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = first; k <= last; ++k) {
    double x = traj.times[k], y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
    if (k > first && err[k] > err[k - 1] * (1.0 + 1e-9)) r.monotone = false;
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  r.rate = -slope;
  r.fit_start = traj.times[first];
  r.fit_end = t_end;
  r.samples = m;
  r.converging = r.rate > 0.0 && err[last] < err[0];
  return r;
}

}  // namespace fsnlab
