#pragma once

#include "fsnlab/blocks.hpp"
#include "fsnlab/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fsnlab {

enum class Method { euler, rk4 };
enum class Model { fan, san, signed_san, signed_fan, reduced_directed };

const char* to_string(Method m);
const char* to_string(Model m);

struct SimulationConfig {
  double dt = 0.01;
  double horizon = 60.0;
  Method method = Method::rk4;
};

// Constant input term B U with B n x m and U m x d.
struct Drive {
  Matrix B;
  Matrix U;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;  // n x d each
  Model model = Model::fan;

  int agents() const { return states.empty() ? 0 : static_cast<int>(states.front().rows()); }
  int dims() const { return states.empty() ? 0 : static_cast<int>(states.front().cols()); }
  std::size_t size() const { return times.size(); }
  // Index of the sample closest to t.
  std::size_t index_at(double t) const;
};

// Integrates xdot = -G x (+ B U) one fixed step at a time.
class Stepper {
 public:
  Stepper(Matrix generator, std::optional<Drive> drive, Matrix x0, double dt, Method method);

  void step();
  const Matrix& state() const { return x_; }
  double time() const { return dt_ * static_cast<double>(steps_); }
  long steps() const { return steps_; }

 private:
  Matrix rhs(const Matrix& x) const;

  Matrix g_;
  Matrix forcing_;  // B U, or zero
  Matrix x_;
  double dt_;
  Method method_;
  long steps_ = 0;
};

// Throws invalid_input when Euler is requested with dt >= 1 / (2 max diag).
void check_step(const Matrix& generator, double dt, Method method);

Trajectory simulate(const Matrix& generator, const std::optional<Drive>& drive, const Matrix& x0,
                    const SimulationConfig& cfg, Model model = Model::fan);

Matrix steady_state_san(const Matrix& LB, const Matrix& B, const Matrix& U);

Vector fan_fsn_consensus_value(const Matrix& x0, const BlockDecomposition& decomp,
                               const FiedlerClassification& cls);

struct RateEstimate {
  double rate = 0.0;
  double fit_start = 0.0;
  double fit_end = 0.0;
  int samples = 0;
  bool monotone = true;
  bool converging = true;
};

RateEstimate empirical_rate(const Trajectory& traj, const Matrix& target);

}  // namespace fsnlab
