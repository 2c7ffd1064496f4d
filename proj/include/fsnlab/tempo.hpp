#pragma once

#include "fsnlab/dynamics.hpp"
#include "fsnlab/graph.hpp"
#include "fsnlab/spectral.hpp"

#include <map>
#include <string>
#include <vector>

namespace fsnlab {

// ||v restricted to V1|| / ||v restricted to V2||.
double tempo_limit_from_eigvec(const Vector& v, const std::vector<int>& V1, const std::vector<int>& V2,
                               const Tolerances& tol = {});

// Limit of the derivative-norm ratio for xdot = M x (M symmetric) started
// from X0 (n x d), taken over the eigenspace of the largest nonzero eigenvalue.
double tempo_limit_oracle(const Matrix& M, const Matrix& X0, const std::vector<int>& V1,
                          const std::vector<int>& V2, const Tolerances& tol = {});

// values[k] compares samples k and k+1 and is stamped with times[k+1].
// Stalled samples (denominator difference below the still threshold) hold NaN.
struct RatioSeries {
  std::vector<double> times;
  std::vector<double> values;

  bool stalled(std::size_t k) const;
  // Value at the sample nearest t, walking back over stalled entries.
  double at(double t) const;
  double last() const;
};

RatioSeries g_ratio_series(const Trajectory& traj, int i, int j, double still = 1e-14);
RatioSeries first_component_ratio(const Trajectory& traj, int u, int v, double still = 1e-14);

struct RatioAssessment {
  double limit = 0.0;
  bool settled = false;
  bool divergent = false;
};
// Inspects the trailing window of finite values.
RatioAssessment assess_ratio(const RatioSeries& s, double eps = 1e-4, int window = 100);

struct TempoOptions {
  double delta = 0.01;
  double eps = 1e-4;
  std::vector<double> eps_per_agent;  // overrides eps when non-empty
  int patience = 100;                  // consecutive settled rounds required
  long round_cap = 100000;
  Method method = Method::rk4;
  double still = 1e-14;
  double tie_band = 1e-3;    // |g - 1| within this reads as a tie and drops the arc
  double zero_ratio = 1e-2;  // tree variant: |L'| below this is read as a zero limit
  bool record_history = false;
};

struct PairReport {
  int i = 0;
  int j = 0;
  double g = 0.0;
  long rounds = 0;  // rounds until agent i terminated
  bool retained = false;
  std::vector<double> history;  // g_ij(k) per round, when recorded
};

struct TempoReport {
  std::vector<PairReport> pairs;  // ordered by (i, j)
  std::vector<long> agent_rounds;
  long rounds = 0;  // rounds until the last agent terminated

  const PairReport& pair(int i, int j) const;
};

struct DistributedSelection {
  DirectedNetwork dnet;
  TempoReport report;
};

// One agent of the synchronous round model. It sees its own samples and the
// samples its neighbours exchange each round, nothing else.
class AgentState {
 public:
  enum class Rule { norm, first_component };

  AgentState(int id, std::vector<int> neighbors, double eps, int patience, Rule rule, double still,
             bool record);

  // First exchange: remembers the samples without forming ratios.
  void start(const Vector& own, const std::map<int, Vector>& nbr);
  // Later exchanges; returns true once the agent has terminated.
  bool update(long round, const Vector& own, const std::map<int, Vector>& nbr);

  int id() const { return id_; }
  bool done() const { return done_; }
  long rounds() const { return done_round_; }
  const std::vector<int>& neighbors() const { return neighbors_; }
  double g(int j) const { return g_.at(j); }
  std::vector<double> history(int j) const;

 private:
  double sample_ratio(const Vector& own_diff, const Vector& nbr_diff) const;
  bool settled(double now, double before) const;

  int id_;
  std::vector<int> neighbors_;
  double eps_;
  int patience_;
  Rule rule_;
  double still_;
  bool record_;

  Vector prev_own_;
  std::map<int, Vector> prev_nbr_;
  std::map<int, double> g_;
  std::map<int, std::vector<double>> history_;
  int streak_ = 0;
  bool done_ = false;
  long done_round_ = 0;
};

DistributedSelection run_algorithm1(const Network& net, const SemiAutonomousConfig& cfg, const Matrix& x0,
                                    const TempoOptions& opt = {});

DistributedSelection run_distributed_fan_tree(const Network& net, const Matrix& x0, const TempoOptions& opt = {});

}  // namespace fsnlab
