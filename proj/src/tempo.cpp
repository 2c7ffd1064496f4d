#include "fsnlab/tempo.hpp"

#include "fsnlab/blocks.hpp"
#include "fsnlab/error.hpp"
#include "fsnlab/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fsnlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double selected_norm(const Matrix& X, const std::vector<int>& nodes) {
  double s = 0.0;
  for (int v : nodes) {
    if (v < 1 || v > X.rows()) fail(ErrorKind::invalid_input, "node " + std::to_string(v) + " out of range");
    s += X.row(v - 1).squaredNorm();
  }
  return std::sqrt(s);
}

}  // namespace

double tempo_limit_from_eigvec(const Vector& v, const std::vector<int>& V1, const std::vector<int>& V2,
                               const Tolerances& tol) {
  if (V1.empty() || V2.empty()) fail(ErrorKind::invalid_input, "tempo_limit_from_eigvec: empty node set");
  Matrix X = v;
  double num = selected_norm(X, V1), den = selected_norm(X, V2);
  if (den <= tol.zero * inf_norm(v))
    fail(ErrorKind::precondition, "tempo_limit_from_eigvec: second set selects only zero entries");
  return num / den;
}

double tempo_limit_oracle(const Matrix& M, const Matrix& X0, const std::vector<int>& V1,
                          const std::vector<int>& V2, const Tolerances& tol) {
  if (X0.rows() != M.rows()) fail(ErrorKind::invalid_input, "tempo_limit_oracle: dimension mismatch");
  auto ed = jacobi_eigen(M);
  const int n = static_cast<int>(M.rows());
  const double gap = tol.gap * std::max(1.0, inf_norm(M));
  const double xscale = std::max(1.0, X0.cwiseAbs().maxCoeff());

  // eigenvalues with a nonzero projection, largest first; zero modes do not enter the derivative
  for (int top = n - 1; top >= 0;) {
    const double lam = ed.values(top);
    int bottom = top;
    while (bottom > 0 && std::abs(ed.values(bottom - 1) - lam) < gap) --bottom;
    if (std::abs(lam) <= gap) {
      top = bottom - 1;
      continue;
    }
    Matrix Psi = ed.vectors.middleCols(bottom, top - bottom + 1);
    Matrix P = Psi * (Psi.transpose() * X0);
    if (P.norm() <= 1e-12 * xscale) {
      top = bottom - 1;
      continue;
    }
    double den = selected_norm(P, V2);
    if (den <= 1e-12 * P.norm())
      fail(ErrorKind::precondition, "tempo_limit_oracle: dominant component vanishes on the second set");
    return selected_norm(P, V1) / den;
  }
  fail(ErrorKind::precondition, "tempo_limit_oracle: initial state has no projection on a nonzero eigenspace");
}

bool RatioSeries::stalled(std::size_t k) const { return std::isnan(values.at(k)); }

double RatioSeries::at(double t) const {
  if (times.empty()) fail(ErrorKind::invalid_input, "ratio series is empty");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.end() ? times.size() - 1 : static_cast<std::size_t>(it - times.begin());
  if (k > 0 && std::abs(times[k - 1] - t) <= std::abs(times[k] - t)) --k;
  while (k > 0 && stalled(k)) --k;
  return values[k];
}

double RatioSeries::last() const { return times.empty() ? kNaN : at(times.back()); }

namespace {

template <class Measure>
RatioSeries ratio_series(const Trajectory& traj, int i, int j, double still, Measure measure) {
  if (traj.size() < 2) fail(ErrorKind::invalid_input, "ratio series: trajectory too short");
  const int n = traj.agents();
  if (i < 1 || i > n || j < 1 || j > n) fail(ErrorKind::invalid_input, "ratio series: node out of range");
  RatioSeries s;
  s.times.reserve(traj.size() - 1);
  s.values.reserve(traj.size() - 1);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    Vector di = (traj.states[k].row(i - 1) - traj.states[k - 1].row(i - 1)).transpose();
    Vector dj = (traj.states[k].row(j - 1) - traj.states[k - 1].row(j - 1)).transpose();
    s.times.push_back(traj.times[k]);
    s.values.push_back(measure(di, dj, still));
  }
  return s;
}

}  // namespace

RatioSeries g_ratio_series(const Trajectory& traj, int i, int j, double still) {
  return ratio_series(traj, i, j, still, [](const Vector& a, const Vector& b, double st) {
    double den = b.norm();
    return den < st ? kNaN : a.norm() / den;
  });
}

RatioSeries first_component_ratio(const Trajectory& traj, int u, int v, double still) {
  return ratio_series(traj, u, v, still, [](const Vector& a, const Vector& b, double st) {
    return std::abs(b(0)) < st ? kNaN : a(0) / b(0);
  });
}

RatioAssessment assess_ratio(const RatioSeries& s, double eps, int window) {
  RatioAssessment r;
  std::vector<double> tail;
  for (std::size_t k = s.values.size(); k-- > 0 && static_cast<int>(tail.size()) < window + 1;)
    if (!s.stalled(k)) tail.push_back(s.values[k]);
  if (tail.empty()) return r;
  r.limit = tail.front();
  r.settled = tail.size() > 1;
  bool recip = tail.size() > 1;
  for (std::size_t k = 1; k < tail.size(); ++k) {
    if (std::abs(tail[k] - tail[k - 1]) >= eps) r.settled = false;
    if (!(std::abs(tail[k]) > 1 && std::abs(tail[k - 1]) > 1 && std::abs(1 / tail[k] - 1 / tail[k - 1]) < eps))
      recip = false;
  }
  r.divergent = std::abs(r.limit) > 1.0 / eps && recip;
  r.settled = r.settled || recip;
  return r;
}

const PairReport& TempoReport::pair(int i, int j) const {
  for (const auto& p : pairs)
    if (p.i == i && p.j == j) return p;
  fail(ErrorKind::invalid_input, "no tempo entry for pair " + std::to_string(i) + ":" + std::to_string(j));
}

AgentState::AgentState(int id, std::vector<int> neighbors, double eps, int patience, Rule rule, double still,
                       bool record)
    : id_(id), neighbors_(std::move(neighbors)), eps_(eps), patience_(patience), rule_(rule), still_(still),
      record_(record) {
  for (int j : neighbors_) g_[j] = kNaN;
}

void AgentState::start(const Vector& own, const std::map<int, Vector>& nbr) {
  prev_own_ = own;
  for (int j : neighbors_) prev_nbr_[j] = nbr.at(j);
}

std::vector<double> AgentState::history(int j) const {
  auto it = history_.find(j);
  return it == history_.end() ? std::vector<double>{} : it->second;
}

double AgentState::sample_ratio(const Vector& a, const Vector& b) const {
  if (rule_ == Rule::norm) {
    double den = b.norm();
    return den < still_ ? kNaN : a.norm() / den;
  }
  return std::abs(b(0)) < still_ ? kNaN : a(0) / b(0);
}

bool AgentState::settled(double now, double before) const {
  if (std::abs(now - before) < eps_) return true;
  // a ratio running off to infinity settles in its reciprocal
  return rule_ == Rule::first_component && std::abs(now) > 1 && std::abs(before) > 1 &&
         std::abs(1 / now - 1 / before) < eps_;
}

bool AgentState::update(long round, const Vector& own, const std::map<int, Vector>& nbr) {
  if (done_) return true;
  Vector own_diff = own - prev_own_;
  bool ok = true;
  for (int j : neighbors_) {
    const Vector& xj = nbr.at(j);
    double now = sample_ratio(own_diff, xj - prev_nbr_[j]);
    prev_nbr_[j] = xj;
    if (std::isnan(now)) continue;  // stalled: keep the last estimate
    if (!settled(now, g_[j])) ok = false;
    g_[j] = now;
    if (record_) history_[j].push_back(now);
  }
  prev_own_ = own;
  streak_ = ok ? streak_ + 1 : 0;
  if (streak_ >= patience_) {
    done_ = true;
    done_round_ = round;
  }
  return done_;
}

namespace {

struct RoundOutcome {
  std::vector<AgentState> agents;
  long rounds = 0;
};

// Drives the plant one step per round and exchanges the sampled states.
RoundOutcome run_rounds(const Network& net, Stepper plant, const TempoOptions& opt, AgentState::Rule rule) {
  const int n = net.size();
  if (!(opt.delta > 0)) fail(ErrorKind::invalid_input, "sampling step must be positive");
  if (opt.patience < 1) fail(ErrorKind::invalid_input, "patience must be at least one round");
  if (!opt.eps_per_agent.empty() && static_cast<int>(opt.eps_per_agent.size()) != n)
    fail(ErrorKind::invalid_input, "per-agent thresholds must have one entry per agent");

  RoundOutcome out;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> nb;
    for (const auto& x : net.neighbors(i)) nb.push_back(x.node);
    double eps = opt.eps_per_agent.empty() ? opt.eps : opt.eps_per_agent[i - 1];
    out.agents.emplace_back(i, std::move(nb), eps, opt.patience, rule, opt.still, opt.record_history);
  }

  auto exchange = [&](auto&& visit) {
    const Matrix& x = plant.state();
    for (auto& a : out.agents) {
      std::map<int, Vector> nbr;
      for (int j : a.neighbors()) nbr[j] = x.row(j - 1).transpose();
      visit(a, Vector(x.row(a.id() - 1).transpose()), nbr);
    }
  };

  exchange([](AgentState& a, const Vector& own, const std::map<int, Vector>& nbr) { a.start(own, nbr); });
  long round = 0;
  bool all_done = false;
  while (!all_done) {
    if (round >= opt.round_cap) {
      std::ostringstream os;
      os << "distributed selection did not terminate within " << opt.round_cap << " rounds; still running:";
      for (const auto& a : out.agents)
        if (!a.done()) os << " " << a.id();
      fail(ErrorKind::non_termination, os.str());
    }
    plant.step();
    ++round;
    all_done = true;
    exchange([&](AgentState& a, const Vector& own, const std::map<int, Vector>& nbr) {
      all_done = a.update(round, own, nbr) && all_done;
    });
  }
  out.rounds = round;
  return out;
}

template <class Keep>
DistributedSelection collect(const Network& net, const RoundOutcome& r, Keep keep) {
  DistributedSelection res;
  std::vector<Arc> arcs;
  res.report.rounds = r.rounds;
  for (const auto& a : r.agents) {
    res.report.agent_rounds.push_back(a.rounds());
    for (int j : a.neighbors()) {
      PairReport p;
      p.i = a.id();
      p.j = j;
      p.g = a.g(j);
      p.rounds = a.rounds();
      p.retained = keep(p.g);
      p.history = a.history(j);
      if (p.retained) arcs.push_back({p.i, p.j, *net.weight(p.i, p.j)});
      res.report.pairs.push_back(std::move(p));
    }
  }
  res.dnet = DirectedNetwork(net.size(), std::move(arcs));
  return res;
}

}  // namespace

DistributedSelection run_algorithm1(const Network& net, const SemiAutonomousConfig& cfg, const Matrix& x0,
                                    const TempoOptions& opt) {
  cfg.validate(net.size());
  if (!is_connected(net)) fail(ErrorKind::precondition, "run_algorithm1: network is disconnected");
  if (cfg.links.empty()) fail(ErrorKind::precondition, "run_algorithm1: no leader");
  if (cfg.is_signed()) fail(ErrorKind::invalid_input, "run_algorithm1: signed leader links are not supported");
  if (x0.rows() != net.size()) fail(ErrorKind::invalid_input, "run_algorithm1: x0 must have one row per agent");
  Matrix U = cfg.inputs.empty() ? Matrix::Zero(cfg.m, x0.cols()) : cfg.input_values();
  if (U.cols() != x0.cols()) fail(ErrorKind::invalid_input, "run_algorithm1: input and state dimensions differ");

  Stepper plant(perturbed_laplacian(net, cfg), Drive{cfg.input_matrix(net.size()), U}, x0, opt.delta, opt.method);
  auto r = run_rounds(net, std::move(plant), opt, AgentState::Rule::norm);
  const double tie = opt.tie_band;
  return collect(net, r, [tie](double g) { return g > 1.0 + tie; });
}

DistributedSelection run_distributed_fan_tree(const Network& net, const Matrix& x0, const TempoOptions& opt) {
  if (!is_tree(net)) fail(ErrorKind::precondition, "run_distributed_fan_tree: network is not a tree");
  if (x0.rows() != net.size() || x0.cols() < 1)
    fail(ErrorKind::invalid_input, "run_distributed_fan_tree: x0 must have one row per agent");
  // The agents cannot check these themselves; the harness refuses inputs outside the method's scope.
  Matrix L = laplacian(net);
  auto f = fiedler_pair(L);
  if (!f.simple) fail(ErrorKind::precondition, "run_distributed_fan_tree: lambda2 is repeated");
  auto cls = classify_fiedler(block_cut_tree(net), f.vector);
  for (auto b : cls.block_label)
    if (b == BlockLabel::zero) fail(ErrorKind::precondition, "run_distributed_fan_tree: tree has zero blocks");

  Stepper plant(L, std::nullopt, x0, opt.delta, opt.method);
  auto r = run_rounds(net, std::move(plant), opt, AgentState::Rule::first_component);
  const double zeta = opt.zero_ratio, tie = opt.tie_band;
  return collect(net, r, [zeta, tie](double g) { return g > 1.0 + tie || g < -zeta; });
}

}  // namespace fsnlab
