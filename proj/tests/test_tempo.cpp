#include "doctest.h"
#include "support.hpp"

#include "fsnlab/error.hpp"
#include "fsnlab/report.hpp"
#include "fsnlab/selection.hpp"
#include "fsnlab/tempo.hpp"

#include <Eigen/QR>

#include <cmath>

using namespace fsnlab;
using fsntest::load;

namespace {

Trajectory run_san(const NetworkFile& f, const Matrix& x0, double horizon = 60) {
  Drive dr{f.cfg->input_matrix(f.net.size()), f.cfg->input_values()};
  return simulate(perturbed_laplacian(f.net, *f.cfg), dr, x0, {0.01, horizon, Method::rk4});
}

}  // namespace

TEST_CASE("eigenvector ratios on G8") {
  auto g8 = load("g8");
  Vector v1 = principal_pair_perturbed(perturbed_laplacian(g8.net, *g8.cfg)).vector;
  CHECK(tempo_limit_from_eigvec(v1, {7}, {3}) == doctest::Approx(1.0577).epsilon(2e-4));
  CHECK(tempo_limit_from_eigvec(v1, {7}, {6}) == doctest::Approx(0.8113).epsilon(2e-4));
  CHECK(tempo_limit_from_eigvec(v1, {7}, {8}) == doctest::Approx(1.4694).epsilon(2e-4));
  // set version: norms over the selected entries
  double num = std::hypot(v1(0), v1(1));
  CHECK(tempo_limit_from_eigvec(v1, {1, 2}, {3}) == doctest::Approx(num / std::abs(v1(2))));
}

TEST_CASE("g ratio on G8 is close to the limit by t = 10") {
  auto g8 = load("g8");
  Matrix x0 = initial_state(g8, 1);
  auto t = run_san(g8, x0, 20);
  Vector v1 = principal_pair_perturbed(perturbed_laplacian(g8.net, *g8.cfg)).vector;
  for (auto [i, j] : {std::pair{7, 3}, std::pair{7, 6}, std::pair{7, 8}}) {
    double lim = tempo_limit_from_eigvec(v1, {i}, {j});
    CHECK(std::abs(g_ratio_series(t, i, j).at(10.0) - lim) < 1e-3 * lim);
  }
}

TEST_CASE("T12 first-component ratios") {
  auto t12 = load("t12");
  auto t = simulate(laplacian(t12.net), std::nullopt, *t12.x0, {0.01, 60, Method::rk4});
  Vector v2 = fiedler_pair(laplacian(t12.net)).vector;
  CHECK(first_component_ratio(t, 1, 11).at(40) == doctest::Approx(entry_ratio(v2, 1, 11)).epsilon(1e-4));
  CHECK(entry_ratio(v2, 1, 11) == doctest::Approx(0.7852).epsilon(1e-3));
  CHECK(entry_ratio(v2, 1, 3) == doctest::Approx(3.298).epsilon(1e-3));
  auto s = first_component_ratio(t, 4, 6);
  CHECK(entry_ratio(v2, 4, 6) == doctest::Approx(-0.309).epsilon(2e-3));
  CHECK(s.at(40) == doctest::Approx(entry_ratio(v2, 4, 6)).epsilon(1e-4));
}

TEST_CASE("stalled samples hold NaN and are skipped") {
  Network k2(2, {{1, 2}});
  Matrix x0 = Matrix::Constant(2, 1, 0.3);
  auto t = simulate(laplacian(k2), std::nullopt, x0, {0.01, 1, Method::rk4});
  auto s = g_ratio_series(t, 1, 2);
  CHECK(s.stalled(0));
  CHECK(std::isnan(s.last()));
  auto a = assess_ratio(s);
  CHECK_FALSE(a.settled);
}

TEST_CASE("oracle on K2 and G8") {
  Network k2(2, {{1, 2}});
  Matrix x0(2, 1);
  x0 << 0, 1;
  CHECK(tempo_limit_oracle(-laplacian(k2), x0, {1}, {2}) == doctest::Approx(1));
  Matrix flat = Matrix::Constant(2, 1, 0.4);
  CHECK_THROWS_AS(tempo_limit_oracle(-laplacian(k2), flat, {1}, {2}), Error);

  auto g8 = load("g8");
  Matrix LB = perturbed_laplacian(g8.net, *g8.cfg);
  Matrix X0 = initial_state(g8, 1);
  Matrix xs = steady_state_san(LB, g8.cfg->input_matrix(8), g8.cfg->input_values());
  Vector v1 = principal_pair_perturbed(LB).vector;
  CHECK(tempo_limit_oracle(-LB, X0 - xs, {7}, {3}) == doctest::Approx(tempo_limit_from_eigvec(v1, {7}, {3})));
}

TEST_CASE("oracle with a repeated dominant eigenvalue matches simulation") {
  fsntest::Gen gen(42);
  Matrix A(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) A(r, c) = gen.uniform(-1, 1);
  Matrix Q = Eigen::HouseholderQR<Matrix>(A).householderQ();
  Vector d(4);
  d << 0.5, 0.5, 2.0, 3.0;
  Matrix G = Q * d.asDiagonal() * Q.transpose();
  G = (G + G.transpose()) / 2;
  Matrix X0 = gen.state(4, 2);
  double oracle = tempo_limit_oracle(-G, X0, {1}, {2});
  auto t = simulate(G, std::nullopt, X0, {0.01, 40, Method::rk4});
  CHECK(std::abs(g_ratio_series(t, 1, 2).at(40) - oracle) < 1e-3);
}

TEST_CASE("distributed SAN selection: agrees with the centralized selection") {
  for (const char* name : {"g6", "g8"}) {
    auto f = load(name);
    Matrix x0 = initial_state(f, 1);
    auto d = run_algorithm1(f.net, *f.cfg, x0);
    Vector v1 = principal_pair_perturbed(perturbed_laplacian(f.net, *f.cfg)).vector;
    CHECK(d.dnet.same_arcs(fsn_san(f.net, *f.cfg, v1)));
    CHECK(d.report.rounds < 100000);
    for (const auto& p : d.report.pairs) CHECK(p.rounds <= d.report.rounds);
  }
}

TEST_CASE("distributed SAN selection: with every agent a leader") {
  Network k3(3, {{1, 2}, {2, 3}, {1, 3}});
  SemiAutonomousConfig cfg;
  cfg.m = 3;
  for (int k = 1; k <= 3; ++k) {
    cfg.links.push_back({k, k, 1});
    cfg.inputs.push_back({0.5});
  }
  fsntest::Gen gen(9);
  auto d = run_algorithm1(k3, cfg, gen.state(3, 1));
  CHECK(d.dnet.arcs().empty());
}

TEST_CASE("distributed SAN selection: round cap") {
  auto g8 = load("g8");
  TempoOptions opt;
  opt.round_cap = 50;
  try {
    run_algorithm1(g8.net, *g8.cfg, initial_state(g8, 1), opt);
    FAIL("expected non-termination");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_termination);
  }
}

TEST_CASE("distributed tree selection") {
  auto t12 = load("t12");
  auto d = run_distributed_fan_tree(t12.net, *t12.x0);
  auto fp = fiedler_pair(laplacian(t12.net));
  auto dec = block_cut_tree(t12.net);
  CHECK(d.dnet.same_arcs(fsn_fan(t12.net, fp.vector, dec, classify_fiedler(dec, fp.vector))));

  Network p4(4, {{1, 2}, {2, 3}, {3, 4}});
  Matrix x0(4, 1);
  x0 << 0.9, 0.2, 0.6, 0.1;
  auto dp = run_distributed_fan_tree(p4, x0);
  auto f4 = fiedler_pair(laplacian(p4));
  auto d4 = block_cut_tree(p4);
  CHECK(dp.dnet.same_arcs(fsn_fan(p4, f4.vector, d4, classify_fiedler(d4, f4.vector))));

  Network star(4, {{1, 2}, {1, 3}, {1, 4}});
  try {
    run_distributed_fan_tree(star, x0);
    FAIL("expected precondition failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
  Network k3(3, {{1, 2}, {2, 3}, {1, 3}});
  CHECK_THROWS_AS(run_distributed_fan_tree(k3, Matrix::Zero(3, 1)), Error);
}

TEST_CASE("recorded histories approach the final ratios") {
  auto g6 = load("g6");
  TempoOptions opt;
  opt.record_history = true;
  auto d = run_algorithm1(g6.net, *g6.cfg, initial_state(g6, 1), opt);
  for (const auto& p : d.report.pairs) {
    REQUIRE_FALSE(p.history.empty());
    CHECK(p.history.back() == doctest::Approx(p.g));
  }
}
