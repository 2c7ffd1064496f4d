#include "doctest.h"
#include "support.hpp"

#include "fsnlab/dynamics.hpp"
#include "fsnlab/error.hpp"
#include "fsnlab/selection.hpp"

#include <cmath>

using namespace fsnlab;
using fsntest::load;

TEST_CASE("SAN G8 reaches the common input") {
  auto g8 = load("g8");
  fsntest::Gen gen(11);
  Matrix x0 = gen.state(8, 3);
  Drive dr{g8.cfg->input_matrix(8), g8.cfg->input_values()};
  auto t = simulate(perturbed_laplacian(g8.net, *g8.cfg), dr, x0, {});
  CHECK(t.size() == 6001);
  Vector u(3);
  u << 0.7, 0.8, 0.9;
  for (int a = 0; a < 8; ++a) CHECK((t.states.back().row(a).transpose() - u).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("FAN K2 averages") {
  Network k2(2, {{1, 2}});
  Matrix x0(2, 1);
  x0 << 0, 1;
  auto t = simulate(laplacian(k2), std::nullopt, x0, {});
  CHECK(t.states.back()(0, 0) == doctest::Approx(0.5));
  CHECK(t.states.back()(1, 0) == doctest::Approx(0.5));
  Matrix target = Matrix::Constant(2, 1, 0.5);
  CHECK(empirical_rate(t, target).rate == doctest::Approx(2).epsilon(0.1));
}

TEST_CASE("euler stability is checked up front") {
  Network k2(2, {{1, 2}});
  Matrix x0 = Matrix::Zero(2, 1);
  SimulationConfig bad{0.5, 1.0, Method::euler};
  CHECK_THROWS_AS(simulate(laplacian(k2), std::nullopt, x0, bad), Error);
  SimulationConfig ok{0.1, 1.0, Method::euler};
  CHECK_NOTHROW(simulate(laplacian(k2), std::nullopt, x0, ok));
}

TEST_CASE("steady states") {
  auto g8 = load("g8");
  Matrix LB = perturbed_laplacian(g8.net, *g8.cfg);
  Matrix B = g8.cfg->input_matrix(8);
  Matrix U = g8.cfg->input_values();
  Matrix ss = steady_state_san(LB, B, U);
  for (int a = 0; a < 8; ++a) CHECK((ss.row(a) - U.row(0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(steady_state_san(LB, B, Matrix::Zero(2, 3)).isZero());

  Matrix U01(2, 1);
  U01 << 0, 1;
  Matrix mixed = steady_state_san(LB, B, U01);
  CHECK(mixed.minCoeff() >= 0);
  CHECK(mixed.maxCoeff() <= 1);
  auto t = simulate(LB, Drive{B, U01}, Matrix::Zero(8, 1), {0.01, 120.0, Method::rk4});
  CHECK((t.states.back() - mixed).cwiseAbs().maxCoeff() < 1e-6);

  CHECK_THROWS_AS(steady_state_san(laplacian(g8.net), B, U), Error);
}

TEST_CASE("FAN FSN consensus value") {
  auto t12 = load("t12");
  auto f = fiedler_pair(laplacian(t12.net));
  auto d = block_cut_tree(t12.net);
  auto c = classify_fiedler(d, f.vector);
  CHECK(fan_fsn_consensus_value(*t12.x0, d, c)(0) == doctest::Approx((0.454 + 0.825) / 2));

  Network p3(3, {{1, 2}, {2, 3}});
  auto fp = fiedler_pair(laplacian(p3));
  auto dp = block_cut_tree(p3);
  Matrix x0(3, 1);
  x0 << 0.1, 0.7, 0.3;
  CHECK(fan_fsn_consensus_value(x0, dp, classify_fiedler(dp, fp.vector))(0) == doctest::Approx(0.7));

  auto g12 = load("g12");
  auto fg = fiedler_pair(laplacian(g12.net));
  auto dg = block_cut_tree(g12.net);
  auto cg = classify_fiedler(dg, fg.vector);
  fsntest::Gen gen(5);
  Matrix xg = gen.state(12, 1);
  double expect = (xg(3, 0) + xg(4, 0) + xg(5, 0)) / 3;
  CHECK(fan_fsn_consensus_value(xg, dg, cg)(0) == doctest::Approx(expect));
  auto fsn = fsn_fan(g12.net, fg.vector, dg, cg);
  auto t = simulate(reduced_laplacian(fsn), std::nullopt, xg, {});
  for (int a = 0; a < 12; ++a) CHECK(std::abs(t.states.back()(a, 0) - expect) < 1e-6);
}

TEST_CASE("empirical rates on G8") {
  auto g8 = load("g8");
  fsntest::Gen gen(3);
  Matrix x0 = gen.state(8, 3);
  Drive dr{g8.cfg->input_matrix(8), g8.cfg->input_values()};
  Matrix LB = perturbed_laplacian(g8.net, *g8.cfg);
  Matrix target = steady_state_san(LB, dr.B, dr.U);
  auto orig = simulate(LB, dr, x0, {});
  auto r0 = empirical_rate(orig, target);
  CHECK(r0.rate == doctest::Approx(0.1414).epsilon(0.1));
  CHECK(r0.converging);

  Vector v1 = principal_pair_perturbed(LB).vector;
  Matrix G = reduced_laplacian(fsn_san(g8.net, *g8.cfg, v1));
  G.diagonal() += g8.cfg->leader_diagonal(8);
  auto red = simulate(G, dr, x0, {});
  CHECK(empirical_rate(red, target).rate == doctest::Approx(1).epsilon(0.1));
}

TEST_CASE("stepper matches simulate") {
  Network k2(2, {{1, 2}});
  Matrix x0(2, 1);
  x0 << 0, 1;
  Stepper s(laplacian(k2), std::nullopt, x0, 0.01, Method::rk4);
  for (int k = 0; k < 100; ++k) s.step();
  auto t = simulate(laplacian(k2), std::nullopt, x0, {0.01, 1.0, Method::rk4});
  CHECK((s.state() - t.states.back()).isZero(0));
  CHECK(s.time() == doctest::Approx(1.0));
  // closed form: x1(t) = 0.5 - 0.5 e^{-2t}
  CHECK(s.state()(0, 0) == doctest::Approx(0.5 - 0.5 * std::exp(-2.0)).epsilon(1e-9));
}
