#include "doctest.h"
#include "support.hpp"

#include "fsnlab/error.hpp"
#include "fsnlab/graph.hpp"

using namespace fsnlab;
using fsntest::load;

namespace {
Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix M(rows.size(), rows.begin()->size());
  int r = 0;
  for (auto& row : rows) {
    int c = 0;
    for (double x : row) M(r, c++) = x;
    ++r;
  }
  return M;
}

Network path3(double w23 = 1.0) { return Network(3, {{1, 2, 1.0}, {2, 3, w23}}); }
}  // namespace

TEST_CASE("laplacian of small graphs") {
  CHECK(laplacian(Network(2, {{1, 2}})) == mat({{1, -1}, {-1, 1}}));
  CHECK(laplacian(path3()) == mat({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}}));
  auto g8 = load("g8");
  // node 3 touches 2, 4, 6, 7, 8
  int deg3 = 0;
  for (const auto& e : g8.net.edges()) deg3 += (e.i == 3 || e.j == 3);
  CHECK(deg3 == 5);
  CHECK(laplacian(g8.net)(2, 2) == doctest::Approx(deg3));
}

TEST_CASE("perturbed laplacian adds leader diagonal") {
  SemiAutonomousConfig cfg{1, {{1, 1, 1}}, {}};
  Matrix L = laplacian(path3());
  Matrix LB = perturbed_laplacian(path3(), cfg);
  Matrix expect = L;
  expect(0, 0) += 1;
  CHECK(LB == expect);

  auto g8 = load("g8");
  Matrix diff = perturbed_laplacian(g8.net, *g8.cfg) - laplacian(g8.net);
  for (int k = 0; k < 8; ++k) CHECK(diff(k, k) == ((k == 3 || k == 7) ? 1.0 : 0.0));

  SemiAutonomousConfig both{2, {{1, 1, 1}, {2, 2, 1}}, {}};
  Network k2(2, {{1, 2}});
  CHECK(perturbed_laplacian(k2, both) == laplacian(k2) + Matrix::Identity(2, 2));

  SemiAutonomousConfig neg{1, {{1, 1, -1}}, {}};
  CHECK_THROWS_AS(perturbed_laplacian(path3(), neg), Error);
}

TEST_CASE("signed laplacian") {
  CHECK(signed_laplacian(Network(2, {{1, 2, -1}})) == mat({{1, 1}, {1, 1}}));
  CHECK(signed_laplacian(path3(-1)) == mat({{1, -1, 0}, {-1, 2, 1}, {0, 1, 1}}));
  auto s = load("g8-signed");
  CHECK(signed_laplacian(s.net)(1, 2) == 1.0);
}

TEST_CASE("structural balance and gauge") {
  auto all_pos = structural_balance_partition(path3());
  REQUIRE(all_pos);
  CHECK(all_pos->first == std::vector<int>{1, 2, 3});
  CHECK(all_pos->second.empty());
  CHECK(gauge_matrix(*all_pos, 3) == Matrix::Identity(3, 3));

  Network tri(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, -1}});
  CHECK_FALSE(structural_balance_partition(tri));

  auto s = load("g8-signed");
  auto part = structural_balance_partition(s.net);
  REQUIRE(part);
  CHECK(part->first == std::vector<int>{1, 2, 5, 6});
  CHECK(part->second == std::vector<int>{3, 4, 7, 8});
  Matrix G = gauge_matrix(*part, 8);
  Vector diag(8);
  diag << 1, 1, -1, -1, 1, 1, -1, -1;
  CHECK(G.diagonal() == diag);
  Matrix lhs = G * signed_laplacian(s.net) * G;
  CHECK((lhs - laplacian(s.net.absolute())).cwiseAbs().maxCoeff() < 1e-12);

  auto aug = augmented_balance_partition(s.net, *s.cfg);
  REQUIRE(aug);
  CHECK(aug->first == part->first);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(Network(2, {{1, 2}})));
  CHECK_FALSE(is_connected(Network(2, {})));
  CHECK(is_connected(load("g12").net));
}

TEST_CASE("network invariants are enforced") {
  CHECK_THROWS_AS(Network(3, {{1, 1}}), Error);
  CHECK_THROWS_AS(Network(3, {{1, 4}}), Error);
  CHECK_THROWS_AS(Network(3, {{1, 2}, {2, 1}}), Error);
  CHECK_THROWS_AS(Network(3, {{1, 2, 0.0}}), Error);
  SemiAutonomousConfig rep{1, {{1, 1, 1}, {1, 1, 1}}, {}};
  CHECK_THROWS_AS(rep.validate(3), Error);
  SemiAutonomousConfig bad_input{1, {{1, 2, 1}}, {}};
  CHECK_THROWS_AS(bad_input.validate(3), Error);
}

TEST_CASE("reduced laplacian") {
  CHECK(reduced_laplacian(DirectedNetwork(4)) == Matrix::Zero(4, 4));
  // arc 2 <- 1 of the G6 chain
  DirectedNetwork d(6, {{2, 1, 1.0}, {3, 2, 1.0}});
  Matrix R = reduced_laplacian(d);
  Vector row(6);
  row << -1, 1, 0, 0, 0, 0;
  CHECK(R.row(1).transpose() == row);
  CHECK(R.row(0).isZero());

  DirectedNetwork core(12, {{4, 6, 1.0}, {6, 4, 1.0}});
  Matrix C = reduced_laplacian(core);
  CHECK(C(3, 5) == -1);
  CHECK(C(5, 3) == -1);
}

TEST_CASE("directed network helpers") {
  DirectedNetwork d(3, {{2, 1, 1.0}, {3, 2, 1.0}});
  CHECK(d.has_arc(2, 1));
  CHECK_FALSE(d.has_arc(1, 2));
  CHECK(d.reversed().has_arc(1, 2));
  CHECK(d.retained_by(3) == std::vector<int>{2});
  CHECK_THROWS_AS(DirectedNetwork(3, {{1, 1, 1.0}}), Error);
}
