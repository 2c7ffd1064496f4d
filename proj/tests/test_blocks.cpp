#include "doctest.h"
#include "support.hpp"

#include "fsnlab/blocks.hpp"
#include "fsnlab/error.hpp"

using namespace fsnlab;
using fsntest::load;

TEST_CASE("G12 block-cut tree") {
  auto g12 = load("g12");
  auto d = block_cut_tree(g12.net);
  std::vector<std::vector<int>> expect{{1, 2, 3, 4}, {1, 11}, {1, 12}, {4, 5, 6}, {6, 7, 8}, {6, 9, 10}};
  CHECK(d.blocks == expect);
  CHECK(d.cut_nodes == std::vector<int>{1, 4, 6});
  CHECK(static_cast<int>(d.tree_links.size()) == static_cast<int>(d.blocks.size() + d.cut_nodes.size()) - 1);
}

TEST_CASE("trees and cycles") {
  Network path(4, {{1, 2}, {2, 3}, {3, 4}});
  auto d = block_cut_tree(path);
  CHECK(d.blocks.size() == 3);
  CHECK(d.cut_nodes == std::vector<int>{2, 3});

  Network cycle(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
  auto c = block_cut_tree(cycle);
  CHECK(c.blocks.size() == 1);
  CHECK(c.cut_nodes.empty());

  CHECK_THROWS_AS(block_cut_tree(Network(3, {{1, 2}})), Error);
}

TEST_CASE("G12 Fiedler classification") {
  auto g12 = load("g12");
  auto d = block_cut_tree(g12.net);
  auto f = fiedler_pair(laplacian(g12.net));
  auto c = classify_fiedler(d, f.vector);
  REQUIRE(c.which == FiedlerClassification::Case::core_block);
  CHECK(d.blocks[c.core_block] == std::vector<int>{4, 5, 6});
  CHECK(c.warnings.empty());
}

TEST_CASE("T12 core block") {
  auto t12 = load("t12");
  auto d = block_cut_tree(t12.net);
  auto c = classify_fiedler(d, fiedler_pair(laplacian(t12.net)).vector);
  REQUIRE(c.which == FiedlerClassification::Case::core_block);
  CHECK(d.blocks[c.core_block] == std::vector<int>{4, 6});
}

TEST_CASE("path of three has a core node") {
  Network p3(3, {{1, 2}, {2, 3}});
  auto d = block_cut_tree(p3);
  auto c = classify_fiedler(d, fiedler_pair(laplacian(p3)).vector);
  REQUIRE(c.which == FiedlerClassification::Case::core_node);
  CHECK(c.core_node == 2);
}

TEST_CASE("zero blocks from symmetry") {
  // two equal arms 1-2-3 and 1-4-5 plus a triangle 1-6-7; v2 is odd in the arms and zero on the triangle
  Network spider(7, {{1, 2}, {2, 3}, {1, 4}, {4, 5}, {1, 6}, {6, 7}, {1, 7}});
  auto f = fiedler_pair(laplacian(spider));
  REQUIRE(f.simple);
  auto d = block_cut_tree(spider);
  auto c = classify_fiedler(d, f.vector);
  CHECK(c.which == FiedlerClassification::Case::core_node);
  CHECK(c.core_node == 1);
  auto zeros = c.zero_block_nodes(d);
  CHECK(zeros == std::vector<int>{1, 6, 7});
}

TEST_CASE("monotonicity audit rejects a corrupted vector") {
  auto t12 = load("t12");
  auto d = block_cut_tree(t12.net);
  Vector v = fiedler_pair(laplacian(t12.net)).vector;
  v(0) = 0.01 * (v(0) > 0 ? 1 : -1);  // cut node 1 smaller than core-side cut node 4
  CHECK_THROWS_AS(classify_fiedler(d, v), Error);
}
