#pragma once

#include "fsnlab/graph.hpp"
#include "fsnlab/spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fsnlab {

struct BlockDecomposition {
  std::vector<std::vector<int>> blocks;  // sorted node lists, ordered by smallest node
  std::vector<int> cut_nodes;            // ascending
  std::vector<int> edge_block;           // edge_block[k] = block of net.edges()[k]
  std::vector<std::pair<int, int>> tree_links;  // (block index, cut node)

  bool is_cut(int node) const;
  std::vector<int> blocks_of(int node) const;
  // Number of edges inside each block.
  std::vector<int> block_edge_counts() const;
};

BlockDecomposition block_cut_tree(const Network& net);

enum class NodeSign { positive, negative, zero };
enum class BlockLabel { positive, negative, zero, core };

struct FiedlerClassification {
  enum class Case { core_block = 1, core_node = 2 };

  std::vector<NodeSign> node_sign;  // index node-1
  std::vector<BlockLabel> block_label;
  Case which = Case::core_block;
  int core_block = -1;  // Case 1
  int core_node = 0;    // Case 2
  std::vector<std::string> warnings;

  std::vector<int> zero_block_nodes(const BlockDecomposition& d) const;
};

FiedlerClassification classify_fiedler(const BlockDecomposition& decomp, const Vector& v2,
                                       const Tolerances& tol = {});

const char* to_string(NodeSign s);
const char* to_string(BlockLabel b);

}  // namespace fsnlab
