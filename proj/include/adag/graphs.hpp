#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adag/types.hpp"

namespace adag::graphs {

enum class GraphFamily { ER, SF };

GraphFamily family_from_string(const std::string& s);
std::string to_string(GraphFamily f);

/// Weighted adjacency matrix of a directed graph: entry (i,j) is the weight
/// of edge i -> j, zero meaning no edge. The diagonal is always zero.
struct WeightedAdjacency {
  int d = 0;
  Matrix data;

  explicit WeightedAdjacency(int d_ = 0) : d(d_), data(Matrix::Zero(d_, d_)) {}
  explicit WeightedAdjacency(Matrix m);
};

struct GraphGenSpec {
  GraphFamily family = GraphFamily::ER;
  int d = 0;
  double k = 0.0;  // expected edge count ~ k * d
  double weight_low = 0.5;
  double weight_high = 2.0;
  std::uint64_t seed = 0;
};

/// Random weighted DAG.
///
/// ER: every unordered pair carries an edge with probability 2k/(d-1), then
/// edges are oriented low-to-high along a uniformly random node permutation.
/// SF: preferential attachment with k edges per new node, old -> new, with
/// node labels shuffled by a random permutation.
/// Weights are uniform on [-weight_high,-weight_low] U [weight_low,weight_high].
WeightedAdjacency generate_dag(const GraphGenSpec& spec);

/// Exact acyclicity check (Kahn topological sort on the nonzero pattern).
bool is_acyclic(const WeightedAdjacency& adj);
bool is_acyclic_pattern(const BinMatrix& pattern);

/// Topological order of the nonzero pattern; throws if the graph is cyclic.
std::vector<int> topological_order(const WeightedAdjacency& adj);

BinMatrix pattern_of(const Matrix& m);

}  // namespace adag::graphs
