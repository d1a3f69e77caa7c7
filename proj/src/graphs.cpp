#include "adag/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace adag::graphs {

GraphFamily family_from_string(const std::string& s) {
  if (s == "er" || s == "ER") return GraphFamily::ER;
  if (s == "sf" || s == "SF") return GraphFamily::SF;
  throw std::invalid_argument("unknown graph family: " + s);
}

std::string to_string(GraphFamily f) {
  return f == GraphFamily::ER ? "er" : "sf";
}

WeightedAdjacency::WeightedAdjacency(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("adjacency matrix must be square");
  d = static_cast<int>(m.rows());
  data = std::move(m);
  data.diagonal().setZero();
}

namespace {

double draw_weight(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double w = mag(rng);
  return coin(rng) < 0.5 ? -w : w;
}

}  // namespace

WeightedAdjacency generate_dag(const GraphGenSpec& spec) {
  if (spec.d < 2) throw std::invalid_argument("generate_dag: need d >= 2");
  if (spec.k < 0) throw std::invalid_argument("generate_dag: need k >= 0");
  if (!(spec.weight_low > 0 && spec.weight_low <= spec.weight_high))
    throw std::invalid_argument("generate_dag: need 0 < weight_low <= weight_high");

  const int d = spec.d;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Random rank permutation; edges point from lower to higher rank so the
  // ground truth is acyclic without being axis-aligned triangular.
  std::vector<int> rank(d);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);

  WeightedAdjacency adj(d);

  if (spec.family == GraphFamily::ER) {
    const double p = 2.0 * spec.k / (d - 1);
    if (p > 1.0)
      throw std::invalid_argument("generate_dag: ER edge probability 2k/(d-1) exceeds 1");
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (unit(rng) < p) {
          int u = rank[i] < rank[j] ? i : j;
          int v = rank[i] < rank[j] ? j : i;
          adj.data(u, v) = draw_weight(rng, spec.weight_low, spec.weight_high);
        }
      }
    }
    return adj;
  }

  // Scale-free: preferential attachment, m = round(k) edges per new node.
  const int m = static_cast<int>(std::lround(spec.k));
  if (m < 1) throw std::invalid_argument("generate_dag: SF needs k >= 1");
  if (m >= d) throw std::invalid_argument("generate_dag: SF needs k < d");

  // Construction order -> final labels through a random permutation so the
  // hubs are not concentrated at low indices.
  std::vector<int> label(d);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);

  std::vector<int> targets(m);
  std::iota(targets.begin(), targets.end(), 0);
  std::vector<int> repeated;  // node id repeated once per incident edge
  for (int src = m; src < d; ++src) {
    for (int t : targets) {
      adj.data(label[t], label[src]) = draw_weight(rng, spec.weight_low, spec.weight_high);
      repeated.push_back(t);
      repeated.push_back(src);
    }
    // next targets: m distinct draws weighted by degree
    std::vector<int> next;
    while (static_cast<int>(next.size()) < m) {
      std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
      int cand = repeated[pick(rng)];
      if (std::find(next.begin(), next.end(), cand) == next.end()) next.push_back(cand);
    }
    targets = std::move(next);
  }
  return adj;
}

BinMatrix pattern_of(const Matrix& m) {
  BinMatrix p(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) p(i, j) = m(i, j) != 0.0 ? 1 : 0;
  return p;
}

bool is_acyclic_pattern(const BinMatrix& pattern) {
  const int d = static_cast<int>(pattern.rows());
  std::vector<int> indeg(d, 0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (i != j && pattern(i, j)) ++indeg[j];
  std::deque<int> q;
  for (int j = 0; j < d; ++j)
    if (indeg[j] == 0) q.push_back(j);
  int seen = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    ++seen;
    for (int v = 0; v < d; ++v) {
      if (v != u && pattern(u, v)) {
        if (--indeg[v] == 0) q.push_back(v);
      }
    }
  }
  return seen == d;
}

bool is_acyclic(const WeightedAdjacency& adj) {
  return is_acyclic_pattern(pattern_of(adj.data));
}

std::vector<int> topological_order(const WeightedAdjacency& adj) {
  const int d = adj.d;
  std::vector<int> indeg(d, 0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (i != j && adj.data(i, j) != 0.0) ++indeg[j];
  std::deque<int> q;
  for (int j = 0; j < d; ++j)
    if (indeg[j] == 0) q.push_back(j);
  std::vector<int> order;
  order.reserve(d);
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    order.push_back(u);
    for (int v = 0; v < d; ++v) {
      if (v != u && adj.data(u, v) != 0.0) {
        if (--indeg[v] == 0) q.push_back(v);
      }
    }
  }
  if (static_cast<int>(order.size()) != d)
    throw std::invalid_argument("topological_order: graph contains a cycle");
  return order;
}

}  // namespace adag::graphs
