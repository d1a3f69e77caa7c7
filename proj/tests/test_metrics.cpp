#include <doctest.h>

#include <array>
#include <queue>
#include <random>

#include "adag/metrics.hpp"

using namespace adag;

namespace {

BinMatrix from_edges(int d, std::initializer_list<std::pair<int, int>> edges) {
  BinMatrix m = BinMatrix::Zero(d, d);
  for (auto [i, j] : edges) m(i, j) = 1;
  return m;
}

// Brute-force edit distance on one unordered pair: BFS over the four states
// {none, i->j, j->i, both} with add/delete/reverse moves of unit cost.
int pair_edit_distance(int a, int b) {
  auto neighbors = [](int s) {
    std::vector<int> out;
    const bool e1 = s & 1, e2 = s & 2;
    if (!e1) out.push_back(s | 1);
    if (!e2) out.push_back(s | 2);
    if (e1) out.push_back(s & ~1);
    if (e2) out.push_back(s & ~2);
    if (e1 != e2) out.push_back(3 - s);  // reverse the single edge
    return out;
  };
  if (a == b) return 0;
  std::array<int, 4> dist{-1, -1, -1, -1};
  std::queue<int> q;
  dist[a] = 0;
  q.push(a);
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (int t : neighbors(s))
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        if (t == b) return dist[t];
        q.push(t);
      }
  }
  return dist[b];
}

int shd_oracle(const BinMatrix& est, const BinMatrix& truth) {
  int total = 0;
  for (int i = 0; i < est.rows(); ++i)
    for (int j = i + 1; j < est.cols(); ++j)
      total += pair_edit_distance(est(i, j) | (est(j, i) << 1),
                                  truth(i, j) | (truth(j, i) << 1));
  return total;
}

BinMatrix random_pattern(int d, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  BinMatrix m = BinMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && u(rng) < p) m(i, j) = 1;
  return m;
}

}  // namespace

TEST_CASE("shd: identical, empty and reversed") {
  auto truth = from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  CHECK(metrics::shd(truth, truth) == 0);
  CHECK(metrics::shd(BinMatrix::Zero(6, 6), truth) == 5);

  auto fwd = from_edges(3, {{0, 1}});
  auto rev = from_edges(3, {{1, 0}});
  CHECK(metrics::shd(rev, fwd) == 1);
  CHECK(pair_edit_distance(1, 2) == 1);  // the 4-cell oracle agrees
}

TEST_CASE("shd matches the brute-force edit oracle and is a metric") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(2, 10);
  for (int t = 0; t < 200; ++t) {
    const int d = dim(rng);
    auto a = random_pattern(d, 0.3, rng);
    auto b = random_pattern(d, 0.3, rng);
    auto c = random_pattern(d, 0.3, rng);
    const int ab = metrics::shd(a, b);
    CHECK(ab == shd_oracle(a, b));
    CHECK(ab == metrics::shd(b, a));
    CHECK(ab <= metrics::shd(a, c) + metrics::shd(c, b));  // triangle
  }
}

TEST_CASE("shd rejects mismatched dimensions") {
  CHECK_THROWS(metrics::shd(BinMatrix::Zero(3, 3), BinMatrix::Zero(4, 4)));
}

TEST_CASE("tpr_fdr: examples") {
  auto truth = from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});

  auto perfect = metrics::tpr_fdr(truth, truth);
  CHECK(perfect.tpr == 1.0);
  CHECK(perfect.fdr == 0.0);

  auto none = metrics::tpr_fdr(BinMatrix::Zero(5, 5), truth);
  CHECK(none.tpr == 0.0);
  CHECK(none.fdr == 0.0);

  auto extra = truth;
  extra(0, 4) = 1;  // one wrong edge on top of all four true ones
  auto m = metrics::tpr_fdr(extra, truth);
  CHECK(m.tpr == 1.0);
  CHECK(m.fdr == doctest::Approx(0.2));
  CHECK(m.edges_true == 4);
  CHECK(m.edges_est == 5);
}

TEST_CASE("tpr_fdr: empty truth convention and bounds") {
  auto empty = BinMatrix::Zero(4, 4);
  auto est = from_edges(4, {{0, 1}});
  auto m = metrics::tpr_fdr(est, empty);
  CHECK(m.tpr == 1.0);  // convention, flagged by edges_true == 0
  CHECK(m.edges_true == 0);
  CHECK(m.fdr == 1.0);

  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    auto a = random_pattern(6, 0.4, rng);
    auto b = random_pattern(6, 0.4, rng);
    auto r = metrics::tpr_fdr(a, b);
    CHECK(r.tpr >= 0.0);
    CHECK(r.tpr <= 1.0);
    CHECK(r.fdr >= 0.0);
    CHECK(r.fdr <= 1.0);
  }
}
