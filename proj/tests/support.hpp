#pragma once

// Shared helpers for the unit tests: random graphs, brute-force isomorphism
// and an independent matrix-exponential oracle.

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "sedwalk/sedwalk.hpp"

namespace sedwalk::testkit {

/// Erdos-Renyi graph; with `weighted`, weights are small rationals k/2.
inline WeightedGraph random_graph(std::size_t n, double p, std::mt19937& rng, bool weighted = false) {
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> num(1, 6);
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) e.push_back({u, v, weighted ? Weight(Rational(num(rng), 2)) : Weight(1)});
  return WeightedGraph(n, e);
}

/// Random connected graph (a random spanning path plus extra edges).
inline WeightedGraph random_connected_graph(std::size_t n, double p, std::mt19937& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  std::vector<Edge> e;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || has[a][b]) return;
    has[a][b] = has[b][a] = true;
    e.push_back({std::min(a, b), std::max(a, b), Weight(1)});
  };
  for (std::size_t i = 0; i + 1 < n; ++i) add(perm[i], perm[i + 1]);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) add(u, v);
  return WeightedGraph(n, e);
}

/// Brute-force isomorphism test on adjacency matrices (small graphs only).
inline bool isomorphic(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.order() != b.order() || a.size() != b.size()) return false;
  const Matrix A = adjacency_matrix(a), B = adjacency_matrix(b);
  const auto n = static_cast<Eigen::Index>(a.order());
  std::vector<double> da(a.order()), db(b.order());
  for (Eigen::Index i = 0; i < n; ++i) {
    da[static_cast<std::size_t>(i)] = A.row(i).sum();
    db[static_cast<std::size_t>(i)] = B.row(i).sum();
  }
  auto sa = da, sb = db;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  std::vector<Eigen::Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (Eigen::Index i = 0; i < n && ok; ++i)
      for (Eigen::Index j = i; j < n && ok; ++j)
        if (A(i, j) != B(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// exp(i t M) by scaling and squaring (Eigen's MatrixFunctions module).
inline Eigen::MatrixXcd expm_oracle(const Matrix& m, double t) {
  Eigen::MatrixXcd z = (std::complex<double>(0.0, t) * m.cast<std::complex<double>>()).eval();
  return z.exp();
}

/// A small corpus of named graphs used by several invariant tests.
inline std::vector<WeightedGraph> corpus() {
  std::vector<WeightedGraph> out = {
      complete(2),         complete(5),          path(4),
      path(5),             cycle(5),             cycle(6),
      star(4),             cocktail_party(3),    complete_multipartite({1, 2, 3}),
      complete_multipartite({3, 4}),             join(empty(2), complete(3)),
      join(complete(2), cycle(4)),               path_with_end_twin(5),
      threshold({2, 3, 1}, true),                direct_product(complete(3), complete(3)),
      blow_up(3, path(2)),                       cartesian_product(path(2), path(3)),
  };
  std::mt19937 rng(7);
  for (int i = 0; i < 4; ++i) out.push_back(random_graph(7, 0.45, rng, i % 2 == 1));
  return out;
}

}  // namespace sedwalk::testkit
