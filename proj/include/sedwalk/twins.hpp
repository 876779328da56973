#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedwalk/graph.hpp"
#include "sedwalk/spectral.hpp"

namespace sedwalk {

/// Maximal set of pairwise twins sharing loop weight omega and internal edge weight eta.
struct TwinSet {
  std::vector<std::size_t> members;
  double omega = 0.0;
  double eta = 0.0;

  bool contains(std::size_t u) const { return std::find(members.begin(), members.end(), u) != members.end(); }
  std::size_t size() const { return members.size(); }
};

namespace detail {

inline bool same_optional_weight(const std::optional<Weight>& a, const std::optional<Weight>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || a->same_as(*b);
}

}  // namespace detail

/// Exact combinatorial twin test: equal neighbourhoods outside {u, v} with
/// matching edge weights, and equal loops.
inline bool are_twins(const WeightedGraph& g, std::size_t u, std::size_t v) {
  if (u >= g.order() || v >= g.order()) throw std::out_of_range("are_twins: vertex out of range");
  if (u == v) return false;
  if (!detail::same_optional_weight(g.weight(u, u), g.weight(v, v))) return false;
  for (std::size_t w = 0; w < g.order(); ++w) {
    if (w == u || w == v) continue;
    if (!detail::same_optional_weight(g.weight(u, w), g.weight(v, w))) return false;
  }
  return true;
}

/// Partitions every vertex that has a twin into maximal twin sets. Being twins
/// is an equivalence relation, so the sets are its classes of size >= 2.
inline std::vector<TwinSet> find_twin_sets(const WeightedGraph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (find(u) != find(v) && are_twins(g, u, v)) root[find(v)] = find(u);

  std::vector<std::vector<std::size_t>> classes(n);
  for (std::size_t u = 0; u < n; ++u) classes[find(u)].push_back(u);
  std::vector<TwinSet> out;
  for (auto& c : classes) {
    if (c.size() < 2) continue;
    TwinSet t;
    t.members = c;
    auto loop = g.weight(c[0], c[0]);
    auto edge = g.weight(c[0], c[1]);
    t.omega = loop ? loop->value() : 0.0;
    t.eta = edge ? edge->value() : 0.0;
    out.push_back(std::move(t));
  }
  return out;
}

inline std::optional<TwinSet> twin_set_of(const WeightedGraph& g, std::size_t u) {
  for (auto& t : find_twin_sets(g))
    if (t.contains(u)) return t;
  return std::nullopt;
}

/// theta with M (e_u - e_v) = theta (e_u - e_v) for u, v in T:
/// q deg(u) + omega - eta for M_q, omega - eta for A and deg(u) - omega + eta for L.
inline double twin_eigenvalue(const WeightedGraph& g, MatrixKind kind, const TwinSet& t) {
  if (t.members.empty()) throw std::invalid_argument("twin_eigenvalue: empty twin set");
  const double deg = g.degree(t.members.front());
  switch (kind.type()) {
    case MatrixKind::Type::Adjacency: return t.omega - t.eta;
    case MatrixKind::Type::Laplacian: return deg - t.omega + t.eta;
    case MatrixKind::Type::Generalized: return kind.q() * deg + t.omega - t.eta;
  }
  throw std::logic_error("unknown matrix kind");
}

/// E_theta = P_T + F where P_T projects onto span{e_u - e_v : u, v in T} and F
/// projects onto the rest of the theta eigenspace.
struct ThetaEigenspaceSplit {
  double theta = 0.0;
  std::size_t theta_index = 0;
  std::size_t b1_dim = 0;
  std::size_t multiplicity = 0;
  Matrix F;
  /// (E_theta)_{u,u} = 1 - 1/|T| + F_{u,u} for u in T.
  double e_theta_uu(std::size_t u, std::size_t set_size) const {
    return 1.0 - 1.0 / static_cast<double>(set_size) + F(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
  }
};

inline ThetaEigenspaceSplit theta_split(const WeightedGraph& g, const SpectralDecomposition& dec, const TwinSet& t) {
  ThetaEigenspaceSplit s;
  s.theta = twin_eigenvalue(g, dec.kind(), t);
  double tol = std::max(1e-6, 1e3 * dec.grouping_tol());
  auto idx = dec.find(s.theta, tol);
  if (!idx) {
    throw std::logic_error("twin eigenvalue " + std::to_string(s.theta) +
                           " is missing from the computed spectrum (numerical inconsistency)");
  }
  s.theta_index = *idx;
  s.b1_dim = t.size() - 1;
  s.multiplicity = dec.multiplicities()[*idx];
  const auto n = static_cast<Eigen::Index>(dec.order());
  Matrix p = Matrix::Zero(n, n);
  const double inv = 1.0 / static_cast<double>(t.size());
  for (auto a : t.members)
    for (auto b : t.members)
      p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (a == b ? 1.0 : 0.0) - inv;
  s.F = dec.projectors()[*idx] - p;
  return s;
}

enum class TwinBranch { Sedentary, PgstCandidate };

struct TwinDichotomy {
  TwinBranch branch = TwinBranch::Sedentary;
  std::optional<std::size_t> partner;
  std::string reason;
  double f_uu = 0.0;
};

/// Sedentary when |T| >= 3 or the theta eigenspace reaches u beyond e_u - e_v;
/// otherwise u and its twin are strongly cospectral and the pair must be
/// examined further (PST, PGST or sedentary).
inline TwinDichotomy twin_dichotomy(const WeightedGraph& g, const SpectralDecomposition& dec, const TwinSet& t,
                                    std::size_t u, double tol = 1e-9) {
  if (!t.contains(u)) throw std::invalid_argument("twin_dichotomy: vertex is not in the twin set");
  TwinDichotomy d;
  auto split = theta_split(g, dec, t);
  d.f_uu = split.F(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
  if (t.size() >= 3) {
    d.reason = "twin set of size " + std::to_string(t.size()) + " >= 3";
    return d;
  }
  std::size_t v = t.members[0] == u ? t.members[1] : t.members[0];
  if (d.f_uu > tol) {
    d.reason = "theta eigenvector outside span{e_u - e_v} meets u";
    return d;
  }
  d.branch = TwinBranch::PgstCandidate;
  d.partner = v;
  d.reason = "theta eigenspace meets {u, v} only through e_u - e_v: strongly cospectral pair";
  return d;
}

}  // namespace sedwalk
