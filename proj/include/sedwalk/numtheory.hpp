#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedwalk::numtheory {

/// 2-adic valuation. Throws for 0, whose valuation is infinite.
inline int nu2(std::int64_t a) {
  if (a == 0) throw std::domain_error("nu2(0) is infinite");
  std::uint64_t m = a < 0 ? 0 - static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(a);
  int r = 0;
  while ((m & 1u) == 0) {
    m >>= 1;
    ++r;
  }
  return r;
}

/// Exact integer square test; returns the root when n is a perfect square.
inline std::optional<std::int64_t> is_perfect_square(std::int64_t n) {
  if (n < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  if (static_cast<__int128>(r) * r == n) return r;
  return std::nullopt;
}

struct SquareFreeSplit {
  std::int64_t square_free;  // s
  std::int64_t factor;       // f, with n = f^2 s
};

inline SquareFreeSplit square_free_part(std::int64_t n) {
  if (n < 1) throw std::domain_error("square_free_part needs n >= 1");
  std::int64_t s = 1, f = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) f *= p;
    if (e % 2 == 1) s *= p;
  }
  s *= n;
  return {s, f};
}

inline std::int64_t gcd_set(std::span<const std::int64_t> values) {
  std::int64_t g = 0;
  for (auto v : values) g = std::gcd(g, v);
  return g;
}

inline std::int64_t gcd_set(std::initializer_list<std::int64_t> values) {
  return gcd_set(std::span<const std::int64_t>(values.begin(), values.size()));
}

/// Exact value (p + q sqrt(delta)) / 2 with integers p, q and square-free
/// delta >= 1. Integers carry q == 0.
struct QuadraticValue {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t delta = 1;

  double value() const { return 0.5 * (static_cast<double>(p) + q * std::sqrt(static_cast<double>(delta))); }
  bool is_integer() const { return q == 0 && p % 2 == 0; }
};

/// Shared-form recognition result: value j equals (a + b_j sqrt(delta)) / 2.
/// With delta == 1 the values are plain integers, a == 0 and b_j = 2 lambda_j.
struct QuadraticIntegerForm {
  std::int64_t a = 0;
  std::vector<std::int64_t> b;
  std::int64_t delta = 1;

  double value(std::size_t j) const {
    return 0.5 * (static_cast<double>(a) + b[j] * std::sqrt(static_cast<double>(delta)));
  }
};

namespace detail {

inline std::optional<std::int64_t> near_integer(double x, double tol) {
  double r = std::round(x);
  if (std::abs(x - r) > tol || std::abs(r) > 9.0e15) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

inline double scale_of(std::span<const double> values) {
  double s = 1.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

/// Candidate square-free radicands read off from pairwise differences:
/// 4 (x - y)^2 must be an integer f^2 delta for conjugate-style pairs.
inline std::vector<std::int64_t> candidate_radicands(std::span<const double> values, double tol) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      double d = 2.0 * (values[i] - values[j]);
      auto n = near_integer(d * d, tol * std::max(1.0, std::abs(d)) * 4.0);
      if (!n || *n <= 0) continue;
      auto split = square_free_part(*n);
      if (split.square_free > 1 &&
          std::find(out.begin(), out.end(), split.square_free) == out.end()) {
        out.push_back(split.square_free);
      }
    }
    double d = 2.0 * values[i];
    auto n = near_integer(d * d, tol * std::max(1.0, std::abs(d)) * 4.0);
    if (n && *n > 0) {
      auto split = square_free_part(*n);
      if (split.square_free > 1 &&
          std::find(out.begin(), out.end(), split.square_free) == out.end()) {
        out.push_back(split.square_free);
      }
    }
  }
  return out;
}

/// Finds integers (p, q) with 2x = p + q sqrt(delta), preferring the smallest |q|.
inline std::optional<QuadraticValue> fit_value(double x, std::int64_t delta, double tol) {
  const double root = std::sqrt(static_cast<double>(delta));
  const auto qmax = static_cast<std::int64_t>(std::ceil(2.0 * (std::abs(x) + 64.0) / root)) + 2;
  for (std::int64_t mag = 0; mag <= qmax; ++mag) {
    for (std::int64_t q : {mag, -mag}) {
      auto p = near_integer(2.0 * x - q * root, 2.0 * tol);
      if (p) return QuadraticValue{*p, q, delta};
      if (mag == 0) break;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Recognizes every value as (p_j + q_j sqrt(delta)) / 2 with one common
/// square-free delta (delta == 1 when all values are integers). The p_j may
/// differ. `tol` is absolute after scaling by max(1, max |value|).
inline std::optional<std::vector<QuadraticValue>> recognize_values(std::span<const double> values,
                                                                    double tol = 1e-7) {
  const double t = tol * detail::scale_of(values);
  std::vector<QuadraticValue> out;
  bool integral = true;
  for (double v : values) {
    if (!std::isfinite(v)) return std::nullopt;
    auto n = detail::near_integer(v, t);
    if (!n) {
      integral = false;
      break;
    }
    out.push_back({2 * *n, 0, 1});
  }
  if (integral) return out;
  for (std::int64_t delta : detail::candidate_radicands(values, t)) {
    out.clear();
    bool ok = true;
    for (double v : values) {
      auto fit = detail::fit_value(v, delta, t);
      if (!fit) {
        ok = false;
        break;
      }
      out.push_back(*fit);
    }
    if (ok) return out;
  }
  return std::nullopt;
}

/// Recognizes a spectrum either as integers (delta == 1) or as quadratic
/// integers (a + b_j sqrt(delta)) / 2 sharing one a and one square-free delta.
/// Integer members are admitted into a delta > 1 family only through b_j == 0
/// with 2 lambda_j == a.
inline std::optional<QuadraticIntegerForm> recognize_spectrum(std::span<const double> values, double tol = 1e-7) {
  auto exact = recognize_values(values, tol);
  if (!exact) return std::nullopt;
  QuadraticIntegerForm form;
  if (exact->empty()) return form;
  form.delta = exact->front().delta;
  if (form.delta == 1) {
    for (const auto& v : *exact) form.b.push_back(v.p);
    return form;
  }
  form.a = exact->front().p;
  for (const auto& v : *exact) {
    if (v.p != form.a) return std::nullopt;
    form.b.push_back(v.q);
  }
  return form;
}

/// Differences lambda_ref - lambda_k written as c_k * unit with integer c_k
/// and unit = sqrt(delta) / 2.
struct DifferenceForm {
  std::int64_t delta = 1;
  std::vector<std::int64_t> coeffs;

  double unit() const { return 0.5 * std::sqrt(static_cast<double>(delta)); }
};

/// Recognizes the differences {values[ref] - values[k]} as integer multiples
/// of sqrt(delta)/2. This is invariant under a common shift of the values,
/// which is what periodicity and the phase conditions depend on.
inline std::optional<DifferenceForm> recognize_differences(std::span<const double> values, std::size_t ref,
                                                           double tol = 1e-7) {
  if (ref >= values.size()) throw std::out_of_range("recognize_differences: bad reference index");
  std::vector<double> diffs;
  diffs.reserve(values.size());
  for (double v : values) diffs.push_back(values[ref] - v);
  const double t = tol * detail::scale_of(values);
  DifferenceForm form;
  bool integral = true;
  for (double d : diffs) {
    auto n = detail::near_integer(2.0 * d, 2.0 * t);
    if (!n) {
      integral = false;
      break;
    }
    form.coeffs.push_back(*n);
  }
  if (integral) return form;
  std::optional<std::int64_t> delta;
  form.coeffs.clear();
  for (double d : diffs) {
    double sq = 4.0 * d * d;
    auto n = detail::near_integer(sq, 8.0 * t * std::max(1.0, std::abs(d)));
    if (!n) return std::nullopt;
    if (*n == 0) {
      form.coeffs.push_back(0);
      continue;
    }
    auto split = square_free_part(*n);
    if (delta && *delta != split.square_free) return std::nullopt;
    delta = split.square_free;
    form.coeffs.push_back(d > 0 ? split.factor : -split.factor);
  }
  form.delta = delta.value_or(1);
  // confirm the reconstruction against the floating values
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (std::abs(form.coeffs[k] * form.unit() - diffs[k]) > 4.0 * t) return std::nullopt;
  }
  return form;
}

/// Smallest tau > 0 with exp(i tau c) = 1 for every c in `one` and
/// exp(i tau c) = -1 for every c in `minus_one`, or nullopt when no such
/// tau exists. Solvable iff every element of minus_one has the same 2-adic
/// valuation v and every nonzero element of `one` has valuation > v; then
/// tau = pi / gcd(all).
inline std::optional<double> phase_time(std::span<const std::int64_t> one, std::span<const std::int64_t> minus_one) {
  if (minus_one.empty()) return std::nullopt;
  std::optional<int> v;
  for (auto c : minus_one) {
    if (c == 0) return std::nullopt;
    int k = nu2(c);
    if (v && *v != k) return std::nullopt;
    v = k;
  }
  for (auto c : one) {
    if (c != 0 && nu2(c) <= *v) return std::nullopt;
  }
  std::int64_t g = 0;
  for (auto c : minus_one) g = std::gcd(g, c);
  for (auto c : one) g = std::gcd(g, c);
  return std::numbers::pi / static_cast<double>(g);
}

enum class RelationVerdict { RelationWithOddSum, AllRelationsEvenSum, Inconclusive };

inline const char* to_string(RelationVerdict v) {
  switch (v) {
    case RelationVerdict::RelationWithOddSum: return "RelationWithOddSum";
    case RelationVerdict::AllRelationsEvenSum: return "AllRelationsEvenSum";
    case RelationVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct RelationResult {
  RelationVerdict verdict = RelationVerdict::Inconclusive;
  /// An odd-sum relation (coefficients for plus then minus) when one exists.
  std::vector<std::int64_t> witness;
  /// Rank of the relation lattice (exact search only).
  std::size_t lattice_rank = 0;
};

namespace detail {

inline void check_common_radicand(std::span<const QuadraticValue> plus, std::span<const QuadraticValue> minus) {
  std::optional<std::int64_t> delta;
  auto visit = [&](const QuadraticValue& v) {
    if (v.q == 0) return;
    if (delta && *delta != v.delta) throw std::invalid_argument("integer_relation_parity: mixed radicands");
    delta = v.delta;
  };
  for (const auto& v : plus) visit(v);
  for (const auto& v : minus) visit(v);
}

/// Integer kernel basis of a small integer matrix via unimodular column
/// operations (Euclid on each row). Rows are constraints, columns unknowns.
inline std::vector<std::vector<std::int64_t>> integer_kernel(std::vector<std::vector<std::int64_t>> rows,
                                                             std::size_t cols) {
  std::vector<std::vector<__int128>> a(rows.size(), std::vector<__int128>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = rows[i][j];
  std::vector<std::vector<__int128>> u(cols, std::vector<__int128>(cols, 0));
  for (std::size_t j = 0; j < cols; ++j) u[j][j] = 1;  // u[col] is the column vector

  auto col_op = [&](std::size_t dst, std::size_t src, __int128 factor) {
    for (auto& row : a) row[dst] -= factor * row[src];
    for (std::size_t k = 0; k < cols; ++k) u[dst][k] -= factor * u[src][k];
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
    std::swap(u[x], u[y]);
  };
  constexpr __int128 lim = static_cast<__int128>(1) << 100;
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < a.size() && pivot < cols; ++i) {
    while (true) {
      std::size_t best = cols;
      for (std::size_t j = pivot; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        if (best == cols || (a[i][j] < 0 ? -a[i][j] : a[i][j]) < (a[i][best] < 0 ? -a[i][best] : a[i][best])) {
          best = j;
        }
      }
      if (best == cols) break;
      swap_cols(pivot, best);
      bool reduced = true;
      for (std::size_t j = pivot + 1; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        col_op(j, pivot, a[i][j] / a[i][pivot]);
        if (a[i][j] != 0) reduced = false;
      }
      for (const auto& col : u)
        for (auto x : col)
          if (x > lim || x < -lim) throw std::overflow_error("integer_kernel: coefficient growth");
      if (reduced) {
        ++pivot;
        break;
      }
    }
  }
  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t j = pivot; j < cols; ++j) {
    std::vector<std::int64_t> v(cols);
    for (std::size_t k = 0; k < cols; ++k) {
      if (u[j][k] > INT64_MAX || u[j][k] < -INT64_MAX) throw std::overflow_error("integer_kernel: overflow");
      v[k] = static_cast<std::int64_t>(u[j][k]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<std::vector<std::int64_t>> relation_constraints(std::span<const QuadraticValue> plus,
                                                                  std::span<const QuadraticValue> minus) {
  std::vector<std::int64_t> rational, irrational, count;
  for (auto side : {plus, minus}) {
    for (const auto& v : side) {
      rational.push_back(v.p);
      irrational.push_back(v.q);
      count.push_back(1);
    }
  }
  return {rational, irrational, count};
}

}  // namespace detail

/// Decides whether integer vectors (m, l) with
///   sum m_j plus_j + sum l_k minus_k = 0  and  sum m_j + sum l_k = 0
/// always have even sum m_j. The relation lattice is computed exactly from
/// the quadratic forms, so the verdict is definitive; a lattice with no
/// nonzero relation satisfies the even-sum condition vacuously.
inline RelationResult integer_relation_parity(std::span<const QuadraticValue> plus,
                                              std::span<const QuadraticValue> minus) {
  detail::check_common_radicand(plus, minus);
  RelationResult res;
  const std::size_t cols = plus.size() + minus.size();
  std::vector<std::vector<std::int64_t>> basis;
  try {
    basis = detail::integer_kernel(detail::relation_constraints(plus, minus), cols);
  } catch (const std::overflow_error&) {
    return res;
  }
  res.lattice_rank = basis.size();
  res.verdict = RelationVerdict::AllRelationsEvenSum;
  for (const auto& v : basis) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < plus.size(); ++j) s += v[j];
    if (s % 2 != 0) {
      res.verdict = RelationVerdict::RelationWithOddSum;
      res.witness = v;
      break;
    }
  }
  return res;
}

/// Bounded exhaustive variant: enumerates every coefficient vector with
/// entries in [-bound, bound]. Reports RelationWithOddSum when an odd-sum
/// relation is found, AllRelationsEvenSum when nonzero relations exist and all
/// are even, and Inconclusive when the box contains no nonzero relation.
inline RelationResult integer_relation_parity_bounded(std::span<const QuadraticValue> plus,
                                                      std::span<const QuadraticValue> minus, int bound = 6) {
  detail::check_common_radicand(plus, minus);
  if (bound < 1) throw std::invalid_argument("integer_relation_parity_bounded: bound must be >= 1");
  const std::size_t cols = plus.size() + minus.size();
  if (cols > 8) throw std::invalid_argument("integer_relation_parity_bounded: too many values to enumerate");
  auto rows = detail::relation_constraints(plus, minus);
  std::vector<std::int64_t> c(cols, -bound);
  RelationResult res;
  bool any = false;
  if (cols == 0) return res;
  while (true) {
    bool nonzero = std::any_of(c.begin(), c.end(), [](auto x) { return x != 0; });
    if (nonzero) {
      bool ok = true;
      for (const auto& row : rows) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += row[j] * c[j];
        if (s != 0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        any = true;
        std::int64_t s = 0;
        for (std::size_t j = 0; j < plus.size(); ++j) s += c[j];
        if (s % 2 != 0) {
          res.verdict = RelationVerdict::RelationWithOddSum;
          res.witness = c;
          return res;
        }
      }
    }
    std::size_t k = 0;
    while (k < cols && c[k] == bound) c[k++] = -bound;
    if (k == cols) break;
    ++c[k];
  }
  res.verdict = any ? RelationVerdict::AllRelationsEvenSum : RelationVerdict::Inconclusive;
  return res;
}

}  // namespace sedwalk::numtheory
