#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedwalk/graph.hpp"
#include "sedwalk/numtheory.hpp"
#include "sedwalk/rational.hpp"
#include "sedwalk/sedentary.hpp"
#include "sedwalk/spectral.hpp"
#include "sedwalk/walk.hpp"

namespace sedwalk {

/// Outcome of a closed-form family analyzer. `classification` holds the values
/// the library stands behind; `closed_form_constant` / `closed_form_time` keep
/// the literal published expression for the case when it differs or when the
/// case only gives a bound.
struct FamilyVerdict {
  VertexClassification classification;
  std::string case_label;
  std::optional<double> closed_form_constant;
  std::optional<double> closed_form_time;
  /// True when the verdict comes from the generic pipeline because no closed form covers the shape.
  bool fallback = false;
};

namespace detail {

inline InfimumEstimate periodic_minimum(const PhaseSum& f, const GridOptions& grid = {}, double tol = 1e-7) {
  auto per = periodicity_of(f.freqs, tol);
  if (per && per->trivial) {
    InfimumEstimate e;
    e.value = std::abs(f(0.0));
    e.attained_time = 0.0;
    e.mode = InfimumMode::ExactOnPeriod;
    e.horizon = per->rho;
    return e;
  }
  if (per) {
    auto e = minimize_magnitude(f, per->rho, InfimumMode::ExactOnPeriod, grid);
    snap_to_period_fraction(e, f, per->rho);
    return e;
  }
  return minimize_magnitude(f, scan_horizon(f), InfimumMode::GridLowerConfidence, grid);
}

inline PhaseSum diagonal_phase_sum(const SpectralDecomposition& dec, std::size_t u) {
  auto s = support(dec, u);
  return PhaseSum{s.weights, s.values};
}

/// First PST time between strongly cospectral u and v, if the phase conditions on sigma^+ hold.
inline std::optional<double> pst_time(const SpectralDecomposition& dec, std::size_t u, std::size_t v) {
  auto part = strongly_cospectral(dec, u, v);
  if (!part) return std::nullopt;
  auto s = support(dec, u);
  std::vector<std::size_t> plus;
  for (auto j : part->plus) {
    auto k = position_in(s, j);
    if (k < s.size()) plus.push_back(k);
  }
  if (plus.empty()) return std::nullopt;
  if (plus.size() == s.size()) return std::nullopt;
  return equality_time_criterion(s.values, plus, dec.options().recognition_tol);
}

inline VertexClassification make_record(std::size_t u, MatrixKind kind, Verdict v) {
  VertexClassification c;
  c.vertex = u;
  c.kind = kind;
  c.verdict = v;
  return c;
}

inline void set_tight(VertexClassification& c, double constant, double time) {
  c.verdict = Verdict::Sedentary;
  c.constant = constant;
  c.certified_bound = constant;
  c.tight = true;
  c.time = time;
}

inline void set_transfer(VertexClassification& c, Verdict v, std::size_t partner, std::optional<double> time) {
  c.verdict = v;
  c.partner = partner;
  c.constant = 0.0;
  c.time = time;
}

/// Sedentary via the minimum over one period (no closed-form constant in this case).
inline void set_period_minimum(VertexClassification& c, const SpectralDecomposition& dec, std::size_t u,
                               const GridOptions& grid) {
  c.evidence = periodic_minimum(diagonal_phase_sum(dec, u), grid, dec.options().recognition_tol);
  c.verdict = c.evidence.value > kZeroTol ? Verdict::Sedentary : Verdict::NotSedentary;
  c.constant = c.evidence.value;
  c.time = c.evidence.attained_time;
  c.tight = c.verdict == Verdict::Sedentary && c.evidence.mode == InfimumMode::ExactOnPeriod;
  c.trail.push_back("constant from the minimum of |U(t)_{u,u}| over one period");
}

inline std::int64_t as_int(std::size_t x) { return static_cast<std::int64_t>(x); }

/// nu2 with nu2(0) = +infinity.
inline int nu2_or_inf(std::int64_t a) { return a == 0 ? 1 << 30 : numtheory::nu2(a); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Complete multipartite graphs
// ---------------------------------------------------------------------------

struct MultipartiteSpec {
  std::vector<std::size_t> parts;
  MatrixKind kind = MatrixKind::laplacian();

  std::size_t n() const { return std::accumulate(parts.begin(), parts.end(), std::size_t{0}); }
  std::size_t k() const { return parts.size(); }
  void validate() const {
    if (parts.empty()) throw std::invalid_argument("multipartite: at least one part required");
    for (auto p : parts)
      if (p == 0) throw std::invalid_argument("multipartite: part sizes must be positive");
  }
  /// Index of the first vertex of part `l`.
  std::size_t first_vertex(std::size_t l) const {
    if (l >= parts.size()) throw std::out_of_range("multipartite: part index out of range");
    return std::accumulate(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(l), std::size_t{0});
  }
  WeightedGraph graph() const { return complete_multipartite(parts); }
};

/// Laplacian support of a vertex in part l: {0 : 1/n, n - n_l : 1 - 1/n_l, n : 1/n_l - 1/n}.
inline PhaseSum multipartite_laplacian_diagonal(const MultipartiteSpec& spec, std::size_t l) {
  spec.validate();
  if (l >= spec.k()) throw std::out_of_range("multipartite: part index out of range");
  const double n = static_cast<double>(spec.n()), nl = static_cast<double>(spec.parts[l]);
  PhaseSum f;
  f.weights.push_back(1.0 / n);
  f.freqs.push_back(0.0);
  if (spec.parts[l] >= 2) {
    f.weights.push_back(1.0 - 1.0 / nl);
    f.freqs.push_back(n - nl);
  }
  if (spec.k() >= 2) {
    f.weights.push_back(1.0 / nl - 1.0 / n);
    f.freqs.push_back(n);
  }
  return f;
}

inline FamilyVerdict multipartite_laplacian_verdict(const MultipartiteSpec& spec, std::size_t l,
                                                    const GridOptions& grid = {}) {
  spec.validate();
  if (l >= spec.k()) throw std::out_of_range("multipartite_laplacian_verdict: part index out of range");
  const std::size_t u = spec.first_vertex(l);
  const auto n = detail::as_int(spec.n());
  const auto nl = detail::as_int(spec.parts[l]);
  const double pi = std::numbers::pi;
  FamilyVerdict out;
  auto& c = out.classification;
  c = detail::make_record(u, MatrixKind::laplacian(), Verdict::Undetermined);
  const PhaseSum f = multipartite_laplacian_diagonal(spec, l);

  if (spec.k() == 1) {
    out.case_label = "single part (isolated vertices)";
    detail::set_tight(c, 1.0, 0.0);
    c.trail.push_back("edgeless graph: U(t)_{u,u} = 1");
    return out;
  }
  if (nl == 1) {
    out.case_label = "singleton part";
    out.closed_form_constant = 1.0 - 2.0 / static_cast<double>(n);
    out.closed_form_time = pi / static_cast<double>(n);
    if (n == 2) {
      detail::set_transfer(c, Verdict::PST, 1 - u, pi / 2.0);
      c.trail.push_back("K_2: perfect state transfer at pi/2");
      return out;
    }
    detail::set_tight(c, *out.closed_form_constant, *out.closed_form_time);
    c.trail.push_back("dominating vertex: tight 1 - 2/n at pi/n");
  } else if (nl == 2 && n % 4 == 0) {
    out.case_label = "pair part, n = 0 mod 4";
    out.closed_form_time = pi / 2.0;
    detail::set_transfer(c, Verdict::PST, u + 1, pi / 2.0);
    c.trail.push_back("pair part with n divisible by 4: perfect state transfer at pi/2");
  } else if (nl == 2 && n % 4 == 2) {
    out.case_label = "pair part, n = 2 mod 4";
    out.closed_form_constant = 2.0 / static_cast<double>(n);
    out.closed_form_time = pi / 2.0;
    detail::set_tight(c, *out.closed_form_constant, pi / 2.0);
    c.trail.push_back("pair part with n = 2 mod 4: tight 2/n at pi/2");
  } else if (nl == 2) {
    out.case_label = "pair part, n odd";
    if (n == 3) {
      out.closed_form_constant = 1.0 / 3.0;
      out.closed_form_time = pi;
    } else {
      out.closed_form_constant = std::sqrt(2.0) / static_cast<double>(n);
      out.closed_form_time = pi / 2.0;
    }
    detail::set_tight(c, *out.closed_form_constant, *out.closed_form_time);
    c.trail.push_back("pair part with n odd: tight constant at the stated time");
  } else {
    out.case_label = "part of size >= 3";
    const double bound = 1.0 - 2.0 / static_cast<double>(nl);
    out.closed_form_constant = bound;
    c.trail.push_back("twin set of size >= 3: |U(t)_{u,u}| >= 1 - 2/n_l");
    if (numtheory::nu2(n) > numtheory::nu2(nl)) {
      const double t = pi / static_cast<double>(std::gcd(n, nl));
      out.closed_form_time = t;
      detail::set_tight(c, bound, t);
      c.trail.push_back("nu2(n) > nu2(n_l): bound attained at pi / gcd(n, n_l)");
    } else {
      c.evidence = detail::periodic_minimum(f, grid);
      c.verdict = Verdict::Sedentary;
      c.certified_bound = bound;
      c.constant = c.evidence.value;
      c.time = c.evidence.attained_time;
      c.tight = true;
      c.trail.push_back("nu2(n) <= nu2(n_l): constant strictly above the bound, taken from the period minimum");
      return out;
    }
  }
  c.evidence = detail::periodic_minimum(f, grid);
  return out;
}

namespace detail {

inline FamilyVerdict family_fallback(const WeightedGraph& g, MatrixKind kind, std::size_t u, std::string why,
                                     const ClassifyOptions& opt) {
  FamilyVerdict out;
  out.fallback = true;
  out.case_label = "generic";
  out.classification = classify_vertex(g, kind, u, opt);
  out.classification.trail.insert(out.classification.trail.begin(), std::move(why));
  return out;
}

/// Common size of every part except those listed in `skip`, if there is one.
inline std::optional<std::size_t> uniform_size(const std::vector<std::size_t>& parts,
                                               const std::vector<bool>& skip) {
  std::optional<std::size_t> m;
  for (std::size_t r = 0; r < parts.size(); ++r) {
    if (skip[r]) continue;
    if (m && *m != parts[r]) return std::nullopt;
    m = parts[r];
  }
  return m;
}

}  // namespace detail

inline FamilyVerdict multipartite_adjacency_verdict(const MultipartiteSpec& spec, std::size_t l,
                                                    const ClassifyOptions& opt = {}) {
  spec.validate();
  if (l >= spec.k()) throw std::out_of_range("multipartite_adjacency_verdict: part index out of range");
  const MatrixKind kind = MatrixKind::adjacency();
  const WeightedGraph g = spec.graph();
  const std::size_t u = spec.first_vertex(l);
  const auto n = detail::as_int(spec.n());
  const auto nl = detail::as_int(spec.parts[l]);
  const double pi = std::numbers::pi;
  const auto dec = decompose(g, kind, opt.spectral);

  FamilyVerdict out;
  auto& c = out.classification;
  c = detail::make_record(u, kind, Verdict::Undetermined);
  auto finish = [&]() -> FamilyVerdict& {
    if (c.evidence.samples == 0 && c.evidence.horizon == 0.0) {
      c.evidence = detail::periodic_minimum(detail::diagonal_phase_sum(dec, u), opt.grid, dec.options().recognition_tol);
    }
    return out;
  };

  if (spec.k() == 1) {
    out.case_label = "single part (isolated vertices)";
    detail::set_tight(c, 1.0, 0.0);
    return finish();
  }

  std::vector<bool> singleton(spec.k());
  std::size_t n_single = 0;
  for (std::size_t r = 0; r < spec.k(); ++r) {
    singleton[r] = spec.parts[r] == 1;
    n_single += singleton[r];
  }
  const auto I = detail::as_int(n_single);
  auto m_rest = detail::uniform_size(spec.parts, singleton);

  if (nl == 1) {
    if (!m_rest) {
      if (n_single == spec.k()) {
        out.case_label = "complete graph";
        if (n == 2) {
          detail::set_transfer(c, Verdict::PST, 1 - u, pi / 2.0);
          c.trail.push_back("K_2: perfect state transfer at pi/2");
          return finish();
        }
        out.closed_form_constant = 1.0 - 2.0 / static_cast<double>(n);
        out.closed_form_time = pi / static_cast<double>(n);
        detail::set_tight(c, *out.closed_form_constant, *out.closed_form_time);
        c.trail.push_back("complete graph: tight 1 - 2/n at pi/n");
        return finish();
      }
      return detail::family_fallback(g, kind, u, "non-singleton parts differ in size: no closed form", opt);
    }
    const auto m = detail::as_int(*m_rest);
    if (I == 1) {
      out.case_label = "cone apex";
      const std::int64_t d = n - m - 1;
      const double delta = static_cast<double>(d * d + 4 * (n - 1));
      const double t = pi / std::sqrt(delta);
      out.closed_form_constant = static_cast<double>(d * d) / delta;
      out.closed_form_time = t;
      if (d == 0) {
        c.verdict = Verdict::NotSedentary;
        c.constant = 0.0;
        c.time = t;
        c.trail.push_back("cone over an edgeless graph: U(t)_{u,u} = cos(t sqrt(n-1)) vanishes at pi/(2 sqrt(n-1))");
        return finish();
      }
      detail::set_tight(c, static_cast<double>(d) / std::sqrt(delta), t);
      c.trail.push_back("cone over a d-regular graph: |U(t)_{u,u}|^2 = cos^2 + (d^2/Delta) sin^2, minimum d/sqrt(Delta) at pi/sqrt(Delta)");
      return finish();
    }
    if (I == 2) {
      out.case_label = "two singleton parts";
      const std::size_t v = [&] {
        for (std::size_t r = 0; r < spec.k(); ++r)
          if (singleton[r] && r != l) return spec.first_vertex(r);
        return u;
      }();
      const std::int64_t delta = (n - m - 3) * (n - m - 3) + 8 * (n - 2);
      auto root = numtheory::is_perfect_square(delta);
      if (!root) {
        detail::set_transfer(c, Verdict::PGST, v, std::nullopt);
        c.trail.push_back("Delta = " + std::to_string(delta) + " is not a square: pretty good state transfer");
      } else if (detail::nu2_or_inf(n - m + 1) != detail::nu2_or_inf(*root)) {
        detail::set_transfer(c, Verdict::PST, v, detail::pst_time(dec, u, v));
        c.trail.push_back("Delta square and nu2(n-m+1) != nu2(sqrt(Delta)): perfect state transfer");
      } else {
        detail::set_period_minimum(c, dec, u, opt.grid);
        c.trail.push_back("Delta square and nu2(n-m+1) = nu2(sqrt(Delta)): tightly sedentary");
      }
      return finish();
    }
    out.case_label = "three or more singleton parts";
    const double bound = 1.0 - 2.0 / static_cast<double>(I);
    out.closed_form_constant = bound;
    c.trail.push_back("singletons form a twin set of size >= 3: |U(t)_{u,u}| >= 1 - 2/|I|");
    const std::int64_t a = n - m - 2 * I + 1;
    const std::int64_t delta = a * a + 4 * I * (n - I);
    auto root = numtheory::is_perfect_square(delta);
    if (root) {
      const std::int64_t cc = n - m + 1;
      if (detail::nu2_or_inf(cc) != detail::nu2_or_inf(*root)) {
        const std::int64_t gg = std::gcd(cc + *root, cc - *root);
        out.closed_form_time = pi / static_cast<double>(gg);
        detail::set_tight(c, bound, 2.0 * pi / static_cast<double>(gg));
        c.trail.push_back("Delta square, nu2 differ: bound attained at 2 pi / gcd(n-m+1 +/- sqrt(Delta))");
      } else {
        detail::set_period_minimum(c, dec, u, opt.grid);
        c.certified_bound = bound;
        c.trail.push_back("Delta square, nu2 equal: constant strictly above the bound");
      }
    } else {
      c.verdict = Verdict::Sedentary;
      c.certified_bound = bound;
      c.constant = bound;
      c.sharp = true;
      c.trail.push_back("Delta not a square: only the trivial relation, infimum equals the bound (sharp)");
      auto s = support(dec, u);
      c.evidence = minimize_magnitude(PhaseSum{s.weights, s.values}, scan_horizon(PhaseSum{s.weights, s.values}, opt.scan_periods),
                                      InfimumMode::GridLowerConfidence, opt.grid);
    }
    return finish();
  }

  if (nl == 2) {
    std::vector<bool> skip(spec.k(), false);
    skip[l] = true;
    auto m_other = detail::uniform_size(spec.parts, skip);
    const std::size_t v = u + 1;
    if (m_other) {
      out.case_label = "pair part, uniform remaining parts";
      const auto m = detail::as_int(*m_other);
      const std::int64_t d = n - m - 2;
      const std::int64_t delta = d * d + 8 * (n - 2);
      auto root = numtheory::is_perfect_square(delta);
      if (n == m + 2) {
        detail::set_transfer(c, Verdict::PST, v, detail::pst_time(dec, u, v));
        c.trail.push_back("complete bipartite with a pair side: perfect state transfer");
        return finish();
      }
      if (!root) {
        detail::set_transfer(c, Verdict::PGST, v, std::nullopt);
        c.trail.push_back("Delta = " + std::to_string(delta) + " is not a square: pretty good state transfer");
        return finish();
      }
      if (detail::nu2_or_inf(d) != detail::nu2_or_inf(*root)) {
        detail::set_transfer(c, Verdict::PST, v, detail::pst_time(dec, u, v));
        c.trail.push_back("Delta square, nu2(n-m-2) != nu2(sqrt(Delta)): perfect state transfer");
        return finish();
      }
      const std::int64_t s = (*root - d) / 2;
      if (s <= 0 || 2 * (n - 2) != s * (d + s) || numtheory::nu2(d) > numtheory::nu2(s)) {
        return detail::family_fallback(g, kind, u, "no admissible s for the pair-part constant", opt);
      }
      const std::int64_t gg = std::gcd(d, s);
      const std::int64_t d1 = d / gg, s1 = s / gg;
      const double constant = s1 == 1 ? 1.0 / static_cast<double>(d1 + 2)
                                      : std::sqrt(2.0) / static_cast<double>(d1 + 2 * s1);
      out.closed_form_constant = constant;
      out.closed_form_time = pi / static_cast<double>(gg);
      detail::set_tight(c, constant, pi / static_cast<double>(gg));
      c.partner = v;
      c.trail.push_back("n - 2 = s(n-m-2+s)/2 with s = " + std::to_string(s) + ": tight constant at pi/gcd(n-m-2, s)");
      return finish();
    }
    // singletons plus pairs only
    bool pairs_only = n_single >= 1;
    std::size_t n_pairs = 0;
    for (std::size_t r = 0; r < spec.k(); ++r) {
      if (singleton[r]) continue;
      if (spec.parts[r] != 2) pairs_only = false;
      ++n_pairs;
    }
    if (pairs_only && n_pairs >= 2) {
      out.case_label = "pair part with singleton parts";
      const std::int64_t delta = (n - 1) * (n - 1) + 4 * I;
      auto root = numtheory::is_perfect_square(delta);
      if (!root) {
        if (n % 4 == 3) {
          detail::set_transfer(c, Verdict::PGST, v, std::nullopt);
          c.trail.push_back("Delta not a square and n = 3 mod 4: pretty good state transfer");
        } else {
          c.verdict = Verdict::Sedentary;
          c.trail.push_back("Delta not a square and n != 3 mod 4: sedentary (no general constant; grid estimate)");
          auto f = detail::diagonal_phase_sum(dec, u);
          c.evidence = minimize_magnitude(f, scan_horizon(f, opt.scan_periods), InfimumMode::GridLowerConfidence, opt.grid);
          c.constant = c.evidence.value;
        }
      } else if (numtheory::nu2(n - 3) != numtheory::nu2(*root)) {
        detail::set_transfer(c, Verdict::PST, v, detail::pst_time(dec, u, v));
        c.trail.push_back("Delta square and nu2(n-3) != nu2(sqrt(Delta)): perfect state transfer");
      } else {
        detail::set_period_minimum(c, dec, u, opt.grid);
        c.trail.push_back("Delta square and nu2(n-3) = nu2(sqrt(Delta)): tightly sedentary");
      }
      return finish();
    }
    return detail::family_fallback(g, kind, u, "pair part with mixed remaining part sizes: no closed form", opt);
  }

  // part of size >= 3
  out.case_label = "part of size >= 3";
  const double bound = 1.0 - 2.0 / static_cast<double>(nl);
  out.closed_form_constant = bound;
  std::vector<bool> skip(spec.k(), false);
  skip[l] = true;
  auto m_other = detail::uniform_size(spec.parts, skip);
  if (!m_other) {
    auto fb = detail::family_fallback(g, kind, u, "remaining parts differ in size: bound 1 - 2/n_l only", opt);
    fb.closed_form_constant = bound;
    return fb;
  }
  const auto m = detail::as_int(*m_other);
  const std::int64_t d = n - nl - m;
  const std::int64_t delta = d * d + 4 * nl * (n - nl);
  auto root = numtheory::is_perfect_square(delta);
  c.trail.push_back("twin set of size >= 3: |U(t)_{u,u}| >= 1 - 2/n_l");
  if (root) {
    if (detail::nu2_or_inf(d) != detail::nu2_or_inf(*root)) {
      const std::int64_t gg = std::gcd(d + *root, d - *root);
      out.closed_form_time = pi / static_cast<double>(gg);
      detail::set_tight(c, bound, 2.0 * pi / static_cast<double>(gg));
      c.trail.push_back("Delta square, nu2 differ: bound attained at 2 pi / gcd(d +/- sqrt(Delta))");
    } else {
      detail::set_period_minimum(c, dec, u, opt.grid);
      c.certified_bound = bound;
      c.trail.push_back("Delta square, nu2 equal: constant strictly above the bound");
    }
    return finish();
  }
  c.verdict = Verdict::Sedentary;
  c.certified_bound = bound;
  auto s = support(dec, u);
  std::size_t zero_pos = s.size();
  for (std::size_t k = 0; k < s.size(); ++k)
    if (std::abs(s.values[k]) < 1e-7) zero_pos = k;
  auto f = PhaseSum{s.weights, s.values};
  c.evidence = minimize_magnitude(f, scan_horizon(f, opt.scan_periods), InfimumMode::GridLowerConfidence, opt.grid);
  auto pv = zero_pos < s.size() ? pgst_parity_criterion(s.values, {zero_pos}, dec.options().recognition_tol)
                                : ParityVerdict::Inconclusive;
  if (pv == ParityVerdict::ApproachesEquality) {
    c.sharp = true;
    c.constant = bound;
    c.trail.push_back("Delta not a square: every relation has even sum over {0}, infimum equals the bound (sharp)");
  } else {
    c.constant = c.evidence.value;
    c.trail.push_back("Delta not a square but sharpness not established: constant is a grid estimate");
  }
  return finish();
}

// ---------------------------------------------------------------------------
// Threshold graphs
// ---------------------------------------------------------------------------

/// Gamma(m_1, ..., m_h): cells are added in order; a complete cell is joined to
/// everything before it, an empty cell is added as a disjoint union. With
/// starts_empty the odd cells are empty and the even cells complete; otherwise
/// the odd cells are complete.
struct ThresholdSpec {
  std::vector<std::size_t> parts;
  bool starts_empty = true;

  std::size_t h() const { return parts.size(); }
  /// Whether cell j (1-based) is complete.
  bool complete_cell(std::size_t j) const { return starts_empty ? j % 2 == 0 : j % 2 == 1; }
  /// alpha_j = m_1 + ... + m_j.
  std::int64_t alpha(std::size_t j) const {
    std::int64_t a = 0;
    for (std::size_t r = 1; r <= j && r <= parts.size(); ++r) a += static_cast<std::int64_t>(parts[r - 1]);
    return a;
  }
  /// beta_{l,h} = m_l + m_{l+2} + ... (same parity as l, up to h).
  std::int64_t beta(std::size_t l) const {
    std::int64_t b = 0;
    for (std::size_t r = l; r <= parts.size(); r += 2) b += static_cast<std::int64_t>(parts[r - 1]);
    return b;
  }
  void validate() const {
    if (parts.empty()) throw std::invalid_argument("threshold: empty part list");
    for (auto p : parts)
      if (p == 0) throw std::invalid_argument("threshold: part sizes must be positive");
    if (!complete_cell(h()) && alpha(h()) > 1) throw std::invalid_argument("threshold: the last cell must be complete (connected form)");
  }
  std::size_t first_vertex(std::size_t j) const {
    if (j < 1 || j > h()) throw std::out_of_range("threshold: cell index out of range (cells are numbered from 1)");
    return static_cast<std::size_t>(alpha(j - 1));
  }
  WeightedGraph graph() const { return threshold(parts, starts_empty); }
};

/// Exact Laplacian support of a vertex: integer eigenvalues in descending order with rational weights.
struct ThresholdSupport {
  std::vector<std::int64_t> values;
  std::vector<Rational> weights;

  EigenvalueSupport as_support(std::size_t vertex) const {
    EigenvalueSupport s;
    s.vertex = vertex;
    for (std::size_t k = 0; k < values.size(); ++k) {
      s.indices.push_back(k);
      s.values.push_back(static_cast<double>(values[k]));
      s.weights.push_back(weights[k].to_double());
    }
    return s;
  }
};

/// Support of a vertex of cell j, built cell by cell. Joining X (n_x vertices,
/// containing u) with Y (n_y vertices) sends a nonzero eigenvalue lambda to
/// lambda + n_y with the same weight, the non-constant part w_0 - 1/n_x of the
/// kernel to n_y, and splits the constant vector into 0 (weight 1/(n_x+n_y))
/// and n_x + n_y (weight 1/n_x - 1/(n_x+n_y)). A disjoint union leaves the
/// support of u unchanged.
inline ThresholdSupport threshold_support(const ThresholdSpec& spec, std::size_t j) {
  spec.validate();
  if (j < 1 || j > spec.h()) throw std::out_of_range("threshold_support: cell index out of range");
  std::map<std::int64_t, Rational> w;
  auto join_with = [&](std::int64_t nx, std::int64_t ny) {
    std::map<std::int64_t, Rational> next;
    Rational w0 = w.count(0) ? w[0] : Rational(0);
    for (auto& [lam, wt] : w)
      if (lam != 0) next[lam + ny] += wt;
    Rational kernel_rest = w0 - Rational(1, nx);
    if (kernel_rest.num() != 0) next[ny] += kernel_rest;
    next[0] += Rational(1, nx + ny);
    Rational top = Rational(1, nx) - Rational(1, nx + ny);
    if (top.num() != 0) next[nx + ny] += top;
    w = std::move(next);
  };
  const auto mj = static_cast<std::int64_t>(spec.parts[j - 1]);
  if (spec.complete_cell(j)) {
    w[0] = Rational(1, mj);
    if (mj > 1) w[mj] = Rational(1) - Rational(1, mj);
    if (j > 1) join_with(mj, spec.alpha(j - 1));
  } else {
    w[0] = Rational(1);
  }
  for (std::size_t r = j + 1; r <= spec.h(); ++r) {
    if (spec.complete_cell(r)) join_with(spec.alpha(r - 1), static_cast<std::int64_t>(spec.parts[r - 1]));
  }
  ThresholdSupport out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->second.num() == 0) continue;
    out.values.push_back(it->first);
    out.weights.push_back(it->second);
  }
  return out;
}

struct ThresholdCellBound {
  std::size_t cell = 0;
  std::string case_label;
  /// Certified bound 2 (E_lambda)_{u,u} - 1 for the dominant eigenvalue, with its equality time.
  SedentaryBound bound;
  Rational dominant_weight;
  std::int64_t dominant_eigenvalue = 0;
  /// Literal closed-form expression for this case, when one is stated.
  std::optional<double> closed_form_constant;
};

inline ThresholdCellBound threshold_cell_bound(const ThresholdSpec& spec, std::size_t j) {
  auto sup = threshold_support(spec, j);
  ThresholdCellBound out;
  out.cell = j;
  const std::size_t h = spec.h();
  if (!spec.complete_cell(j)) {
    out.case_label = "empty cell";
    out.closed_form_constant = 1.0 - 2.0 / static_cast<double>(spec.alpha(j));
  } else if (j == 1) {
    out.case_label = "first complete cell";
    if (spec.parts[0] >= 2) out.closed_form_constant = 1.0 - 2.0 / static_cast<double>(spec.parts[0]);
  } else {
    out.case_label = "complete cell";
    double s = 0.0;
    for (std::size_t r = j; r <= h; ++r) s += ((r + h) % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(spec.alpha(r));
    out.closed_form_constant = 1.0 - 2.0 * s;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < sup.values.size(); ++k)
    if (sup.weights[best] < sup.weights[k]) best = k;
  out.dominant_weight = sup.weights[best];
  out.dominant_eigenvalue = sup.values[best];
  auto es = sup.as_support(spec.first_vertex(j));
  if (sup.values.size() == 1) {
    out.bound.support = es;
    out.bound.subset = {0};
    out.bound.a = 1.0;
    out.bound.lower_bound = 1.0;
    out.bound.equality_constant = 1.0;
    out.bound.tightness_time = 0.0;
    return out;
  }
  if (out.dominant_weight < Rational(1, 2)) {
    out.bound.support = es;
    out.bound.subset = {best};
    out.bound.a = out.dominant_weight.to_double();
    out.bound.lower_bound = 0.0;
    return out;
  }
  out.bound = projection_sum_bound(es, {best});
  return out;
}

struct ThresholdCellVerdict {
  std::size_t cell = 0;
  Verdict verdict = Verdict::Undetermined;
  std::optional<std::size_t> partner;
  std::optional<double> time;
  std::optional<double> constant;
  std::optional<double> certified_bound;
};

/// A first cell of size one is both K_1 and O_1, so it merges into the next
/// cell with the opposite start: Gamma(1, m_2, ...) equals Gamma(1 + m_2, ...)
/// with the start flipped. Vertex numbering is unchanged.
inline ThresholdSpec threshold_normal_form(ThresholdSpec spec) {
  while (spec.parts.size() >= 2 && spec.parts[0] == 1) {
    spec.parts[1] += 1;
    spec.parts.erase(spec.parts.begin());
    spec.starts_empty = !spec.starts_empty;
  }
  return spec;
}

/// Whether, in normal form, m_1 = 2, m_2 = 2 mod 4 and m_j = 0 mod 4 for every
/// j >= 3; a single complete cell of size 2 is K_2, which also has perfect
/// state transfer. The transfer is between vertices 0 and 1 at pi/2.
inline bool threshold_pst_congruence(const ThresholdSpec& original) {
  const ThresholdSpec spec = threshold_normal_form(original);
  if (spec.h() == 1) return spec.parts[0] == 2 && !spec.starts_empty;
  if (spec.parts[0] != 2 || spec.parts[1] % 4 != 2) return false;
  for (std::size_t r = 2; r < spec.h(); ++r)
    if (spec.parts[r] % 4 != 0) return false;
  return true;
}

inline std::vector<ThresholdCellVerdict> threshold_pst_or_sedentary(const ThresholdSpec& spec,
                                                                    const GridOptions& grid = {}) {
  spec.validate();
  const bool pst = threshold_pst_congruence(spec);
  std::vector<ThresholdCellVerdict> out;
  for (std::size_t j = 1; j <= spec.h(); ++j) {
    ThresholdCellVerdict cv;
    cv.cell = j;
    const std::size_t u = spec.first_vertex(j);
    if (pst && u <= 1) {
      cv.verdict = Verdict::PST;
      cv.partner = 1 - u;
      cv.time = std::numbers::pi / 2.0;
      cv.constant = 0.0;
      out.push_back(cv);
      continue;
    }
    auto b = threshold_cell_bound(spec, j);
    auto sup = threshold_support(spec, j).as_support(spec.first_vertex(j));
    auto est = detail::periodic_minimum(PhaseSum{sup.weights, sup.values}, grid);
    cv.verdict = est.value > kZeroTol ? Verdict::Sedentary : Verdict::NotSedentary;
    cv.constant = est.value > kZeroTol ? est.value : 0.0;
    cv.time = est.attained_time;
    if (b.bound.lower_bound > 0.0) cv.certified_bound = b.bound.lower_bound;
    out.push_back(cv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct products of complete graphs
// ---------------------------------------------------------------------------

inline WeightedGraph complete_product_graph(const std::vector<std::size_t>& m_list) {
  if (m_list.empty()) throw std::invalid_argument("complete_product_graph: empty factor list");
  WeightedGraph g = complete(m_list.front());
  for (std::size_t j = 1; j < m_list.size(); ++j) g = direct_product(g, complete(m_list[j]));
  return g;
}

/// Sedentariness of any vertex of the direct product of K_{m_j}. The spectrum
/// is integral, so the minimum over one period is exact; the closed-form
/// constant (2/prod m)|prod(m-1) - prod(m)/2| is certified only when
/// prod(m-1) > prod(m)/2, the regime in which the triangle-inequality argument
/// behind it holds.
inline FamilyVerdict complete_product_verdict(const std::vector<std::size_t>& m_list, const GridOptions& grid = {}) {
  PhaseSum f = complete_product_phase_sum(m_list);
  FamilyVerdict out;
  auto& c = out.classification;
  c = detail::make_record(0, MatrixKind::adjacency(), Verdict::Undetermined);
  const double pi = std::numbers::pi;
  double prod_m = 1.0, prod_m1 = 1.0;
  bool any_two = false, all_odd = true;
  for (auto m : m_list) {
    prod_m *= static_cast<double>(m);
    prod_m1 *= static_cast<double>(m - 1);
    any_two = any_two || m == 2;
    all_odd = all_odd && m % 2 == 1;
  }
  const double formula = 2.0 / prod_m * std::abs(prod_m1 - 0.5 * prod_m);
  out.closed_form_constant = formula;
  c.evidence = detail::periodic_minimum(f, grid);

  if (any_two) {
    out.case_label = "factor K_2";
    std::vector<CosineTerm> terms;
    for (std::size_t k = 0; k < f.weights.size(); ++k) terms.push_back({f.weights[k], f.freqs[k]});
    if (auto t0 = real_diagonal_zero_search(terms, 2.0 * pi)) {
      c.verdict = Verdict::NotSedentary;
      c.constant = 0.0;
      c.time = *t0;
      c.trail.push_back("factor K_2 makes the diagonal real; it changes sign, zero at t = " + detail::fmt(*t0));
      return out;
    }
    c.trail.push_back("factor K_2 but no sign change of the real diagonal on one period");
  }
  const double exact_ratio = prod_m1 - 0.5 * prod_m;
  if (exact_ratio == 0.0) {
    out.case_label = "balanced product";
    c.trail.push_back("prod(m_j - 1) = prod(m_j)/2: closed form degenerates to 0; constant from the period minimum");
  } else {
    out.case_label = exact_ratio > 0.0 ? "dominant constant term" : "dominated constant term";
  }
  if (c.evidence.value <= kZeroTol) {
    c.verdict = Verdict::NotSedentary;
    c.constant = 0.0;
    c.time = c.evidence.attained_time;
    c.trail.push_back("diagonal vanishes on the period");
    return out;
  }
  c.verdict = Verdict::Sedentary;
  c.tight = true;
  c.constant = c.evidence.value;
  c.time = c.evidence.attained_time;
  if (exact_ratio > 0.0) {
    c.certified_bound = formula;
    c.trail.push_back("triangle inequality: |U(t)_{u,u}| >= (2/prod m)(prod(m-1) - prod(m)/2) = " + detail::fmt(formula));
  }
  if (all_odd) {
    out.closed_form_time = pi;
    const double at_pi = f.magnitude(pi);
    if (std::abs(at_pi - c.evidence.value) < 1e-9) {
      c.constant = at_pi;
      c.time = pi;
      c.trail.push_back("all factors odd: minimum attained at t = pi");
    }
  }
  return out;
}

}  // namespace sedwalk
