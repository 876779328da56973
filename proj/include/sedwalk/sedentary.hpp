#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedwalk/graph.hpp"
#include "sedwalk/numtheory.hpp"
#include "sedwalk/spectral.hpp"
#include "sedwalk/twins.hpp"
#include "sedwalk/walk.hpp"

namespace sedwalk {

/// Values of |U(t)_{u,u}| below this are treated as zeros of the diagonal.
inline constexpr double kZeroTol = 1e-8;

namespace detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Exact forms of values[k] - values[ref], sharing one radicand.
inline std::optional<std::vector<numtheory::QuadraticValue>> exact_relative(const std::vector<double>& values,
                                                                           std::size_t ref, double tol) {
  std::vector<double> diffs;
  diffs.reserve(values.size());
  for (double v : values) diffs.push_back(v - values[ref]);
  return numtheory::recognize_values(diffs, tol);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Projection-sum bound
// ---------------------------------------------------------------------------

/// |U(t)_{u,u}| >= |sum_{j in S} e^{i t lambda_j} (E_j)_{u,u}| - (1 - a), a = sum_S (E_j)_{u,u}.
struct SedentaryBound {
  /// Positions inside the support of u.
  std::vector<std::size_t> subset;
  double a = 0.0;
  /// Certified for all t: 2 max_{j in S} (E_j)_{u,u} - 1, which is 2a - 1 for a single eigenvalue.
  double lower_bound = 0.0;
  /// 2a - 1 together with the first time it is attained, when the phase conditions hold.
  std::optional<double> equality_constant;
  std::optional<double> tightness_time;
  EigenvalueSupport support;

  double curve(double t) const {
    Complex s = 0.0;
    for (auto k : subset) s += support.weights[k] * std::polar(1.0, t * support.values[k]);
    return std::abs(s) - (1.0 - a);
  }
};

/// First t > 0 with exp(i t (lambda_1 - lambda)) = 1 on S and = -1 off S, where
/// lambda_1 is the first member of S. Requires the support differences to be
/// integer multiples of sqrt(delta)/2; nullopt when they are not or when the
/// 2-adic conditions fail.
inline std::optional<double> equality_time_criterion(const std::vector<double>& values,
                                                     const std::vector<std::size_t>& subset, double tol = 1e-7) {
  if (subset.empty() || subset.size() >= values.size()) return std::nullopt;
  auto form = numtheory::recognize_differences(values, subset.front(), tol);
  if (!form) return std::nullopt;
  std::vector<bool> in(values.size(), false);
  for (auto k : subset) in.at(k) = true;
  std::vector<std::int64_t> one, minus_one;
  for (std::size_t k = 0; k < values.size(); ++k) (in[k] ? one : minus_one).push_back(form->coeffs[k]);
  auto tau = numtheory::phase_time(one, minus_one);
  if (!tau) return std::nullopt;
  return *tau / form->unit();
}

inline SedentaryBound projection_sum_bound(const EigenvalueSupport& s, const std::vector<std::size_t>& subset,
                                           double tol = 1e-7) {
  if (subset.empty() || subset.size() >= s.size()) {
    throw std::invalid_argument("projection_sum_bound: S must be a non-empty proper subset of the support");
  }
  SedentaryBound b;
  b.support = s;
  b.subset = subset;
  double wmax = 0.0;
  for (auto k : subset) {
    if (k >= s.size()) throw std::out_of_range("projection_sum_bound: subset index outside the support");
    b.a += s.weights[k];
    wmax = std::max(wmax, s.weights[k]);
  }
  if (b.a < 0.5 - 1e-12) {
    throw std::invalid_argument("projection_sum_bound: sum of (E_j)_{u,u} over S is " + detail::fmt(b.a) +
                                " < 1/2, the bound needs 1/2 <= a < 1");
  }
  b.lower_bound = 2.0 * wmax - 1.0;
  if (auto t1 = equality_time_criterion(s.values, subset, tol)) {
    b.tightness_time = *t1;
    b.equality_constant = 2.0 * b.a - 1.0;
  }
  return b;
}

enum class ParityVerdict { ApproachesEquality, Blocked, Inconclusive };

inline const char* to_string(ParityVerdict v) {
  switch (v) {
    case ParityVerdict::ApproachesEquality: return "ApproachesEquality";
    case ParityVerdict::Blocked: return "Blocked";
    case ParityVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Whether inf_t |U(t)_{u,u}| reaches 2a - 1 for the split S / complement:
/// every integer relation among the support with zero coefficient sum must
/// have an even coefficient sum over S.
inline ParityVerdict pgst_parity_criterion(const std::vector<double>& values, const std::vector<std::size_t>& subset,
                                           double tol = 1e-7) {
  if (subset.empty() || subset.size() >= values.size()) return ParityVerdict::Inconclusive;
  auto exact = detail::exact_relative(values, subset.front(), tol);
  if (!exact) return ParityVerdict::Inconclusive;
  std::vector<bool> in(values.size(), false);
  for (auto k : subset) in.at(k) = true;
  std::vector<numtheory::QuadraticValue> plus, minus;
  for (std::size_t k = 0; k < values.size(); ++k) (in[k] ? plus : minus).push_back((*exact)[k]);
  auto r = numtheory::integer_relation_parity(plus, minus);
  switch (r.verdict) {
    case numtheory::RelationVerdict::AllRelationsEvenSum: return ParityVerdict::ApproachesEquality;
    case numtheory::RelationVerdict::RelationWithOddSum: return ParityVerdict::Blocked;
    default: return ParityVerdict::Inconclusive;
  }
}

// ---------------------------------------------------------------------------
// Classification record
// ---------------------------------------------------------------------------

enum class Verdict { Sedentary, PST, PGST, NotSedentary, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Sedentary: return "Sedentary";
    case Verdict::PST: return "PST";
    case Verdict::PGST: return "PGST";
    case Verdict::NotSedentary: return "NotSedentary";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

struct VertexClassification {
  std::size_t vertex = 0;
  MatrixKind kind = MatrixKind::adjacency();
  Verdict verdict = Verdict::Undetermined;
  /// Best value of inf_t |U(t)_{u,u}|: exact when tight or sharp, otherwise a numerical estimate.
  std::optional<double> constant;
  /// Proven lower bound on |U(t)_{u,u}| for all t (Sedentary only).
  std::optional<double> certified_bound;
  bool tight = false;
  bool sharp = false;
  /// Tightness time, PST time, or a zero of the diagonal, depending on the verdict.
  std::optional<double> time;
  std::optional<std::size_t> partner;
  std::vector<std::string> trail;
  InfimumEstimate evidence;

  bool is_sedentary() const { return verdict == Verdict::Sedentary; }
  bool is_transfer() const { return verdict == Verdict::PST || verdict == Verdict::PGST; }
};

struct ClassifyOptions {
  SpectralOptions spectral;
  GridOptions grid;
  /// Periods of the smallest support gap scanned for non-periodic vertices.
  double scan_periods = 200.0;
  /// Largest support for which every singleton S is tried by the generic route.
  std::size_t max_subset_support = 12;
};

// ---------------------------------------------------------------------------
// Real-valued diagonals
// ---------------------------------------------------------------------------

struct CosineTerm {
  double coefficient;
  double frequency;
};

inline double cosine_sum(const std::vector<CosineTerm>& terms, double t) {
  double s = 0.0;
  for (const auto& c : terms) s += c.coefficient * std::cos(c.frequency * t);
  return s;
}

/// First zero of sum c_k cos(omega_k t) on (0, horizon], located by a sign
/// change and refined by bisection.
inline std::optional<double> real_diagonal_zero_search(const std::vector<CosineTerm>& terms, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("real_diagonal_zero_search: horizon must be positive");
  double wmax = 0.0;
  for (const auto& c : terms) wmax = std::max(wmax, std::abs(c.frequency));
  if (wmax == 0.0) return std::nullopt;
  const double step = std::numbers::pi / (16.0 * wmax);
  double a = 0.0, fa = cosine_sum(terms, 0.0);
  if (fa == 0.0) return 0.0;
  for (double b = step; a < horizon; b += step) {
    b = std::min(b, horizon);
    double fb = cosine_sum(terms, b);
    if (fb == 0.0) return b;
    if ((fa < 0.0) != (fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = cosine_sum(terms, mid);
        if (std::abs(fm) < 1e-12 || hi - lo < 1e-15) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
    if (b >= horizon) break;
  }
  return std::nullopt;
}

/// When the support is symmetric about its midpoint c with matching weights,
/// |U(t)_{u,u}| = |sum w cos((lambda - c) t)|; returns those cosine terms.
inline std::optional<std::vector<CosineTerm>> real_diagonal_terms(const EigenvalueSupport& s, double tol = 1e-7) {
  if (s.size() == 0) return std::nullopt;
  auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
  const double c = 0.5 * (*lo + *hi);
  for (std::size_t k = 0; k < s.size(); ++k) {
    bool matched = false;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (std::abs(s.values[j] - (2.0 * c - s.values[k])) < tol * std::max(1.0, std::abs(c)) &&
          std::abs(s.weights[j] - s.weights[k]) < tol) {
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  std::vector<CosineTerm> terms;
  for (std::size_t k = 0; k < s.size(); ++k) terms.push_back({s.weights[k], s.values[k] - c});
  return terms;
}

// ---------------------------------------------------------------------------
// Twin vertices
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t position_in(const EigenvalueSupport& s, std::size_t dec_index) {
  for (std::size_t k = 0; k < s.size(); ++k)
    if (s.indices[k] == dec_index) return k;
  return s.size();
}

/// Periodic vertex: the minimum over one period decides sedentariness.
/// Moves a numerically located minimum onto a nearby time p rho / q (q <= 64)
/// when the magnitude there is no larger, so that exact minimizers such as
/// pi/2 are reported exactly.
inline void snap_to_period_fraction(InfimumEstimate& e, const PhaseSum& f, double rho) {
  if (!e.attained_time || !(rho > 0.0)) return;
  const double t = *e.attained_time;
  for (long q = 1; q <= 64; ++q) {
    const double p = std::round(t / rho * static_cast<double>(q));
    const double cand = rho * p / static_cast<double>(q);
    if (std::abs(cand - t) > 1e-6 * std::max(1.0, rho)) continue;
    const double v = f.magnitude(cand);
    if (v <= e.value + 1e-10) {
      e.attained_time = cand;
      e.value = std::min(e.value, v);
      return;
    }
  }
}

inline void settle_on_period(VertexClassification& c, const PhaseSum& f, const Periodicity& per,
                             const GridOptions& grid) {
  c.evidence = minimize_magnitude(f, per.rho, InfimumMode::ExactOnPeriod, grid);
  c.trail.push_back("periodic vertex, period " + fmt(per.rho) + ": minimum of |U(t)_{u,u}| over one period");
  snap_to_period_fraction(c.evidence, f, per.rho);
  if (c.evidence.value < kZeroTol) {
    c.verdict = Verdict::NotSedentary;
    c.time = c.evidence.attained_time;
    c.constant = 0.0;
    c.trail.push_back("diagonal vanishes at t = " + fmt(*c.time));
    return;
  }
  c.verdict = Verdict::Sedentary;
  c.tight = true;
  c.constant = c.evidence.value;
  c.time = c.evidence.attained_time;
  if (!c.certified_bound) c.certified_bound = c.evidence.value - c.evidence.error_bar;
}

}  // namespace detail

inline VertexClassification classify_twin_vertex(const WeightedGraph& g, const SpectralDecomposition& dec,
                                                 const TwinSet& t, std::size_t u, const ClassifyOptions& opt = {}) {
  if (!t.contains(u)) throw std::invalid_argument("classify_twin_vertex: vertex is not in the twin set");
  VertexClassification c;
  c.vertex = u;
  c.kind = dec.kind();
  const double rtol = dec.options().recognition_tol;
  auto split = theta_split(g, dec, t);
  auto s = support(dec, u);
  WalkEvaluator ev(dec);
  PhaseSum f{s.weights, s.values};
  auto per = periodicity_of(s.values, rtol);
  const std::size_t theta_pos = detail::position_in(s, split.theta_index);
  const double f_uu = split.F(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
  const double bound = 1.0 - 2.0 / static_cast<double>(t.size()) + 2.0 * f_uu;
  c.trail.push_back("twin set of size " + std::to_string(t.size()) + ", theta = " + detail::fmt(split.theta) +
                    ", F_uu = " + detail::fmt(f_uu));

  if (t.size() >= 3 || f_uu > 1e-9) {
    c.trail.push_back(t.size() >= 3 ? "twin set of size >= 3 is sedentary"
                                    : "theta eigenvector beyond e_u - e_v meets u: sedentary");
    c.trail.push_back("projection-sum bound with S = {theta}: |U(t)_{u,u}| >= 1 - 2/|T| + 2F_uu = " +
                      detail::fmt(bound));
    c.verdict = Verdict::Sedentary;
    c.certified_bound = bound;
    c.constant = bound;
    std::optional<double> t1;
    if (theta_pos < s.size()) t1 = equality_time_criterion(s.values, {theta_pos}, rtol);
    if (per && !per->trivial) {
      if (t1) {
        c.tight = true;
        c.time = *t1;
        c.evidence = minimize_magnitude(f, per->rho, InfimumMode::ExactOnPeriod, opt.grid);
        c.trail.push_back("phase conditions hold: bound attained at t = " + detail::fmt(*t1));
      } else {
        detail::settle_on_period(c, f, *per, opt.grid);
        c.trail.push_back("phase conditions fail: constant exceeds the bound");
      }
      return c;
    }
    c.evidence = infimum_diagonal(ev, u, opt.grid, opt.scan_periods);
    if (per && per->trivial) return c;
    if (theta_pos < s.size()) {
      auto pv = pgst_parity_criterion(s.values, {theta_pos}, rtol);
      if (pv == ParityVerdict::ApproachesEquality) {
        c.sharp = true;
        c.trail.push_back("all integer relations have even sum over S: infimum equals the bound (sharp)");
      } else if (pv == ParityVerdict::Blocked) {
        c.constant = c.evidence.value;
        c.trail.push_back("odd-sum integer relation: infimum strictly above the bound; constant is a grid estimate");
      } else {
        c.trail.push_back("support not recognized exactly: sharpness undecided");
      }
    }
    return c;
  }

  // theta eigenspace meets {u, v} only through e_u - e_v: strongly cospectral pair
  const std::size_t v = t.members[0] == u ? t.members[1] : t.members[0];
  c.partner = v;
  c.trail.push_back("u and its twin " + std::to_string(v) + " are strongly cospectral with sigma^- = {theta}");
  std::vector<std::size_t> plus;
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != theta_pos) plus.push_back(k);
  if (plus.empty() || theta_pos >= s.size()) {
    c.verdict = Verdict::Undetermined;
    c.trail.push_back("degenerate support");
    return c;
  }
  if (per) {
    if (auto t1 = equality_time_criterion(s.values, plus, rtol)) {
      c.verdict = Verdict::PST;
      c.time = *t1;
      c.constant = 0.0;
      c.evidence = minimize_magnitude(f, per->rho, InfimumMode::ExactOnPeriod, opt.grid);
      c.trail.push_back("phase conditions on sigma^+ hold: perfect state transfer at t = " + detail::fmt(*t1));
      return c;
    }
    c.trail.push_back("periodic without perfect state transfer: no pretty good state transfer either");
    detail::settle_on_period(c, f, *per, opt.grid);
    c.certified_bound.reset();
    return c;
  }
  c.evidence = infimum_diagonal(ev, u, opt.grid, opt.scan_periods);
  // relations sum m_j (lambda_j - theta) = 0 over sigma^+
  auto exact = detail::exact_relative(s.values, theta_pos, rtol);
  if (!exact) {
    c.verdict = Verdict::Undetermined;
    c.trail.push_back("support not recognized exactly: cannot decide between sedentary and PGST");
    return c;
  }
  std::vector<numtheory::QuadraticValue> pv, mv{(*exact)[theta_pos]};
  for (auto k : plus) pv.push_back((*exact)[k]);
  auto rel = numtheory::integer_relation_parity(pv, mv);
  if (rel.verdict == numtheory::RelationVerdict::RelationWithOddSum) {
    c.verdict = Verdict::Sedentary;
    c.constant = c.evidence.value;
    c.trail.push_back("odd-sum relation among sigma^+ - theta: sedentary (no general constant; grid estimate)");
  } else if (rel.verdict == numtheory::RelationVerdict::AllRelationsEvenSum) {
    c.verdict = Verdict::PGST;
    c.constant = 0.0;
    c.trail.push_back("every relation among sigma^+ - theta has even sum: pretty good state transfer");
  } else {
    c.verdict = Verdict::Undetermined;
    c.trail.push_back("relation lattice could not be computed");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Generic dispatcher
// ---------------------------------------------------------------------------

inline VertexClassification classify_vertex(const WeightedGraph& g, const SpectralDecomposition& dec, std::size_t u,
                                            const ClassifyOptions& opt = {}) {
  if (u >= g.order()) throw std::out_of_range("classify_vertex: vertex out of range");
  if (auto t = twin_set_of(g, u)) return classify_twin_vertex(g, dec, *t, u, opt);

  VertexClassification c;
  c.vertex = u;
  c.kind = dec.kind();
  const double rtol = dec.options().recognition_tol;
  auto s = support(dec, u);
  WalkEvaluator ev(dec);
  PhaseSum f{s.weights, s.values};

  if (s.size() == 1) {
    c.verdict = Verdict::Sedentary;
    c.constant = 1.0;
    c.certified_bound = 1.0;
    c.tight = true;
    c.time = 0.0;
    c.evidence.value = 1.0;
    c.evidence.mode = InfimumMode::ExactOnPeriod;
    c.trail.push_back("support of size one: |U(t)_{u,u}| = 1 for all t");
    return c;
  }

  // strongly cospectral partners
  std::optional<std::size_t> partner;
  std::optional<SignPartition> partition;
  for (std::size_t v = 0; v < g.order() && !partner; ++v) {
    if (v == u) continue;
    if (auto p = strongly_cospectral(dec, u, v)) {
      partner = v;
      partition = p;
    }
  }

  // best single-eigenvalue projection bound
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (s.weights[k] > s.weights[best]) best = k;
  const double a = s.weights[best];
  const bool has_bound = a > 0.5 + 1e-12;
  if (has_bound) {
    c.certified_bound = 2.0 * a - 1.0;
    c.trail.push_back("projection-sum bound with S = {" + detail::fmt(s.values[best]) +
                      "}: |U(t)_{u,u}| >= " + detail::fmt(2.0 * a - 1.0));
  }

  auto per = periodicity_of(s.values, rtol);
  if (per) {
    if (partner) {
      std::vector<std::size_t> plus;
      for (auto j : partition->plus) {
        auto k = detail::position_in(s, j);
        if (k < s.size()) plus.push_back(k);
      }
      if (!plus.empty() && plus.size() < s.size()) {
        if (auto t1 = equality_time_criterion(s.values, plus, rtol)) {
          c.verdict = Verdict::PST;
          c.partner = partner;
          c.time = *t1;
          c.constant = 0.0;
          c.certified_bound.reset();
          c.evidence = minimize_magnitude(f, per->rho, InfimumMode::ExactOnPeriod, opt.grid);
          c.trail.push_back("strongly cospectral with " + std::to_string(*partner) +
                            "; phase conditions on sigma^+ hold: perfect state transfer at t = " + detail::fmt(*t1));
          return c;
        }
      }
    }
    detail::settle_on_period(c, f, *per, opt.grid);
    if (c.verdict == Verdict::NotSedentary) {
      c.certified_bound.reset();
      return c;
    }
    if (has_bound) {
      if (auto t1 = equality_time_criterion(s.values, {best}, rtol)) {
        c.constant = 2.0 * a - 1.0;
        c.time = *t1;
        c.trail.push_back("phase conditions hold: bound attained at t = " + detail::fmt(*t1));
      }
    }
    return c;
  }

  c.evidence = infimum_diagonal(ev, u, opt.grid, opt.scan_periods);
  if (auto terms = real_diagonal_terms(s, rtol)) {
    if (auto t0 = real_diagonal_zero_search(*terms, c.evidence.horizon)) {
      c.verdict = Verdict::NotSedentary;
      c.time = *t0;
      c.constant = 0.0;
      c.certified_bound.reset();
      c.trail.push_back("real-valued diagonal changes sign: zero at t = " + detail::fmt(*t0));
      return c;
    }
  }
  if (has_bound) {
    c.verdict = Verdict::Sedentary;
    c.constant = 2.0 * a - 1.0;
    if (s.size() <= opt.max_subset_support) {
      auto pv = pgst_parity_criterion(s.values, {best}, rtol);
      if (pv == ParityVerdict::ApproachesEquality) {
        c.sharp = true;
        c.trail.push_back("all integer relations have even sum over S: infimum equals the bound (sharp)");
      } else if (pv == ParityVerdict::Blocked) {
        c.constant = c.evidence.value;
        c.trail.push_back("odd-sum integer relation: infimum strictly above the bound; constant is a grid estimate");
      } else {
        c.trail.push_back("support not recognized exactly: sharpness undecided");
      }
    }
    return c;
  }
  c.verdict = Verdict::Undetermined;
  c.constant = c.evidence.value;
  if (partner) c.partner = partner;
  c.trail.push_back("no certificate applies: bounded-horizon scan only");
  return c;
}

inline VertexClassification classify_vertex(const WeightedGraph& g, MatrixKind kind, std::size_t u,
                                            const ClassifyOptions& opt = {}) {
  return classify_vertex(g, decompose(g, kind, opt.spectral), u, opt);
}

// ---------------------------------------------------------------------------
// Products, blow-ups and joins
// ---------------------------------------------------------------------------

/// Sedentariness of (u, v) in K_2 x Y, which depends only on |Re U_Y(t)_{v,v}|.
struct BipartiteDoubleResult {
  Verdict verdict = Verdict::Undetermined;
  std::optional<double> constant;
  std::optional<double> time;
  bool tight = false;
  InfimumEstimate evidence;
};

inline BipartiteDoubleResult bipartite_double_sedentary(const SpectralDecomposition& dec_y, std::size_t v,
                                                        const GridOptions& grid = {}, double periods = 200.0) {
  auto s = support(dec_y, v);
  BipartiteDoubleResult r;
  PhaseSum re = PhaseSum::real_part(PhaseSum{s.weights, s.values});
  std::vector<CosineTerm> terms;
  for (std::size_t k = 0; k < s.size(); ++k) terms.push_back({s.weights[k], s.values[k]});
  auto per = periodicity_of(re.freqs, dec_y.options().recognition_tol);
  double horizon = per ? per->rho : scan_horizon(re, periods);
  r.evidence = minimize_magnitude(re, horizon, per ? InfimumMode::ExactOnPeriod : InfimumMode::GridLowerConfidence, grid);
  if (auto t0 = real_diagonal_zero_search(terms, horizon)) {
    r.verdict = Verdict::NotSedentary;
    r.time = *t0;
    r.constant = 0.0;
    return r;
  }
  if (per && r.evidence.value <= kZeroTol) {
    // tangential zero: no sign change, but the periodic minimum vanishes
    r.verdict = Verdict::NotSedentary;
    r.time = r.evidence.attained_time;
    r.constant = 0.0;
    return r;
  }
  if (per) {
    r.verdict = Verdict::Sedentary;
    r.constant = r.evidence.value;
    r.time = r.evidence.attained_time;
    r.tight = true;
    return r;
  }
  r.constant = r.evidence.value;
  return r;
}

/// Closed form for K_2 x (O_2 v Z) at an apex, Z d-regular on n = s(d + s)/2
/// vertices with s even and nu2(s) >= nu2(d):
/// C = min_{k in K} cos^2(s1 k pi / (d1 + 2 s1)), attained at 2 k0 pi / (d + 2s).
struct DoubleConeProductConstant {
  double constant = 0.0;
  double time = 0.0;
  std::vector<std::int64_t> k_set;
};

inline std::optional<DoubleConeProductConstant> double_cone_product_constant(std::int64_t d, std::int64_t s) {
  if (d <= 0 || s <= 0 || s % 2 != 0) return std::nullopt;
  if (numtheory::nu2(s) < numtheory::nu2(d)) return std::nullopt;
  const std::int64_t g = std::gcd(d, s);
  const std::int64_t d1 = d / g, s1 = s / g;
  const std::int64_t den = d1 + 2 * s1;
  DoubleConeProductConstant out;
  out.constant = 2.0;
  for (std::int64_t j = 1; j <= s1; j += 4) {
    auto lo = static_cast<std::int64_t>(std::ceil(static_cast<double>(j * den) / static_cast<double>(4 * s1)));
    auto hi = static_cast<std::int64_t>(std::floor(static_cast<double>((j + 2) * den) / static_cast<double>(4 * s1)));
    for (std::int64_t k = std::max<std::int64_t>(lo, 1); k <= hi; ++k) {
      out.k_set.push_back(k);
      double c = std::cos(static_cast<double>(s1 * k) * std::numbers::pi / static_cast<double>(den));
      if (c * c < out.constant) {
        out.constant = c * c;
        out.time = 2.0 * static_cast<double>(k) * std::numbers::pi / static_cast<double>(d + 2 * s);
      }
    }
  }
  if (out.k_set.empty()) return std::nullopt;
  return out;
}

/// Bound for vertex (j, u) of the blow-up of m copies of X (adjacency):
/// 1 - 2/m + 2 (F_0)_{u,u} / m, with F_0 the 0-eigenprojector of A(X). The
/// blow-up's 0-eigenprojector has diagonal entry (m - 1)/m + (F_0)_{u,u}/m.
struct BlowupBound {
  std::size_t m = 0;
  double bound = 0.0;
  bool zero_in_support = false;
  /// (F_0)_{u,u} / m: the contribution of X's kernel to the blow-up's 0-eigenprojector.
  double f0_uu = 0.0;
  /// First time with exp(i t lambda) = -1 on every nonzero blow-up eigenvalue.
  std::optional<double> equality_time;
  /// For m = 2 without 0 in the support: whether an odd-sum relation sum m_j lambda_j = 0 exists.
  std::optional<numtheory::RelationVerdict> m2_relation;
  Verdict verdict = Verdict::Undetermined;
};

inline BlowupBound blowup_bound(const WeightedGraph& x, std::size_t u, std::size_t m, double tol = 1e-7) {
  if (m < 2) throw std::invalid_argument("blowup_bound: m must be at least 2");
  auto dec = decompose(x, MatrixKind::adjacency());
  auto s = support(dec, u);
  BlowupBound b;
  b.m = m;
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(s.values[k]) < 1e-9 * std::max(1.0, dec.radius())) {
      b.zero_in_support = true;
      b.f0_uu = s.weights[k] / md;
    }
  }
  b.bound = 1.0 - 2.0 / md + 2.0 * b.f0_uu;
  // blow-up support: {m lambda} u {0}
  std::vector<double> vals{0.0};
  for (double v : s.values)
    if (std::abs(v) >= 1e-9 * std::max(1.0, dec.radius())) vals.push_back(md * v);
  b.equality_time = equality_time_criterion(vals, {0}, tol);
  if (b.bound > 1e-12) b.verdict = Verdict::Sedentary;
  if (m == 2 && !b.zero_in_support) {
    auto exact = numtheory::recognize_values(s.values, tol);
    if (exact) {
      std::vector<numtheory::QuadraticValue> plus;
      for (auto q : *exact) plus.push_back({2 * q.p, 2 * q.q, q.delta});
      std::vector<numtheory::QuadraticValue> minus{{0, 0, exact->front().delta}};
      b.m2_relation = numtheory::integer_relation_parity(plus, minus).verdict;
      if (*b.m2_relation == numtheory::RelationVerdict::RelationWithOddSum) b.verdict = Verdict::Sedentary;
      if (*b.m2_relation == numtheory::RelationVerdict::AllRelationsEvenSum) b.verdict = Verdict::NotSedentary;
    }
  }
  return b;
}

/// C - 2/|V(X)| when positive: a C-sedentary vertex of X stays sedentary in X v Y.
inline std::optional<double> join_sedentary_transfer(double c_x, std::size_t nx) {
  double r = c_x - join_perturbation_bound(nx);
  if (r > 1e-12) return r;
  return std::nullopt;
}

}  // namespace sedwalk
