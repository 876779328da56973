#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sedwalk/spectral.hpp"

namespace sedwalk {

using Complex = std::complex<double>;

/// f(t) = sum_k weights[k] * exp(i t freqs[k]); the common currency of every
/// diagonal entry U(t)_{u,u} and of the closed forms for products.
struct PhaseSum {
  std::vector<double> weights;
  std::vector<double> freqs;

  Complex operator()(double t) const {
    Complex s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * std::polar(1.0, t * freqs[k]);
    return s;
  }
  double magnitude(double t) const { return std::abs((*this)(t)); }

  /// sum c_k cos(omega_k t) = Re f(t) written as a phase sum with +/- omega.
  static PhaseSum real_part(const PhaseSum& f) {
    PhaseSum r;
    for (std::size_t k = 0; k < f.weights.size(); ++k) {
      r.weights.push_back(0.5 * f.weights[k]);
      r.freqs.push_back(f.freqs[k]);
      r.weights.push_back(0.5 * f.weights[k]);
      r.freqs.push_back(-f.freqs[k]);
    }
    return r;
  }

  double max_frequency_gap() const {
    if (freqs.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(freqs.begin(), freqs.end());
    return *hi - *lo;
  }

  /// Smallest positive distance between two distinct frequencies, or 0.
  double min_frequency_gap(double tol = 1e-9) const {
    std::vector<double> f = freqs;
    std::sort(f.begin(), f.end());
    double best = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      double d = f[k] - f[k - 1];
      if (d > tol && (best == 0.0 || d < best)) best = d;
    }
    return best;
  }
};

enum class InfimumMode { ExactOnPeriod, GridLowerConfidence };

inline const char* to_string(InfimumMode m) {
  return m == InfimumMode::ExactOnPeriod ? "ExactOnPeriod" : "GridLowerConfidence";
}

/// Result of a minimum search of |f(t)| over [0, horizon].
struct InfimumEstimate {
  double value = 1.0;
  std::optional<double> attained_time;
  InfimumMode mode = InfimumMode::GridLowerConfidence;
  double horizon = 0.0;
  std::size_t samples = 0;
  /// Estimated uncertainty of `value` from the local curvature and the final bracket.
  double error_bar = 0.0;
};

struct GridOptions {
  std::size_t min_samples = 20000;
  /// Samples per fastest oscillation when that demands more than min_samples.
  double samples_per_cycle = 40.0;
  std::size_t max_samples = 20'000'000;
  std::size_t refine_candidates = 5;
  double time_resolution = 1e-10;
};

namespace detail {

/// Golden-section search for the minimum of g on [a, b].
template <class F>
std::pair<double, double> golden_minimize(F&& g, double a, double b, double resolution) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && (b - a) > resolution; ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  double t = gc < gd ? c : d;
  return {t, std::min(gc, gd)};
}

}  // namespace detail

/// Minimum of |f| over [0, horizon]: a uniform grid followed by golden-section
/// refinement of |f|^2 around the smallest samples.
inline InfimumEstimate minimize_magnitude(const PhaseSum& f, double horizon, InfimumMode mode,
                                          const GridOptions& opt = {}) {
  if (!(horizon > 0.0)) throw std::invalid_argument("minimize_magnitude: horizon must be positive");
  double spread = f.max_frequency_gap();
  double cycles = spread * horizon / (2.0 * std::numbers::pi);
  auto wanted = static_cast<std::size_t>(std::ceil(cycles * opt.samples_per_cycle));
  std::size_t samples = std::clamp(std::max(opt.min_samples, wanted), std::size_t{2}, opt.max_samples);
  const double h = horizon / static_cast<double>(samples - 1);

  // keep the indices of the best local minima of the sampled sequence
  std::vector<std::pair<double, std::size_t>> best;
  double prev2 = 2.0, prev1 = f.magnitude(0.0);
  auto consider = [&](double value, std::size_t idx) {
    if (best.size() < opt.refine_candidates) {
      best.emplace_back(value, idx);
      std::sort(best.begin(), best.end());
    } else if (value < best.back().first) {
      best.back() = {value, idx};
      std::sort(best.begin(), best.end());
    }
  };
  for (std::size_t i = 1; i < samples; ++i) {
    double cur = f.magnitude(static_cast<double>(i) * h);
    if (prev1 <= prev2 && prev1 <= cur) consider(prev1, i - 1);
    prev2 = prev1;
    prev1 = cur;
  }
  if (prev1 <= prev2) consider(prev1, samples - 1);

  InfimumEstimate est;
  est.mode = mode;
  est.horizon = horizon;
  est.samples = samples;
  est.value = 2.0;
  auto sq = [&](double t) { return std::norm(f(t)); };
  std::vector<std::pair<double, double>> refined;
  for (const auto& [value, idx] : best) {
    double a = std::max(0.0, (static_cast<double>(idx) - 1.0) * h);
    double b = std::min(horizon, (static_cast<double>(idx) + 1.0) * h);
    auto [t, g] = detail::golden_minimize(sq, a, b, opt.time_resolution);
    double m = std::sqrt(std::max(0.0, g));
    if (value < m) {
      m = value;
      t = static_cast<double>(idx) * h;
    }
    refined.emplace_back(m, t);
  }
  // equal minima (up to 1e-9) are reported at the earliest time
  for (const auto& [m, t] : refined) est.value = std::min(est.value, m);
  for (const auto& [m, t] : refined)
    if (m <= est.value + 1e-9 && (!est.attained_time || t < *est.attained_time)) est.attained_time = t;
  if (est.attained_time) est.value = f.magnitude(*est.attained_time);
  if (!est.attained_time) {
    est.value = f.magnitude(0.0);
    est.attained_time = 0.0;
  }
  // curvature-based uncertainty: |f|'' ~ spread^2 near a smooth minimum
  double bracket = std::max(opt.time_resolution, 1e-12);
  est.error_bar = 0.5 * spread * spread * bracket * bracket + 1e-14;
  est.value = std::clamp(est.value, 0.0, 1.0);
  return est;
}

/// Transition amplitudes U_M(t) = sum_j exp(i t lambda_j) E_j of one decomposition.
class WalkEvaluator {
 public:
  explicit WalkEvaluator(SpectralDecomposition dec) : dec_(std::move(dec)) {}

  const SpectralDecomposition& decomposition() const { return dec_; }

  Complex amplitude(std::size_t u, std::size_t v, double t) const {
    check(u);
    check(v);
    Complex s = 0.0;
    const auto iu = static_cast<Eigen::Index>(u), iv = static_cast<Eigen::Index>(v);
    for (std::size_t j = 0; j < dec_.eigenvalues().size(); ++j) {
      s += std::polar(1.0, t * dec_.eigenvalues()[j]) * dec_.projectors()[j](iu, iv);
    }
    return s;
  }

  double magnitude(std::size_t u, std::size_t v, double t) const { return std::abs(amplitude(u, v, t)); }

  /// U(t)_{u,u} as a phase sum over the support of u.
  PhaseSum diagonal(std::size_t u) const {
    auto s = support(dec_, u);
    return PhaseSum{s.weights, s.values};
  }

  /// Full matrix U(t).
  Eigen::MatrixXcd unitary(double t) const {
    const auto n = static_cast<Eigen::Index>(dec_.order());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t j = 0; j < dec_.eigenvalues().size(); ++j) {
      out += std::polar(1.0, t * dec_.eigenvalues()[j]) * dec_.projectors()[j].cast<Complex>();
    }
    return out;
  }

 private:
  void check(std::size_t u) const {
    if (u >= dec_.order()) throw std::out_of_range("walk: vertex out of range");
  }
  SpectralDecomposition dec_;
};

struct SeriesPoint {
  double t;
  double magnitude;
};

/// |U(t)_{u,u}| on a uniform grid of `steps` points over [0, t_max], endpoints included.
inline std::vector<SeriesPoint> diagonal_series(const WalkEvaluator& ev, std::size_t u, double t_max,
                                                std::size_t steps) {
  if (!(t_max > 0.0)) throw std::invalid_argument("diagonal_series: t_max must be positive");
  if (steps < 2) throw std::invalid_argument("diagonal_series: needs at least 2 steps");
  PhaseSum f = ev.diagonal(u);
  std::vector<SeriesPoint> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
    out.push_back({t, f.magnitude(t)});
  }
  return out;
}

/// Horizon used for non-periodic scans: `periods` periods of the smallest gap in the support.
inline double scan_horizon(const PhaseSum& f, double periods = 200.0) {
  double gap = f.min_frequency_gap();
  if (gap <= 0.0) return 2.0 * std::numbers::pi;
  return periods * 2.0 * std::numbers::pi / gap;
}

/// inf_t |U(t)_{u,u}|: a minimum over one period when u is periodic, otherwise a
/// bounded-horizon scan that is an upper bound on the infimum, not a certificate.
inline InfimumEstimate infimum_diagonal(const WalkEvaluator& ev, std::size_t u, const GridOptions& opt = {},
                                        double periods = 200.0) {
  PhaseSum f = ev.diagonal(u);
  auto per = periodicity_of(f.freqs, ev.decomposition().options().recognition_tol);
  if (per && per->trivial) {
    InfimumEstimate est;
    est.value = std::clamp(f.magnitude(0.0), 0.0, 1.0);
    est.attained_time = 0.0;
    est.mode = InfimumMode::ExactOnPeriod;
    est.horizon = per->rho;
    return est;
  }
  if (per) return minimize_magnitude(f, per->rho, InfimumMode::ExactOnPeriod, opt);
  return minimize_magnitude(f, scan_horizon(f, periods), InfimumMode::GridLowerConfidence, opt);
}

/// Diagonal entry of U_{A(K_m x Y)}(t) at (u, v):
/// (1/m) U_Y((m-1)t)_{v,v} + ((m-1)/m) U_Y(-t)_{v,v}.
inline Complex product_diagonal_km_y(std::size_t m, const SpectralDecomposition& dec_y, std::size_t v, double t) {
  if (m < 2) throw std::invalid_argument("product_diagonal_km_y: m must be at least 2");
  WalkEvaluator ev(dec_y);
  const double md = static_cast<double>(m);
  return ev.amplitude(v, v, (md - 1.0) * t) / md + (md - 1.0) / md * ev.amplitude(v, v, -t);
}

/// Phase-sum form of the diagonal of the direct product of K_{m_j}: the sum over
/// subsets S of prod_{j in S}(m_j - 1) * exp(i t (-1)^{|S|} prod_{j not in S}(m_j - 1)),
/// divided by prod m_j.
inline PhaseSum complete_product_phase_sum(const std::vector<std::size_t>& m_list) {
  if (m_list.empty()) throw std::invalid_argument("complete_product: empty factor list");
  if (m_list.size() > 20) throw std::length_error("complete_product: at most 20 factors (2^n subset sum)");
  for (auto m : m_list)
    if (m < 2) throw std::invalid_argument("complete_product: every factor needs m_j >= 2");
  double total = 1.0;
  for (auto m : m_list) total *= static_cast<double>(m);
  const std::size_t n = m_list.size();
  PhaseSum f;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double in = 1.0, out = 1.0;
    int card = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double d = static_cast<double>(m_list[j]) - 1.0;
      if (mask >> j & 1u) {
        in *= d;
        ++card;
      } else {
        out *= d;
      }
    }
    f.weights.push_back(in / total);
    f.freqs.push_back((card % 2 == 0 ? 1.0 : -1.0) * out);
  }
  return f;
}

inline Complex complete_product_diagonal(const std::vector<std::size_t>& m_list, double t) {
  return complete_product_phase_sum(m_list)(t);
}

/// | |U_{X v Y}(t)_{u,v}| - |U_X(t)_{u,v}| | <= 2 / |V(X)|.
inline double join_perturbation_bound(std::size_t nx) {
  if (nx == 0) throw std::invalid_argument("join_perturbation_bound: |V(X)| must be at least 1");
  return 2.0 / static_cast<double>(nx);
}

}  // namespace sedwalk
