#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sedwalk/families.hpp"
#include "sedwalk/sedentary.hpp"
#include "sedwalk/spectral.hpp"
#include "sedwalk/twins.hpp"

namespace sedwalk::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// x rounded to 12 significant digits, so that printed output is stable;
/// magnitudes below 1e-12 print as 0.
inline double round12(double x) {
  if (std::isfinite(x) && std::abs(x) < 1e-12) return 0.0;
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", std::isfinite(x) && std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

/// "pi/2", "3pi/4", "pi", "2pi" when t = p pi / q with q <= max_den; nullopt otherwise.
inline std::optional<std::string> pi_multiple(double t, long max_den = 64, double tol = 1e-9) {
  if (!std::isfinite(t)) return std::nullopt;
  if (t == 0.0) return std::string("0");
  const double r = t / std::numbers::pi;
  for (long q = 1; q <= max_den; ++q) {
    const double p = std::round(r * static_cast<double>(q));
    if (p == 0.0) continue;
    if (std::abs(r - p / static_cast<double>(q)) * std::numbers::pi <= tol * std::max(1.0, std::abs(t))) {
      const long pi_num = static_cast<long>(p);
      const long g = std::gcd(std::labs(pi_num), q);
      const long a = pi_num / g, b = q / g;
      std::string s = a == 1 ? "pi" : a == -1 ? "-pi" : std::to_string(a) + "pi";
      if (b != 1) s += "/" + std::to_string(b);
      return s;
    }
  }
  return std::nullopt;
}

inline Json time_json(std::optional<double> t) {
  if (!t) return nullptr;
  Json j;
  j["radians"] = round12(*t);
  auto p = pi_multiple(*t);
  j["pi_multiple"] = p ? Json(*p) : Json(nullptr);
  return j;
}

inline Json opt_number(std::optional<double> x) { return x ? Json(round12(*x)) : Json(nullptr); }

inline Json to_json(const InfimumEstimate& e) {
  Json j;
  j["grid_min"] = round12(e.value);
  j["grid_argmin"] = opt_number(e.attained_time);
  j["mode"] = to_string(e.mode);
  j["horizon"] = round12(e.horizon);
  j["samples"] = e.samples;
  return j;
}

inline Json to_json(const VertexClassification& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["vertex"] = c.vertex;
  j["matrix_kind"] = c.kind.to_string();
  j["verdict"] = to_string(c.verdict);
  j["constant"] = opt_number(c.constant);
  j["certified_bound"] = opt_number(c.certified_bound);
  j["tight"] = c.tight;
  j["sharp"] = c.sharp;
  j["tightness_time"] = c.tight ? time_json(c.time) : Json(nullptr);
  j["time"] = time_json(c.time);
  j["partner"] = c.partner ? Json(*c.partner) : Json(nullptr);
  j["lemma_trail"] = c.trail;
  j["evidence"] = to_json(c.evidence);
  return j;
}

inline Json to_json(const FamilyVerdict& f) {
  Json j = to_json(f.classification);
  j["case"] = f.case_label;
  j["closed_form_constant"] = opt_number(f.closed_form_constant);
  j["closed_form_time"] = time_json(f.closed_form_time);
  j["fallback"] = f.fallback;
  return j;
}

inline Json to_json(const EigenvalueSupport& s) {
  Json j;
  j["vertex"] = s.vertex;
  Json items = Json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    Json e;
    e["eigenvalue"] = round12(s.values[k]);
    e["weight"] = round12(s.weights[k]);
    items.push_back(e);
  }
  j["support"] = items;
  return j;
}

inline Json twin_sets_json(const WeightedGraph& g, const SpectralDecomposition& dec) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["matrix_kind"] = dec.kind().to_string();
  Json sets = Json::array();
  for (const auto& t : find_twin_sets(g)) {
    Json e;
    e["members"] = t.members;
    e["omega"] = round12(t.omega);
    e["eta"] = round12(t.eta);
    e["theta"] = round12(twin_eigenvalue(g, dec.kind(), t));
    sets.push_back(e);
  }
  j["twin_sets"] = sets;
  return j;
}

inline Json spectrum_json(const SpectralDecomposition& dec, const std::vector<std::size_t>& vertices) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["matrix_kind"] = dec.kind().to_string();
  Json eig = Json::array();
  for (std::size_t k = 0; k < dec.eigenvalues().size(); ++k) {
    Json e;
    e["eigenvalue"] = round12(dec.eigenvalues()[k]);
    e["multiplicity"] = dec.multiplicities()[k];
    eig.push_back(e);
  }
  j["eigenvalues"] = eig;
  Json sup = Json::array();
  for (auto u : vertices) {
    Json e = to_json(support(dec, u));
    auto per = is_periodic(dec, u);
    e["period"] = per && !per->trivial ? time_json(per->rho) : Json(nullptr);
    sup.push_back(e);
  }
  j["supports"] = sup;
  return j;
}

}  // namespace sedwalk::report
