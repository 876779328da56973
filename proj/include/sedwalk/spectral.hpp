#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sedwalk/graph.hpp"
#include "sedwalk/numtheory.hpp"

namespace sedwalk {

struct SpectralOptions {
  /// Eigenvalues closer than grouping_rel * max(1, spectral radius) share a class.
  double grouping_rel = 1e-7;
  /// ||E_j e_u|| above this puts lambda_j in the support of u.
  double support_tol = 1e-8;
  /// Residual accepted when matching E_j e_u against +/- E_j e_v.
  double sign_tol = 1e-7;
  /// Tolerance for exact recognition of eigenvalues and their differences.
  double recognition_tol = 1e-7;
};

/// M = sum_j lambda_j E_j with distinct eigenvalues in descending order.
class SpectralDecomposition {
 public:
  SpectralDecomposition() = default;
  SpectralDecomposition(Matrix m, MatrixKind kind, SpectralOptions opts) : m_(std::move(m)), kind_(kind), opts_(opts) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("decompose: matrix must be square");
    const auto n = static_cast<std::size_t>(m_.rows());
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    if (solver.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "eigensolver failed on a " << n << "x" << n << " matrix with max entry " << m_.cwiseAbs().maxCoeff();
      throw std::runtime_error(msg.str());
    }
    const Eigen::VectorXd& w = solver.eigenvalues();  // ascending
    const Matrix& v = solver.eigenvectors();
    radius_ = std::max(std::abs(w(0)), std::abs(w(static_cast<Eigen::Index>(n) - 1)));
    tol_ = opts_.grouping_rel * std::max(1.0, radius_);
    // single-linkage on sorted eigenvalues, walked from the top down
    std::size_t hi = n;
    while (hi > 0) {
      std::size_t lo = hi - 1;
      while (lo > 0 && w(static_cast<Eigen::Index>(lo)) - w(static_cast<Eigen::Index>(lo) - 1) <= tol_) --lo;
      Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      double mean = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        auto col = v.col(static_cast<Eigen::Index>(k));
        p.noalias() += col * col.transpose();
        mean += w(static_cast<Eigen::Index>(k));
      }
      values_.push_back(mean / static_cast<double>(hi - lo));
      projectors_.push_back(std::move(p));
      mult_.push_back(hi - lo);
      hi = lo;
    }
  }

  std::size_t order() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  MatrixKind kind() const { return kind_; }
  const SpectralOptions& options() const { return opts_; }
  double grouping_tol() const { return tol_; }
  double radius() const { return radius_; }

  const std::vector<double>& eigenvalues() const { return values_; }
  const std::vector<Matrix>& projectors() const { return projectors_; }
  const std::vector<std::size_t>& multiplicities() const { return mult_; }

  /// Index of the class whose eigenvalue is nearest to `value`, if within `tol`.
  std::optional<std::size_t> find(double value, double tol) const {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (std::abs(values_[j] - value) <= tol && (!best || std::abs(values_[j] - value) < std::abs(values_[*best] - value))) {
        best = j;
      }
    }
    return best;
  }

 private:
  Matrix m_;
  MatrixKind kind_ = MatrixKind::adjacency();
  SpectralOptions opts_;
  double radius_ = 0.0;
  double tol_ = 0.0;
  std::vector<double> values_;
  std::vector<Matrix> projectors_;
  std::vector<std::size_t> mult_;
};

inline SpectralDecomposition decompose(const WeightedGraph& g, MatrixKind kind, SpectralOptions opts = {}) {
  return SpectralDecomposition(matrix(g, kind), kind, opts);
}

/// Eigenvalues of M whose projector does not annihilate e_u, with the
/// diagonal weights (E_j)_{u,u}. Entries follow the descending order of the
/// decomposition.
struct EigenvalueSupport {
  std::size_t vertex = 0;
  std::vector<std::size_t> indices;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return indices.size(); }
};

inline EigenvalueSupport support(const SpectralDecomposition& dec, std::size_t u) {
  if (u >= dec.order()) throw std::out_of_range("support: vertex out of range");
  EigenvalueSupport s;
  s.vertex = u;
  const auto i = static_cast<Eigen::Index>(u);
  for (std::size_t j = 0; j < dec.eigenvalues().size(); ++j) {
    double norm = dec.projectors()[j].col(i).norm();
    if (norm > dec.options().support_tol) {
      s.indices.push_back(j);
      s.values.push_back(dec.eigenvalues()[j]);
      s.weights.push_back(dec.projectors()[j](i, i));
    }
  }
  return s;
}

inline bool cospectral(const SpectralDecomposition& dec, std::size_t u, std::size_t v) {
  if (u >= dec.order() || v >= dec.order()) throw std::out_of_range("cospectral: vertex out of range");
  const auto iu = static_cast<Eigen::Index>(u), iv = static_cast<Eigen::Index>(v);
  for (const auto& e : dec.projectors())
    if (std::abs(e(iu, iu) - e(iv, iv)) > dec.options().sign_tol) return false;
  return true;
}

/// Sign partition of a strongly cospectral pair: E_j e_u = E_j e_v on
/// `plus`, E_j e_u = -E_j e_v on `minus` (indices into the decomposition).
struct SignPartition {
  std::vector<std::size_t> plus;
  std::vector<std::size_t> minus;
};

inline std::optional<SignPartition> strongly_cospectral(const SpectralDecomposition& dec, std::size_t u,
                                                        std::size_t v) {
  if (u >= dec.order() || v >= dec.order()) throw std::out_of_range("strongly_cospectral: vertex out of range");
  if (u == v) throw std::invalid_argument("strongly_cospectral: needs two distinct vertices");
  const auto iu = static_cast<Eigen::Index>(u), iv = static_cast<Eigen::Index>(v);
  SignPartition part;
  for (std::size_t j = 0; j < dec.projectors().size(); ++j) {
    const Matrix& e = dec.projectors()[j];
    double nu = e.col(iu).norm(), nv = e.col(iv).norm();
    if (nu <= dec.options().support_tol && nv <= dec.options().support_tol) continue;
    double rplus = (e.col(iu) - e.col(iv)).cwiseAbs().maxCoeff();
    double rminus = (e.col(iu) + e.col(iv)).cwiseAbs().maxCoeff();
    if (std::min(rplus, rminus) > dec.options().sign_tol) return std::nullopt;
    (rplus <= rminus ? part.plus : part.minus).push_back(j);
  }
  return part;
}

/// Exact description of a periodic vertex: differences lambda_ref - lambda_k
/// over the support are coeffs[k] * sqrt(delta) / 2 and rho = 2 pi / (g * unit).
struct Periodicity {
  double rho = 0.0;
  numtheory::DifferenceForm form;
  std::int64_t gcd = 0;
  /// Support of size one: |U(t)_{u,u}| = 1 for all t and rho is only a convention.
  bool trivial = false;
};

inline std::optional<Periodicity> periodicity_of(const std::vector<double>& values, double tol) {
  if (values.empty()) return std::nullopt;
  if (values.size() == 1) {
    Periodicity p;
    p.trivial = true;
    p.rho = 2.0 * std::numbers::pi;
    p.form.coeffs = {0};
    return p;
  }
  auto form = numtheory::recognize_differences(values, 0, tol);
  if (!form) return std::nullopt;
  Periodicity p;
  p.form = *form;
  p.gcd = numtheory::gcd_set(std::span<const std::int64_t>(form->coeffs));
  if (p.gcd == 0) return std::nullopt;
  p.rho = 2.0 * std::numbers::pi / (static_cast<double>(p.gcd) * form->unit());
  return p;
}

inline std::optional<Periodicity> is_periodic(const SpectralDecomposition& dec, std::size_t u) {
  return periodicity_of(support(dec, u).values, dec.options().recognition_tol);
}

}  // namespace sedwalk
