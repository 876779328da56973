#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sedwalk/rational.hpp"

namespace sedwalk {

using Matrix = Eigen::MatrixXd;

/// Which Hermitian matrix drives the walk: A, L = D - A, or M_q = qD + A.
class MatrixKind {
 public:
  enum class Type { Adjacency, Laplacian, Generalized };

  static MatrixKind adjacency() { return MatrixKind(Type::Adjacency, 0.0); }
  static MatrixKind laplacian() { return MatrixKind(Type::Laplacian, 0.0); }
  static MatrixKind generalized(double q) {
    if (!std::isfinite(q)) throw std::invalid_argument("generalized adjacency parameter must be finite");
    return MatrixKind(Type::Generalized, q);
  }

  Type type() const { return type_; }
  double q() const { return q_; }

  /// "A", "L" or "Mq:<q>".
  std::string to_string() const {
    switch (type_) {
      case Type::Adjacency: return "A";
      case Type::Laplacian: return "L";
      case Type::Generalized: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "Mq:%.12g", q_);
        return buf;
      }
    }
    return "?";
  }

  static MatrixKind parse(const std::string& text) {
    if (text == "A") return adjacency();
    if (text == "L") return laplacian();
    // "Mq:<q>" or "Mq(<q>)"
    std::string num;
    if (text.rfind("Mq:", 0) == 0) {
      num = text.substr(3);
    } else if (text.rfind("Mq(", 0) == 0 && text.size() > 4 && text.back() == ')') {
      num = text.substr(3, text.size() - 4);
    }
    if (!num.empty()) {
      std::size_t used = 0;
      double q = 0.0;
      try {
        q = std::stod(num, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad matrix kind: " + text);
      }
      if (used != num.size() || !std::isfinite(q)) throw std::invalid_argument("bad matrix kind: " + text);
      return generalized(q);
    }
    throw std::invalid_argument("bad matrix kind: " + text + " (expected A, L, Mq:<q> or Mq(<q>))");
  }

  friend bool operator==(const MatrixKind&, const MatrixKind&) = default;

 private:
  MatrixKind(Type t, double q) : type_(t), q_(q) {}
  Type type_;
  double q_;
};

struct Edge {
  std::size_t u;
  std::size_t v;
  Weight w;
};

/// Undirected weighted graph with optional loops on vertices 0..n-1.
/// Immutable once constructed; edges are stored as unordered pairs (u <= v).
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::size_t n, const std::vector<Edge>& edges, std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n_) throw std::invalid_argument("label count must match vertex count");
    for (const auto& e : edges) {
      if (e.u >= n_ || e.v >= n_) throw std::out_of_range("edge endpoint out of range");
      if (!(e.w.value() > 0.0) || !std::isfinite(e.w.value())) {
        throw std::invalid_argument("edge weights must be finite and strictly positive");
      }
      auto key = std::minmax(e.u, e.v);
      if (!edges_.emplace(std::pair{key.first, key.second}, e.w).second) {
        throw std::invalid_argument("duplicate edge (" + std::to_string(key.first) + "," +
                                    std::to_string(key.second) + ")");
      }
    }
  }

  std::size_t order() const { return n_; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::map<std::pair<std::size_t, std::size_t>, Weight>& edge_map() const { return edges_; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
    return out;
  }

  std::optional<Weight> weight(std::size_t u, std::size_t v) const {
    auto key = std::minmax(u, v);
    auto it = edges_.find({key.first, key.second});
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }

  bool has_loops() const {
    for (const auto& [key, w] : edges_)
      if (key.first == key.second) return true;
    return false;
  }

  /// deg(u) = 2 w(u,u) + sum_{j != u} w(u,j).
  double degree(std::size_t u) const {
    double d = 0.0;
    for (const auto& [key, w] : edges_) {
      if (key.first == u && key.second == u) {
        d += 2.0 * w.value();
      } else if (key.first == u || key.second == u) {
        d += w.value();
      }
    }
    return d;
  }

 private:
  std::size_t n_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Weight> edges_;
  std::vector<std::string> labels_;
};

inline Matrix adjacency_matrix(const WeightedGraph& g) {
  Matrix a = Matrix::Zero(g.order(), g.order());
  for (const auto& [key, w] : g.edge_map()) {
    a(key.first, key.second) = w.value();
    a(key.second, key.first) = w.value();
  }
  return a;
}

inline Matrix degree_matrix(const WeightedGraph& g) {
  Matrix d = Matrix::Zero(g.order(), g.order());
  for (const auto& [key, w] : g.edge_map()) {
    if (key.first == key.second) {
      d(key.first, key.first) += 2.0 * w.value();
    } else {
      d(key.first, key.first) += w.value();
      d(key.second, key.second) += w.value();
    }
  }
  return d;
}

inline Matrix laplacian_matrix(const WeightedGraph& g) { return degree_matrix(g) - adjacency_matrix(g); }

inline Matrix matrix(const WeightedGraph& g, MatrixKind kind) {
  switch (kind.type()) {
    case MatrixKind::Type::Adjacency: return adjacency_matrix(g);
    case MatrixKind::Type::Laplacian: return laplacian_matrix(g);
    case MatrixKind::Type::Generalized: return kind.q() * degree_matrix(g) + adjacency_matrix(g);
  }
  throw std::logic_error("unknown matrix kind");
}

/// Returns k when every row sum of A equals k. Rational weights are summed
/// exactly; otherwise rows must agree to within `tol` (relative).
inline std::optional<double> is_weighted_regular(const WeightedGraph& g, double tol = 1e-10) {
  const std::size_t n = g.order();
  if (n == 0) return std::nullopt;
  bool exact = true;
  for (const auto& [key, w] : g.edge_map()) exact = exact && w.is_exact();
  if (exact) {
    std::vector<Rational> sums(n, Rational(0));
    for (const auto& [key, w] : g.edge_map()) {
      sums[key.first] += *w.exact();
      if (key.first != key.second) sums[key.second] += *w.exact();
    }
    for (std::size_t u = 1; u < n; ++u)
      if (!(sums[u] == sums[0])) return std::nullopt;
    return sums[0].to_double();
  }
  Eigen::VectorXd sums = adjacency_matrix(g).rowwise().sum();
  double scale = std::max(1.0, sums.cwiseAbs().maxCoeff());
  if (sums.maxCoeff() - sums.minCoeff() > tol * scale) return std::nullopt;
  return sums(0);
}

// ---------------------------------------------------------------------------
// Constructors. Vertex ordering is part of each contract: joins and unions
// place the left operand first, blow-ups are copy-major, products row-major.
// ---------------------------------------------------------------------------

namespace detail {
inline void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": vertex count must be at least 1");
}
}  // namespace detail

inline WeightedGraph empty(std::size_t n) {
  detail::require_positive(n, "empty");
  return WeightedGraph(n, {});
}

inline WeightedGraph complete(std::size_t n) {
  detail::require_positive(n, "complete");
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.push_back({u, v, Weight(1)});
  return WeightedGraph(n, e);
}

inline WeightedGraph path(std::size_t n) {
  detail::require_positive(n, "path");
  std::vector<Edge> e;
  for (std::size_t u = 0; u + 1 < n; ++u) e.push_back({u, u + 1, Weight(1)});
  return WeightedGraph(n, e);
}

inline WeightedGraph cycle(std::size_t n) {
  detail::require_positive(n, "cycle");
  if (n < 3) throw std::invalid_argument("cycle: needs at least 3 vertices");
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u) e.push_back({u, (u + 1) % n, Weight(1)});
  return WeightedGraph(n, e);
}

/// K_{1,n}: centre 0, leaves 1..n.
inline WeightedGraph star(std::size_t n) {
  detail::require_positive(n, "star");
  std::vector<Edge> e;
  for (std::size_t v = 1; v <= n; ++v) e.push_back({0, v, Weight(1)});
  return WeightedGraph(n + 1, e);
}

inline WeightedGraph disjoint_union(const WeightedGraph& x, const WeightedGraph& y) {
  std::vector<Edge> e = x.edges();
  const std::size_t off = x.order();
  for (const auto& ed : y.edges()) e.push_back({ed.u + off, ed.v + off, ed.w});
  return WeightedGraph(x.order() + y.order(), e);
}

/// X v Y: disjoint union plus a weight-one edge between every x in X and y in Y.
inline WeightedGraph join(const WeightedGraph& x, const WeightedGraph& y) {
  std::vector<Edge> e = disjoint_union(x, y).edges();
  for (std::size_t u = 0; u < x.order(); ++u)
    for (std::size_t v = 0; v < y.order(); ++v) e.push_back({u, x.order() + v, Weight(1)});
  return WeightedGraph(x.order() + y.order(), e);
}

inline WeightedGraph complete_multipartite(const std::vector<std::size_t>& parts) {
  if (parts.empty()) throw std::invalid_argument("complete_multipartite: empty part list");
  WeightedGraph g = empty(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) g = join(g, empty(parts[i]));
  return g;
}

/// CP(2k): join of k copies of O_2.
inline WeightedGraph cocktail_party(std::size_t k) {
  if (k == 0) throw std::invalid_argument("cocktail_party: k must be at least 1");
  return complete_multipartite(std::vector<std::size_t>(k, 2));
}

/// Threshold graph built cell by cell. With starts_empty the cells read
/// O_{m1} v K_{m2} u O_{m3} v K_{m4} ...; otherwise K_{m1} u O_{m2} v K_{m3} ...
/// Each new cell is appended after the existing vertices.
inline WeightedGraph threshold(const std::vector<std::size_t>& parts, bool starts_empty) {
  if (parts.empty()) throw std::invalid_argument("threshold: empty part list");
  WeightedGraph g = starts_empty ? empty(parts[0]) : complete(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    // cell index i+1 (1-based); complete cells are joined, empty cells united
    bool complete_cell = starts_empty ? (i % 2 == 1) : (i % 2 == 0);
    g = complete_cell ? join(g, complete(parts[i])) : disjoint_union(g, empty(parts[i]));
  }
  return g;
}

/// X x Y with A(X x Y) = A(X) (x) A(Y); vertex (x, y) has index x * |Y| + y.
inline WeightedGraph direct_product(const WeightedGraph& x, const WeightedGraph& y) {
  const std::size_t ny = y.order();
  std::vector<Edge> e;
  auto ex = x.edges();
  auto ey = y.edges();
  std::map<std::pair<std::size_t, std::size_t>, Weight> acc;
  auto put = [&](std::size_t a, std::size_t b, const Weight& w) {
    auto key = std::minmax(a, b);
    acc.emplace(std::pair{key.first, key.second}, w);
  };
  for (const auto& a : ex) {
    for (const auto& b : ey) {
      Weight w = a.w * b.w;
      put(a.u * ny + b.u, a.v * ny + b.v, w);
      put(a.u * ny + b.v, a.v * ny + b.u, w);
    }
  }
  for (const auto& [key, w] : acc) e.push_back({key.first, key.second, w});
  return WeightedGraph(x.order() * ny, e);
}

/// A(X [] Y) = A(X) (x) I + I (x) A(Y).
inline WeightedGraph cartesian_product(const WeightedGraph& x, const WeightedGraph& y) {
  const std::size_t nx = x.order(), ny = y.order();
  std::map<std::pair<std::size_t, std::size_t>, Weight> acc;
  auto add = [&](std::size_t a, std::size_t b, const Weight& w) {
    auto key = std::minmax(a, b);
    auto [it, fresh] = acc.emplace(std::pair{key.first, key.second}, w);
    if (!fresh) it->second = it->second + w;
  };
  for (const auto& a : x.edges())
    for (std::size_t j = 0; j < ny; ++j) add(a.u * ny + j, a.v * ny + j, a.w);
  for (const auto& b : y.edges())
    for (std::size_t i = 0; i < nx; ++i) add(i * ny + b.u, i * ny + b.v, b.w);
  std::vector<Edge> e;
  for (const auto& [key, w] : acc) e.push_back({key.first, key.second, w});
  return WeightedGraph(nx * ny, e);
}

/// Blow-up of m copies of X: A = J_m (x) A(X); vertex (j, u) has index j * |X| + u.
inline WeightedGraph blow_up(std::size_t m, const WeightedGraph& x) {
  if (m == 0) throw std::invalid_argument("blow_up: copy count must be at least 1");
  const std::size_t n = x.order();
  std::map<std::pair<std::size_t, std::size_t>, Weight> acc;
  for (const auto& a : x.edges()) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t p = j * n + a.u, q = k * n + a.v;
        acc.emplace(std::pair{std::min(p, q), std::max(p, q)}, a.w);
      }
    }
  }
  std::vector<Edge> e;
  for (const auto& [key, w] : acc) e.push_back({key.first, key.second, w});
  return WeightedGraph(m * n, e);
}

/// P_n with a non-adjacent twin attached to end vertex 0; the twin is vertex n.
inline WeightedGraph path_with_end_twin(std::size_t n) {
  if (n < 2) throw std::invalid_argument("path_with_end_twin: needs n >= 2");
  auto e = path(n).edges();
  e.push_back({1, n, Weight(1)});
  return WeightedGraph(n + 1, e);
}

}  // namespace sedwalk
