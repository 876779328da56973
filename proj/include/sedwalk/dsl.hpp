#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedwalk/graph.hpp"
#include "sedwalk/rational.hpp"

namespace sedwalk {

/// Malformed graph description (DSL string or edge-list file).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos) : std::runtime_error(what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Parsed family expression, kept as a tree so callers can inspect how a graph
/// was assembled (for example, whether a direct product has an irregular factor).
struct GraphExpr {
  std::string op;
  std::vector<std::int64_t> ints;
  std::vector<GraphExpr> children;
  bool starts_empty = true;

  WeightedGraph build() const {
    auto size_arg = [&](std::size_t i) {
      if (ints.at(i) < 0) throw std::invalid_argument(op + ": negative size");
      return static_cast<std::size_t>(ints.at(i));
    };
    if (op == "K") return complete(size_arg(0));
    if (op == "O") return empty(size_arg(0));
    if (op == "P") return path(size_arg(0));
    if (op == "C") return cycle(size_arg(0));
    if (op == "S") return star(size_arg(0));
    if (op == "Ptwin") return path_with_end_twin(size_arg(0));
    if (op == "CP") {
      if (ints[0] <= 0 || ints[0] % 2 != 0) throw std::invalid_argument("CP(n): n must be a positive even vertex count");
      return cocktail_party(size_arg(0) / 2);
    }
    if (op == "KM" || op == "Gamma") {
      std::vector<std::size_t> parts;
      for (std::size_t i = 0; i < ints.size(); ++i) parts.push_back(size_arg(i));
      return op == "KM" ? complete_multipartite(parts) : threshold(parts, starts_empty);
    }
    if (op == "join") return join(children[0].build(), children[1].build());
    if (op == "union") return disjoint_union(children[0].build(), children[1].build());
    if (op == "dprod") return direct_product(children[0].build(), children[1].build());
    if (op == "cprod") return cartesian_product(children[0].build(), children[1].build());
    if (op == "blowup") return blow_up(size_arg(0), children[0].build());
    throw std::logic_error("unknown graph operator " + op);
  }

  /// True when some direct product in the tree has a factor that is not regular.
  bool has_irregular_direct_product() const {
    if (op == "dprod") {
      for (const auto& c : children)
        if (!is_weighted_regular(c.build())) return true;
    }
    for (const auto& c : children)
      if (c.has_irregular_direct_product()) return true;
    return false;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << op << "(";
    bool first = true;
    auto sep = [&] {
      if (!first) os << ",";
      first = false;
    };
    if (op == "blowup") {
      sep();
      os << ints[0];
      sep();
      os << children[0].to_string();
    } else {
      for (auto i : ints) {
        sep();
        os << i;
      }
      for (const auto& c : children) {
        sep();
        os << c.to_string();
      }
    }
    if (op == "Gamma") os << ";start=" << (starts_empty ? "O" : "K");
    os << ")";
    return os.str();
  }
};

namespace detail {

class DslParser {
 public:
  explicit DslParser(std::string text) : s_(std::move(text)) {}

  GraphExpr parse() {
    GraphExpr e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("graph DSL: " + what + " at position " + std::to_string(i_) + " in \"" + s_ + "\"", i_);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) fail("expected a graph name");
    return s_.substr(start, i_ - start);
  }
  std::int64_t integer() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a non-negative integer");
    if (i_ - start > 9) fail("integer too large");
    return std::stoll(s_.substr(start, i_ - start));
  }
  std::vector<std::int64_t> int_list() {
    std::vector<std::int64_t> out{integer()};
    while (accept(',')) out.push_back(integer());
    return out;
  }

  GraphExpr expr() {
    GraphExpr e;
    const std::size_t at = i_;
    e.op = ident();
    expect('(');
    auto positive = [&](std::int64_t v, const char* what) {
      if (v <= 0) {
        i_ = at;
        fail(std::string(what) + " must be positive");
      }
    };
    if (e.op == "K" || e.op == "O" || e.op == "P" || e.op == "C" || e.op == "CP" || e.op == "S" || e.op == "Ptwin") {
      e.ints.push_back(integer());
      positive(e.ints[0], "size");
      if (e.op == "C" && e.ints[0] < 3) {
        i_ = at;
        fail("C(n) needs n >= 3");
      }
      if (e.op == "CP" && e.ints[0] % 2 != 0) {
        i_ = at;
        fail("CP(n) takes an even vertex count");
      }
      if (e.op == "Ptwin" && e.ints[0] < 2) {
        i_ = at;
        fail("Ptwin(n) needs n >= 2");
      }
    } else if (e.op == "KM") {
      e.ints = int_list();
      for (auto v : e.ints) positive(v, "part size");
    } else if (e.op == "Gamma") {
      e.ints = int_list();
      for (auto v : e.ints) positive(v, "cell size");
      e.starts_empty = e.ints.size() % 2 == 0;
      if (accept(';')) {
        if (ident() != "start") fail("expected start=O or start=K");
        expect('=');
        std::string which = ident();
        if (which == "O") {
          e.starts_empty = true;
        } else if (which == "K") {
          e.starts_empty = false;
        } else {
          fail("start must be O or K");
        }
      }
    } else if (e.op == "join" || e.op == "union" || e.op == "dprod" || e.op == "cprod") {
      e.children.push_back(expr());
      expect(',');
      e.children.push_back(expr());
    } else if (e.op == "blowup") {
      e.ints.push_back(integer());
      positive(e.ints[0], "copy count");
      expect(',');
      e.children.push_back(expr());
    } else {
      i_ = at;
      fail("unknown graph name '" + e.op + "'");
    }
    expect(')');
    return e;
  }

  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses K(n), O(n), P(n), C(n), S(n), CP(n), Ptwin(n), KM(n1,...,nk),
/// Gamma(m1,...,mh;start=O|K), join(a,b), union(a,b), dprod(a,b), cprod(a,b)
/// and blowup(m,a). CP takes the vertex count (CP(6) is K_{2,2,2}).
inline GraphExpr parse_graph_expr(const std::string& text) { return detail::DslParser(text).parse(); }

inline WeightedGraph parse_graph(const std::string& text) { return parse_graph_expr(text).build(); }

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

/// Text format: an optional "n <count>" header, then one "u v [w]" line per
/// edge; '#' starts a comment. Weights are rational ("3", "1/2", "0.25") or
/// any floating-point literal; the default weight is 1.
inline WeightedGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  bool have_n = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto where = " on line " + std::to_string(lineno);
    auto index = [&](const std::string& t) {
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 9) {
        throw ParseError("edge list: bad vertex '" + t + "'" + where, lineno);
      }
      return static_cast<std::size_t>(std::stoul(t));
    };
    if (tok[0] == "n") {
      if (tok.size() != 2 || have_n || !edges.empty()) throw ParseError("edge list: misplaced 'n' header" + where, lineno);
      n = index(tok[1]);
      have_n = true;
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3) throw ParseError("edge list: expected 'u v [w]'" + where, lineno);
    Edge e{index(tok[0]), index(tok[1]), Weight(1)};
    if (tok.size() == 3) {
      if (auto r = Rational::parse(tok[2])) {
        e.w = Weight(*r);
      } else {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(tok[2], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok[2].size()) throw ParseError("edge list: bad weight '" + tok[2] + "'" + where, lineno);
        e.w = Weight::real(v);
      }
    }
    if (!have_n) n = std::max({n, e.u + 1, e.v + 1});
    edges.push_back(e);
  }
  try {
    return WeightedGraph(n, edges);
  } catch (const std::exception& ex) {
    throw ParseError(std::string("edge list: ") + ex.what(), lineno);
  }
}

inline WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path + "'", 0);
  return read_edge_list(in);
}

/// Writes the "n <count>" header and the edges in canonical (u, v) order.
inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "n " << g.order() << "\n";
  for (const auto& [key, w] : g.edge_map()) out << key.first << " " << key.second << " " << w.to_string() << "\n";
}

}  // namespace sedwalk
