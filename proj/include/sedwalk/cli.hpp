#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sedwalk/dsl.hpp"
#include "sedwalk/families.hpp"
#include "sedwalk/report.hpp"
#include "sedwalk/sedentary.hpp"
#include "sedwalk/walk.hpp"

namespace sedwalk::cli {

enum ExitStatus : int { kOk = 0, kFailure = 1, kUsage = 2, kOpenQuestion = 3 };

/// Upper bound on worker threads: SEDWALK_THREADS when set, else the hardware concurrency.
inline std::size_t thread_limit() {
  if (const char* env = std::getenv("SEDWALK_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// results[i] = fn(i), computed on up to thread_limit() threads; the order of results is fixed.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  const std::size_t workers = std::min(thread_limit(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i] = fn(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) slots[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Options {
  std::string graph;
  std::string file;
  std::string matrix = "A";
  std::vector<std::size_t> vertices;
  bool all_vertices = false;
  double tmax = 2.0 * std::numbers::pi;
  std::size_t steps = 1000;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;
  // families
  std::string family = "multipartite";
  std::size_t nmin = 2;
  std::size_t nmax = 8;
  std::size_t cells = 4;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string opt_str(std::optional<double> x) { return x ? report::fmt12(*x) : std::string(); }

inline std::string time_str(std::optional<double> t) {
  if (!t) return "";
  auto p = report::pi_multiple(*t);
  return report::fmt12(*t) + (p ? " (" + *p + ")" : std::string());
}

struct Loaded {
  GraphExpr expr;
  bool from_dsl = false;
  WeightedGraph graph;
  MatrixKind kind = MatrixKind::adjacency();
};

inline Loaded load(const Options& o) {
  if (o.graph.empty() == o.file.empty()) throw UsageError("exactly one of --graph or --file is required");
  Loaded l;
  try {
    l.kind = MatrixKind::parse(o.matrix);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  try {
    if (!o.graph.empty()) {
      l.expr = parse_graph_expr(o.graph);
      l.from_dsl = true;
      l.graph = l.expr.build();
    } else {
      l.graph = read_edge_list_file(o.file);
    }
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("graph: ") + e.what());
  }
  return l;
}

inline std::vector<std::size_t> selected(const Options& o, const WeightedGraph& g, bool default_all) {
  std::vector<std::size_t> v;
  if (o.all_vertices || (o.vertices.empty() && default_all)) {
    for (std::size_t u = 0; u < g.order(); ++u) v.push_back(u);
    return v;
  }
  if (o.vertices.empty()) throw UsageError("select vertices with --vertex or --all-vertices");
  for (auto u : o.vertices)
    if (u >= g.order()) throw UsageError("vertex " + std::to_string(u) + " out of range (graph has " + std::to_string(g.order()) + " vertices)");
  return o.vertices;
}

inline ClassifyOptions classify_options(const Options& o) {
  ClassifyOptions c;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw UsageError("--tol must be positive");
    c.spectral.recognition_tol = *o.tol;
  }
  return c;
}

inline void classification_table(std::ostream& os, const std::vector<VertexClassification>& cs, bool csv) {
  if (csv) {
    os << "vertex,verdict,constant,certified_bound,tight,sharp,time,partner\n";
    for (const auto& c : cs) {
      os << c.vertex << "," << to_string(c.verdict) << "," << opt_str(c.constant) << "," << opt_str(c.certified_bound)
         << "," << (c.tight ? "true" : "false") << "," << (c.sharp ? "true" : "false") << ","
         << (c.time ? report::fmt12(*c.time) : "") << "," << (c.partner ? std::to_string(*c.partner) : "") << "\n";
    }
    return;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-7s %-13s %-15s %-15s %-6s %-6s %-28s %s\n", "vertex", "verdict", "constant",
                "bound", "tight", "sharp", "time", "partner");
  os << buf;
  for (const auto& c : cs) {
    std::snprintf(buf, sizeof buf, "%-7zu %-13s %-15s %-15s %-6s %-6s %-28s %s\n", c.vertex, to_string(c.verdict),
                  opt_str(c.constant).c_str(), opt_str(c.certified_bound).c_str(), c.tight ? "yes" : "no",
                  c.sharp ? "yes" : "no", time_str(c.time).c_str(),
                  c.partner ? std::to_string(*c.partner).c_str() : "");
    os << buf;
  }
}

struct FamilyRow {
  std::string family;
  std::string params;
  std::string vertex_class;
  FamilyVerdict verdict;
};

inline std::string list_str(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

/// Non-increasing partitions of n.
inline void partitions(std::size_t n, std::size_t max_part, std::vector<std::size_t>& cur,
                       std::vector<std::vector<std::size_t>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

inline void compositions(std::size_t left, std::size_t max_len, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (!cur.empty()) out.push_back(cur);
  if (cur.size() == max_len) return;
  for (std::size_t m = 1; m <= left; ++m) {
    cur.push_back(m);
    compositions(left - m, max_len, cur, out);
    cur.pop_back();
  }
}

inline std::vector<FamilyRow> family_rows(const Options& o) {
  if (o.nmin > o.nmax) throw UsageError("--nmin exceeds --nmax");
  MatrixKind kind = MatrixKind::laplacian();
  try {
    kind = MatrixKind::parse(o.matrix);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  using Job = std::function<FamilyRow()>;
  std::vector<Job> jobs;
  auto multipartite_jobs = [&](const std::string& fam, const std::vector<std::size_t>& parts) {
    std::vector<std::size_t> seen;
    for (std::size_t l = 0; l < parts.size(); ++l) {
      if (std::find(seen.begin(), seen.end(), parts[l]) != seen.end()) continue;
      seen.push_back(parts[l]);
      jobs.push_back([=] {
        MultipartiteSpec spec{parts, kind};
        FamilyVerdict v = kind.type() == MatrixKind::Type::Laplacian ? multipartite_laplacian_verdict(spec, l)
                                                                      : multipartite_adjacency_verdict(spec, l);
        return FamilyRow{fam, "KM(" + list_str(parts) + ")", "part size " + std::to_string(parts[l]), v};
      });
    }
  };
  if (kind.type() == MatrixKind::Type::Generalized && o.family != "complete-product") {
    throw UsageError("families: --matrix must be A or L");
  }
  if (o.family == "multipartite") {
    for (std::size_t n = std::max<std::size_t>(o.nmin, 1); n <= o.nmax; ++n) {
      std::vector<std::vector<std::size_t>> ps;
      std::vector<std::size_t> cur;
      partitions(n, n, cur, ps);
      for (const auto& p : ps) multipartite_jobs("multipartite", p);
    }
  } else if (o.family == "cocktail") {
    for (std::size_t k = std::max<std::size_t>(o.nmin, 1); k <= o.nmax; ++k)
      multipartite_jobs("cocktail", std::vector<std::size_t>(k, 2));
  } else if (o.family == "kne") {
    for (std::size_t n = std::max<std::size_t>(o.nmin, 3); n <= o.nmax; ++n) {
      std::vector<std::size_t> parts{2};
      parts.insert(parts.end(), n - 2, 1);
      multipartite_jobs("kne", parts);
    }
  } else if (o.family == "threshold") {
    if (kind.type() != MatrixKind::Type::Laplacian) throw UsageError("families threshold: only --matrix L is supported");
    std::vector<std::vector<std::size_t>> cs;
    std::vector<std::size_t> cur;
    compositions(o.nmax, o.cells, cur, cs);
    for (const auto& parts : cs) {
      std::size_t total = 0;
      for (auto p : parts) total += p;
      if (total < o.nmin) continue;
      ThresholdSpec spec{parts, parts.size() % 2 == 0};
      for (std::size_t j = 1; j <= parts.size(); ++j) {
        jobs.push_back([=] {
          auto cells = threshold_pst_or_sedentary(spec);
          const auto& cv = cells[j - 1];
          auto b = threshold_cell_bound(spec, j);
          FamilyVerdict v;
          v.case_label = b.case_label;
          v.closed_form_constant = b.closed_form_constant;
          v.classification.vertex = spec.first_vertex(j);
          v.classification.kind = MatrixKind::laplacian();
          v.classification.verdict = cv.verdict;
          v.classification.constant = cv.constant;
          v.classification.certified_bound = cv.certified_bound;
          v.classification.time = cv.time;
          v.classification.partner = cv.partner;
          v.classification.tight = cv.verdict == Verdict::Sedentary;
          std::string name = std::string("Gamma(") + list_str(parts) + ";start=" + (spec.starts_empty ? "O" : "K") + ")";
          return FamilyRow{"threshold", name, "cell " + std::to_string(j), v};
        });
      }
    }
  } else if (o.family == "complete-product") {
    for (std::size_t m = std::max<std::size_t>(o.nmin, 2); m <= o.nmax; ++m) {
      for (std::size_t n = m; n <= o.nmax; ++n) {
        jobs.push_back([=] {
          return FamilyRow{"complete-product", "dprod(K(" + std::to_string(m) + "),K(" + std::to_string(n) + "))",
                           "any vertex", complete_product_verdict({m, n})};
        });
      }
    }
  } else {
    throw UsageError("unknown family '" + o.family + "' (multipartite, cocktail, kne, threshold, complete-product)");
  }
  return parallel_map<FamilyRow>(jobs.size(), [&](std::size_t i) { return jobs[i](); });
}

inline void write_family_rows(std::ostream& os, const std::vector<FamilyRow>& rows, const std::string& format) {
  if (format == "json") {
    report::Json arr = report::Json::array();
    for (const auto& r : rows) {
      report::Json j;
      j["family"] = r.family;
      j["params"] = r.params;
      j["vertex_class"] = r.vertex_class;
      j["result"] = report::to_json(r.verdict);
      arr.push_back(j);
    }
    os << arr.dump(2) << "\n";
    return;
  }
  const bool csv = format == "csv";
  if (csv) {
    os << "family,params,vertex_class,verdict,constant,time\n";
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-17s %-28s %-15s %-13s %-15s %s\n", "family", "params", "vertex class", "verdict",
                  "constant", "time");
    os << buf;
  }
  for (const auto& r : rows) {
    const auto& c = r.verdict.classification;
    if (csv) {
      os << r.family << ",\"" << r.params << "\"," << r.vertex_class << "," << to_string(c.verdict) << ","
         << opt_str(c.constant) << "," << (c.time ? report::fmt12(*c.time) : "") << "\n";
    } else {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-17s %-28s %-15s %-13s %-15s %s\n", r.family.c_str(), r.params.c_str(),
                    r.vertex_class.c_str(), to_string(c.verdict), opt_str(c.constant).c_str(),
                    time_str(c.time).c_str());
      os << buf;
    }
  }
}

}  // namespace detail

/// Runs one command line. Output goes to `out` (or the --out file), diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sedentary vertices and state transfer for continuous-time quantum walks", "sedwalk"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&](CLI::App* s) {
    s->add_option("--graph", o.graph, "graph DSL string, e.g. \"KM(2,2,2)\" or \"join(O(2),K(6))\"");
    s->add_option("--file", o.file, "edge-list file ('n <count>' header, then 'u v [w]' lines)");
    s->add_option("--matrix", o.matrix, "A, L or Mq:<q>")->capture_default_str();
    s->add_option("--tol", o.tol, "recognition tolerance for exact eigenvalue arithmetic");
    s->add_option("--out", o.out, "write output to this file instead of stdout");
  };
  auto add_vertices = [&](CLI::App* s) {
    s->add_option("--vertex", o.vertices, "vertex index (repeatable)");
    s->add_flag("--all-vertices", o.all_vertices, "select every vertex");
  };
  auto add_format = [&](CLI::App* s, std::vector<std::string> allowed) {
    s->add_option("--format", o.format, "output format")->check(CLI::IsMember(allowed))->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "graph summary, twin sets and classification of every selected vertex");
  add_graph(analyze);
  add_vertices(analyze);
  add_format(analyze, {"json", "table"});
  auto* classify = app.add_subcommand("classify", "classification record per selected vertex");
  add_graph(classify);
  add_vertices(classify);
  add_format(classify, {"json", "table", "csv"});
  auto* series = app.add_subcommand("series", "CSV time series t,|U(t)_{u,u}|");
  add_graph(series);
  series->add_option("--vertex", o.vertices, "vertex index")->expected(1);
  series->add_option("--tmax", o.tmax, "end time")->capture_default_str();
  series->add_option("--steps", o.steps, "number of samples, endpoints included")->capture_default_str();
  auto* families = app.add_subcommand("families", "closed-form verdicts over a parameter range");
  families->add_option("--family", o.family, "multipartite, cocktail, kne, threshold or complete-product")->capture_default_str();
  families->add_option("--matrix", o.matrix, "A or L")->capture_default_str();
  families->add_option("--nmin", o.nmin, "smallest parameter")->capture_default_str();
  families->add_option("--nmax", o.nmax, "largest parameter")->capture_default_str();
  families->add_option("--cells", o.cells, "largest number of threshold cells")->capture_default_str();
  families->add_option("--out", o.out, "write output to this file instead of stdout");
  add_format(families, {"json", "table", "csv"});
  auto* twins = app.add_subcommand("twins", "twin sets with their eigenvalue theta");
  add_graph(twins);
  add_format(twins, {"json", "table"});
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenvalue supports");
  add_graph(spectrum);
  add_vertices(spectrum);
  add_format(spectrum, {"json", "table"});

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::ofstream file_out;
  std::ostream* os = &out;
  if (!o.out.empty()) {
    file_out.open(o.out);
    if (!file_out) {
      err << "error: cannot write " << o.out << "\n";
      return kFailure;
    }
    os = &file_out;
  }

  try {
    if (families->parsed()) {
      detail::write_family_rows(*os, detail::family_rows(o), o.format);
      return kOk;
    }
    auto l = detail::load(o);
    if (l.kind.type() == MatrixKind::Type::Laplacian && l.from_dsl && l.expr.has_irregular_direct_product()) {
      err << "error: Laplacian walk requested on a direct product with an irregular factor; the transition matrix "
             "of L(X x Y) has no product form unless both factors are regular (open question), so no verdict is "
             "issued\n";
      return kOpenQuestion;
    }
    const auto copts = detail::classify_options(o);
    const auto dec = decompose(l.graph, l.kind, copts.spectral);

    if (series->parsed()) {
      if (o.vertices.size() != 1) throw UsageError("series needs exactly one --vertex");
      auto u = detail::selected(o, l.graph, false).front();
      if (!(o.tmax > 0.0) || o.steps < 2) throw UsageError("series needs --tmax > 0 and --steps >= 2");
      WalkEvaluator ev(dec);
      *os << "t,magnitude\n";
      for (const auto& p : diagonal_series(ev, u, o.tmax, o.steps)) {
        *os << report::fmt12(p.t) << "," << report::fmt12(p.magnitude) << "\n";
      }
      return kOk;
    }
    if (twins->parsed()) {
      auto j = report::twin_sets_json(l.graph, dec);
      if (o.format == "json") {
        *os << j.dump(2) << "\n";
      } else {
        *os << "members                        omega   eta     theta\n";
        for (const auto& t : j["twin_sets"]) {
          std::string members;
          for (const auto& m : t["members"]) members += (members.empty() ? "" : ",") + std::to_string(m.get<std::size_t>());
          char buf[256];
          std::snprintf(buf, sizeof buf, "%-30s %-7s %-7s %s\n", members.c_str(),
                        report::fmt12(t["omega"].get<double>()).c_str(), report::fmt12(t["eta"].get<double>()).c_str(),
                        report::fmt12(t["theta"].get<double>()).c_str());
          *os << buf;
        }
      }
      return kOk;
    }
    if (spectrum->parsed()) {
      auto vs = detail::selected(o, l.graph, true);
      auto j = report::spectrum_json(dec, vs);
      if (o.format == "json") {
        *os << j.dump(2) << "\n";
      } else {
        *os << "eigenvalues:";
        for (const auto& e : j["eigenvalues"])
          *os << " " << report::fmt12(e["eigenvalue"].get<double>()) << "^" << e["multiplicity"].get<std::size_t>();
        *os << "\n";
        for (const auto& s : j["supports"]) {
          *os << "vertex " << s["vertex"].get<std::size_t>() << ":";
          for (const auto& e : s["support"])
            *os << " " << report::fmt12(e["eigenvalue"].get<double>()) << " [" << report::fmt12(e["weight"].get<double>()) << "]";
          *os << "\n";
        }
      }
      return kOk;
    }

    auto vs = detail::selected(o, l.graph, analyze->parsed());
    auto cs = parallel_map<VertexClassification>(vs.size(), [&](std::size_t i) { return classify_vertex(l.graph, dec, vs[i], copts); });
    if (classify->parsed()) {
      if (o.format == "json") {
        if (cs.size() == 1 && !o.all_vertices) {
          *os << report::to_json(cs.front()).dump(2) << "\n";
        } else {
          report::Json arr = report::Json::array();
          for (const auto& c : cs) arr.push_back(report::to_json(c));
          *os << arr.dump(2) << "\n";
        }
      } else {
        detail::classification_table(*os, cs, o.format == "csv");
      }
      return kOk;
    }
    // analyze
    if (o.format == "json") {
      report::Json j;
      j["schema"] = report::kSchemaVersion;
      j["graph"] = l.from_dsl ? l.expr.to_string() : o.file;
      j["order"] = l.graph.order();
      j["edges"] = l.graph.size();
      auto reg = is_weighted_regular(l.graph);
      j["regular_degree"] = reg ? report::Json(report::round12(*reg)) : report::Json(nullptr);
      j["matrix_kind"] = l.kind.to_string();
      j["twin_sets"] = report::twin_sets_json(l.graph, dec)["twin_sets"];
      report::Json arr = report::Json::array();
      for (const auto& c : cs) arr.push_back(report::to_json(c));
      j["vertices"] = arr;
      *os << j.dump(2) << "\n";
    } else {
      *os << "graph: " << (l.from_dsl ? l.expr.to_string() : o.file) << "  order " << l.graph.order() << "  edges "
          << l.graph.size() << "  matrix " << l.kind.to_string() << "\n";
      detail::classification_table(*os, cs, false);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace sedwalk::cli
