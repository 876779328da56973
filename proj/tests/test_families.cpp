#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "support.hpp"

using namespace sedwalk;
constexpr double kPi = std::numbers::pi;

namespace {

/// All partitions of n into parts of size >= 1, in non-increasing order.
void partitions(std::size_t n, std::size_t max_part, std::vector<std::size_t>& cur,
                const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (n == 0) {
    fn(cur);
    return;
  }
  for (std::size_t p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, fn);
    cur.pop_back();
  }
}

void compositions(std::size_t n, std::size_t max_cells, std::vector<std::size_t>& cur,
                  const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (n == 0) {
    if (!cur.empty()) fn(cur);
    return;
  }
  if (cur.size() == max_cells) return;
  for (std::size_t p = 1; p <= n; ++p) {
    cur.push_back(p);
    compositions(n - p, max_cells, cur, fn);
    cur.pop_back();
  }
}

double sampled_min(const PhaseSum& f, double horizon, int samples = 40000) {
  double lo = 1.0;
  for (int i = 0; i <= samples; ++i) lo = std::min(lo, f.magnitude(horizon * i / samples));
  return lo;
}

bool sedentary(Verdict v) { return v == Verdict::Sedentary; }

}  // namespace

TEST(MultipartiteLaplacian, SingletonPart) {
  auto r = multipartite_laplacian_verdict({{1, 2, 2}}, 0);
  EXPECT_EQ(r.classification.verdict, Verdict::Sedentary);
  EXPECT_NEAR(r.classification.constant.value(), 0.6, 1e-12);
  EXPECT_NEAR(r.classification.time.value(), kPi / 5, 1e-12);
  EXPECT_TRUE(r.classification.tight);
}

TEST(MultipartiteLaplacian, PairPartsWithOrderDivisibleByFour) {
  auto r = multipartite_laplacian_verdict({{2, 2, 2, 2}}, 0);
  EXPECT_EQ(r.classification.verdict, Verdict::PST);
  EXPECT_EQ(r.classification.partner.value(), 1u);
  EXPECT_NEAR(r.classification.time.value(), kPi / 2, 1e-12);
  WalkEvaluator ev(decompose(cocktail_party(4), MatrixKind::laplacian()));
  EXPECT_NEAR(ev.magnitude(0, 1, kPi / 2), 1.0, 1e-9);
}

TEST(MultipartiteLaplacian, LargePartsAboveTheirBound) {
  auto three = multipartite_laplacian_verdict({{3, 4}}, 0);
  EXPECT_EQ(three.classification.verdict, Verdict::Sedentary);
  EXPECT_NEAR(three.classification.certified_bound.value(), 1.0 / 3, 1e-12);
  EXPECT_GT(three.classification.constant.value(), 1.0 / 3 + 1e-4);
  auto four = multipartite_laplacian_verdict({{3, 4}}, 1);
  EXPECT_EQ(four.classification.verdict, Verdict::Sedentary);
  EXPECT_GT(four.classification.constant.value(), 0.5 + 1e-4);
}

TEST(MultipartiteLaplacian, AgreesWithGenericClassifier) {
  for (std::size_t n = 2; n <= 10; ++n) {
    std::vector<std::size_t> cur;
    partitions(n, n, cur, [&](const std::vector<std::size_t>& parts) {
      if (parts.size() < 2) return;
      MultipartiteSpec spec{parts};
      auto g = spec.graph();
      auto dec = decompose(g, MatrixKind::laplacian());
      WalkEvaluator ev(dec);
      for (std::size_t l = 0; l < parts.size(); ++l) {
        if (l > 0 && parts[l] == parts[l - 1]) continue;
        auto fam = multipartite_laplacian_verdict(spec, l);
        auto gen = classify_vertex(g, dec, spec.first_vertex(l));
        const auto& c = fam.classification;
        EXPECT_EQ(c.verdict, gen.verdict) << testing::PrintToString(parts) << " part " << l;
        if (c.verdict == Verdict::Sedentary && gen.constant) {
          EXPECT_NEAR(c.constant.value(), *gen.constant, 1e-6) << testing::PrintToString(parts);
        }
        if (c.tight && c.time) {
          EXPECT_NEAR(ev.magnitude(c.vertex, c.vertex, *c.time), *c.constant, 1e-8) << testing::PrintToString(parts);
        }
      }
    });
  }
}

TEST(MultipartiteAdjacency, CompleteMinusEdge) {
  for (std::size_t n = 4; n <= 10; ++n) {
    std::vector<std::size_t> parts(n - 1, 1);
    parts[0] = 2;
    MultipartiteSpec spec{parts, MatrixKind::adjacency()};
    auto pair = multipartite_adjacency_verdict(spec, 0);
    EXPECT_EQ(pair.classification.verdict, Verdict::PGST) << n;
    EXPECT_EQ(pair.classification.partner.value(), 1u);
    if (n >= 5) {
      auto apex = multipartite_adjacency_verdict(spec, 1);
      EXPECT_EQ(apex.classification.verdict, Verdict::Sedentary) << n;
      EXPECT_NEAR(apex.classification.certified_bound.value(), 1.0 - 2.0 / static_cast<double>(n - 2), 1e-12);
      EXPECT_TRUE(apex.classification.sharp) << n;
    }
  }
}

TEST(MultipartiteAdjacency, CocktailPartyDichotomy) {
  for (std::size_t k = 2; k <= 8; ++k) {
    MultipartiteSpec spec{std::vector<std::size_t>(k, 2), MatrixKind::adjacency()};
    auto r = multipartite_adjacency_verdict(spec, 0).classification;
    if (k % 2 == 0) {
      EXPECT_EQ(r.verdict, Verdict::PST) << k;
      EXPECT_NEAR(r.time.value(), kPi / 2, 1e-12);
    } else {
      EXPECT_EQ(r.verdict, Verdict::Sedentary) << k;
      EXPECT_NEAR(r.constant.value(), 1.0 / static_cast<double>(k), 1e-9);
      EXPECT_NEAR(r.time.value(), kPi / 2, 1e-9);
    }
  }
}

TEST(MultipartiteAdjacency, StarCentre) {
  for (std::size_t n = 2; n <= 9; ++n) {
    auto r = multipartite_adjacency_verdict({{1, n}, MatrixKind::adjacency()}, 0).classification;
    EXPECT_EQ(r.verdict, Verdict::NotSedentary) << n;
  }
}

TEST(MultipartiteAdjacency, AgreesWithGenericClassifier) {
  for (std::size_t n = 3; n <= 9; ++n) {
    std::vector<std::size_t> cur;
    partitions(n, n, cur, [&](const std::vector<std::size_t>& parts) {
      if (parts.size() < 2) return;
      MultipartiteSpec spec{parts, MatrixKind::adjacency()};
      auto g = spec.graph();
      auto dec = decompose(g, MatrixKind::adjacency());
      WalkEvaluator ev(dec);
      for (std::size_t l = 0; l < parts.size(); ++l) {
        if (l > 0 && parts[l] == parts[l - 1]) continue;
        const auto c = multipartite_adjacency_verdict(spec, l).classification;
        const auto gen = classify_vertex(g, dec, spec.first_vertex(l));
        if (gen.verdict != Verdict::Undetermined && c.verdict != Verdict::Undetermined) {
          EXPECT_EQ(c.verdict, gen.verdict) << testing::PrintToString(parts) << " part " << l;
        }
        if (c.certified_bound) {
          double lo = 1.0;
          for (int i = 0; i <= 20000; ++i) lo = std::min(lo, ev.magnitude(c.vertex, c.vertex, 80.0 * i / 20000));
          EXPECT_GE(lo, *c.certified_bound - 1e-9) << testing::PrintToString(parts);
        }
      }
    });
  }
}

TEST(Threshold, SupportOfTwoSingletons) {
  auto s = threshold_support({{1, 1}, true}, 1);
  EXPECT_EQ(s.values, (std::vector<std::int64_t>{2, 0}));
  EXPECT_EQ(s.weights, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(Threshold, SupportsMatchNumericDecomposition) {
  for (std::size_t total = 1; total <= 10; ++total) {
    std::vector<std::size_t> cur;
    compositions(total, 5, cur, [&](const std::vector<std::size_t>& parts) {
      ThresholdSpec spec{parts, parts.size() % 2 == 0};
      if (parts.size() == 1) spec.starts_empty = false;
      auto dec = decompose(spec.graph(), MatrixKind::laplacian());
      for (std::size_t j = 1; j <= spec.h(); ++j) {
        auto exact = threshold_support(spec, j);
        auto numeric = support(dec, spec.first_vertex(j));
        ASSERT_EQ(exact.values.size(), numeric.size()) << testing::PrintToString(parts) << " cell " << j;
        for (std::size_t k = 0; k < numeric.size(); ++k) {
          EXPECT_NEAR(static_cast<double>(exact.values[k]), numeric.values[k], 1e-8);
          EXPECT_NEAR(exact.weights[k].to_double(), numeric.weights[k], 1e-8);
        }
      }
    });
  }
}

TEST(Threshold, PstCongruence) {
  ThresholdSpec spec{{2, 2, 4, 4}, true};
  EXPECT_TRUE(threshold_pst_congruence(spec));
  auto v = threshold_pst_or_sedentary(spec);
  EXPECT_EQ(v[0].verdict, Verdict::PST);
  EXPECT_EQ(v[0].partner.value(), 1u);
  WalkEvaluator ev(decompose(spec.graph(), MatrixKind::laplacian()));
  EXPECT_NEAR(ev.magnitude(0, 1, kPi / 2), 1.0, 1e-9);
  for (std::size_t j = 2; j <= 4; ++j) EXPECT_EQ(v[j - 1].verdict, Verdict::Sedentary);
}

TEST(Threshold, NonCongruentFirstCellIsSedentary) {
  for (auto parts : {std::vector<std::size_t>{2, 3}, std::vector<std::size_t>{3, 2}}) {
    ThresholdSpec spec{parts, true};
    EXPECT_FALSE(threshold_pst_congruence(spec));
    auto v = threshold_pst_or_sedentary(spec);
    EXPECT_EQ(v[0].verdict, Verdict::Sedentary) << testing::PrintToString(parts);
    EXPECT_GT(v[0].constant.value(), 0.0);
  }
}

TEST(Threshold, DegenerateEdge) {
  auto v = threshold_pst_or_sedentary({{1, 1}, true});
  EXPECT_EQ(v[0].verdict, Verdict::PST);
  EXPECT_EQ(v[0].partner.value(), 1u);
  EXPECT_EQ(v[1].verdict, Verdict::PST);
  EXPECT_EQ(v[1].partner.value(), 0u);
}

TEST(Threshold, CellBoundsHoldOnThePeriod) {
  for (std::size_t total = 2; total <= 10; ++total) {
    std::vector<std::size_t> cur;
    compositions(total, 4, cur, [&](const std::vector<std::size_t>& parts) {
      if (parts.size() < 2) return;
      ThresholdSpec spec{parts, parts.size() % 2 == 0};
      for (std::size_t j = 1; j <= spec.h(); ++j) {
        auto b = threshold_cell_bound(spec, j);
        auto s = threshold_support(spec, j).as_support(spec.first_vertex(j));
        const double lo = sampled_min(PhaseSum{s.weights, s.values}, 2 * kPi, 20000);
        EXPECT_GE(lo, b.bound.lower_bound - 1e-9) << testing::PrintToString(parts) << " cell " << j;
      }
    });
  }
}

TEST(CompleteProduct, TwoTriangles) {
  auto r = complete_product_verdict({3, 3});
  EXPECT_EQ(r.classification.verdict, Verdict::Sedentary);
  EXPECT_NEAR(r.classification.constant.value(), 1.0 / 9, 1e-9);
  EXPECT_NEAR(r.classification.time.value(), kPi, 1e-9);
}

TEST(CompleteProduct, TriangleTimesFour) {
  auto r = complete_product_verdict({3, 4});
  EXPECT_EQ(r.classification.verdict, Verdict::Sedentary);
  EXPECT_NEAR(r.classification.constant.value(), 0.142, 5e-4);
  EXPECT_NEAR(r.classification.time.value(), 0.945, 1e-3);
}

TEST(CompleteProduct, FactorTwoGivesZero) {
  for (std::size_t n = 3; n <= 8; ++n) {
    auto r = complete_product_verdict({2, n});
    EXPECT_EQ(r.classification.verdict, Verdict::NotSedentary) << n;
    EXPECT_LT(complete_product_phase_sum({2, n}).magnitude(r.classification.time.value()), 1e-9);
  }
}

TEST(CompleteProduct, TwoFives) {
  auto r = complete_product_verdict({5, 5});
  EXPECT_NEAR(r.classification.constant.value(), 7.0 / 25, 1e-9);
  EXPECT_NEAR(r.classification.time.value(), kPi, 1e-9);
  EXPECT_NEAR(r.classification.certified_bound.value(), 7.0 / 25, 1e-12);
}

TEST(CompleteProduct, AgreesWithGenericClassifier) {
  const std::vector<std::vector<std::size_t>> lists = {{2, 3}, {3, 3}, {2, 4}, {3, 4}, {4, 4}, {2, 5}, {3, 5},
                                                       {2, 6}, {2, 7}, {2, 8}, {2, 2, 3}, {2, 2, 4}};
  for (const auto& m : lists) {
    auto fam = complete_product_verdict(m).classification;
    auto g = complete_product_graph(m);
    auto gen = classify_vertex(g, MatrixKind::adjacency(), 0);
    EXPECT_EQ(sedentary(fam.verdict), sedentary(gen.verdict)) << testing::PrintToString(m);
    if (sedentary(fam.verdict) && gen.constant) EXPECT_NEAR(*fam.constant, *gen.constant, 1e-6) << testing::PrintToString(m);
  }
}

TEST(CompleteProduct, OddFactorsAttainMinimumAtPi) {
  for (const auto& m : std::vector<std::vector<std::size_t>>{{3, 3}, {3, 5}, {5, 5}, {3, 7}, {5, 7}}) {
    auto f = complete_product_phase_sum(m);
    EXPECT_NEAR(f.magnitude(kPi), sampled_min(f, 2 * kPi, 200000), 1e-6) << testing::PrintToString(m);
  }
}

TEST(CompleteProduct, PhaseSumMatchesDirectProduct) {
  for (const auto& m : std::vector<std::vector<std::size_t>>{{3, 4}, {2, 2, 3}, {4, 5}}) {
    auto f = complete_product_phase_sum(m);
    WalkEvaluator ev(decompose(complete_product_graph(m), MatrixKind::adjacency()));
    for (double t : {0.3, 1.1, 2.9, 7.4}) EXPECT_NEAR(f.magnitude(t), ev.magnitude(0, 0, t), 1e-9);
  }
}

TEST(Threshold, LeadingSingletonCellMergesIntoNext) {
  auto nf = threshold_normal_form({{1, 1, 2}, false});
  EXPECT_EQ(nf.parts, (std::vector<std::size_t>{2, 2}));
  EXPECT_TRUE(nf.starts_empty);
  EXPECT_TRUE(testkit::isomorphic(threshold({1, 1, 2}, false), threshold({2, 2}, true)));
  ThresholdSpec spec{{1, 1, 6}, false};
  EXPECT_TRUE(threshold_pst_congruence(spec));
  auto v = threshold_pst_or_sedentary(spec);
  EXPECT_EQ(v[0].verdict, Verdict::PST);
  EXPECT_EQ(v[0].partner.value(), 1u);
  EXPECT_EQ(v[1].verdict, Verdict::PST);
  EXPECT_EQ(v[1].partner.value(), 0u);
  WalkEvaluator ev(decompose(spec.graph(), MatrixKind::laplacian()));
  EXPECT_NEAR(ev.magnitude(0, 1, kPi / 2), 1.0, 1e-9);
}
