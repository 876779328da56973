#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace sedwalk;

namespace {

void expect_values(const std::vector<double>& got, std::vector<double> want, double tol = 1e-9) {
  std::sort(want.begin(), want.end(), std::greater<>());
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], tol);
}

}  // namespace

TEST(Decompose, K2) {
  auto dec = decompose(complete(2), MatrixKind::adjacency());
  expect_values(dec.eigenvalues(), {1, -1});
  Matrix half = Matrix::Constant(2, 2, 0.5);
  EXPECT_TRUE(dec.projectors()[0].isApprox(half, 1e-12));
  EXPECT_TRUE(dec.projectors()[1].isApprox(Matrix::Identity(2, 2) - half, 1e-12));
}

TEST(Decompose, CompleteGraphProjectors) {
  for (std::size_t n = 2; n <= 9; ++n) {
    auto dec = decompose(complete(n), MatrixKind::adjacency());
    expect_values(dec.eigenvalues(), {static_cast<double>(n) - 1.0, -1.0});
    const auto N = static_cast<Eigen::Index>(n);
    Matrix j = Matrix::Constant(N, N, 1.0 / static_cast<double>(n));
    EXPECT_TRUE(dec.projectors()[0].isApprox(j, 1e-10));
    EXPECT_TRUE(dec.projectors()[1].isApprox(Matrix::Identity(N, N) - j, 1e-10));
    EXPECT_EQ(dec.multiplicities()[1], n - 1);
  }
}

TEST(Decompose, CocktailPartyOnSix) {
  auto dec = decompose(cocktail_party(3), MatrixKind::adjacency());
  expect_values(dec.eigenvalues(), {4, 0, -2});
}

TEST(Support, CompleteGraphVertex) {
  auto s = support(decompose(complete(6), MatrixKind::adjacency()), 2);
  expect_values(s.values, {5, -1});
  EXPECT_NEAR(s.weights[0], 1.0 / 6, 1e-12);
  EXPECT_NEAR(s.weights[1], 5.0 / 6, 1e-12);
}

TEST(Support, PathWithEndTwinEndVertex) {
  auto s = support(decompose(path_with_end_twin(5), MatrixKind::adjacency()), 0);
  const double s5 = std::sqrt(5.0);
  const double a = std::sqrt((5 + s5) / 2), b = std::sqrt((5 - s5) / 2);
  expect_values(s.values, {a, b, 0.0, -b, -a}, 1e-8);
}

TEST(Support, BlowUpScalesByCopyCount) {
  auto x = path(4);
  auto sx = support(decompose(x, MatrixKind::adjacency()), 1);
  for (std::size_t m = 2; m <= 4; ++m) {
    auto sb = support(decompose(blow_up(m, x), MatrixKind::adjacency()), 1);
    std::vector<double> want{0.0};
    for (double v : sx.values) want.push_back(static_cast<double>(m) * v);
    expect_values(sb.values, want, 1e-8);
  }
}

TEST(Cospectral, Examples) {
  auto dec = decompose(join(empty(2), complete(3)), MatrixKind::adjacency());
  EXPECT_TRUE(cospectral(dec, 0, 1));
  auto st = decompose(star(4), MatrixKind::adjacency());
  EXPECT_FALSE(cospectral(st, 0, 1));
  EXPECT_TRUE(cospectral(st, 3, 3));
}

TEST(StronglyCospectral, CocktailPartyPair) {
  for (std::size_t k = 2; k <= 5; ++k) {
    auto dec = decompose(cocktail_party(k), MatrixKind::adjacency());
    auto part = strongly_cospectral(dec, 0, 1);
    ASSERT_TRUE(part);
    ASSERT_EQ(part->minus.size(), 1u);
    EXPECT_NEAR(dec.eigenvalues()[part->minus[0]], 0.0, 1e-9);
    std::vector<double> plus;
    for (auto j : part->plus) plus.push_back(dec.eigenvalues()[j]);
    expect_values(plus, {2.0 * k - 2.0, -2.0});
  }
}

TEST(StronglyCospectral, StarCentreHasNoPartner) {
  auto dec = decompose(star(4), MatrixKind::adjacency());
  for (std::size_t v = 1; v <= 4; ++v) EXPECT_FALSE(strongly_cospectral(dec, 0, v));
}

TEST(StronglyCospectral, BipartiteDoubleCopies) {
  for (std::size_t n = 3; n <= 6; ++n) {
    auto dec = decompose(direct_product(complete(2), complete(n)), MatrixKind::adjacency());
    EXPECT_TRUE(strongly_cospectral(dec, 0, n));
    for (std::size_t v = 1; v < 2 * n; ++v)
      if (v != n) EXPECT_FALSE(strongly_cospectral(dec, 0, v));
  }
}

TEST(Periodicity, CompleteGraphPeriod) {
  for (std::size_t n = 2; n <= 8; ++n) {
    auto p = is_periodic(decompose(complete(n), MatrixKind::adjacency()), 0);
    ASSERT_TRUE(p);
    EXPECT_NEAR(p->rho, 2 * std::numbers::pi / static_cast<double>(n), 1e-12);
  }
}

TEST(Periodicity, PathWithEndTwinIsNotPeriodic) {
  EXPECT_FALSE(is_periodic(decompose(path_with_end_twin(5), MatrixKind::adjacency()), 0));
}

TEST(Periodicity, CocktailPartyOnSix) {
  auto p = is_periodic(decompose(cocktail_party(3), MatrixKind::adjacency()), 0);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->rho, std::numbers::pi, 1e-12);
}

TEST(Periodicity, QuadraticSupport) {
  // K_{1,2}: centre support {+-sqrt 2}; period 2 pi / sqrt 2 ... differences 2 sqrt 2 = 2 * sqrt(8)/2
  auto dec = decompose(star(2), MatrixKind::adjacency());
  auto p = is_periodic(dec, 0);
  ASSERT_TRUE(p);
  WalkEvaluator ev(dec);
  EXPECT_NEAR(ev.magnitude(0, 0, p->rho), 1.0, 1e-12);
  EXPECT_NEAR(p->rho, std::numbers::pi / std::sqrt(2.0), 1e-12);
}

TEST(Invariants, ReconstructionAndProjectors) {
  for (const auto& g : testkit::corpus()) {
    for (auto kind : {MatrixKind::adjacency(), MatrixKind::laplacian(), MatrixKind::generalized(0.5)}) {
      auto dec = decompose(g, kind);
      const Matrix& m = dec.matrix();
      const auto n = m.rows();
      Matrix sum = Matrix::Zero(n, n), rec = Matrix::Zero(n, n);
      std::size_t mult = 0;
      for (std::size_t j = 0; j < dec.eigenvalues().size(); ++j) {
        const Matrix& e = dec.projectors()[j];
        sum += e;
        rec += dec.eigenvalues()[j] * e;
        mult += dec.multiplicities()[j];
        EXPECT_LT((e * e - e).cwiseAbs().maxCoeff(), 1e-8);
        for (std::size_t k = j + 1; k < dec.eigenvalues().size(); ++k)
          EXPECT_LT((e * dec.projectors()[k]).cwiseAbs().maxCoeff(), 1e-8);
      }
      EXPECT_EQ(mult, g.order());
      EXPECT_LT((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LT((rec - m).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + m.cwiseAbs().maxCoeff()));
      for (std::size_t u = 0; u < g.order(); ++u) {
        auto s = support(dec, u);
        double total = 0.0;
        for (double w : s.weights) {
          EXPECT_GT(w, 0.0);
          total += w;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
      }
      for (std::size_t k = 1; k < dec.eigenvalues().size(); ++k) EXPECT_GT(dec.eigenvalues()[k - 1], dec.eigenvalues()[k]);
    }
  }
}

TEST(Invariants, RegularGraphsShiftUnderGeneralizedMatrix) {
  for (const auto& g : {cycle(5), cocktail_party(3), complete(4), cartesian_product(cycle(3), complete(2))}) {
    const double k = *is_weighted_regular(g);
    auto a = decompose(g, MatrixKind::adjacency());
    for (double q : {-1.0, 0.5, 2.0}) {
      auto m = decompose(g, MatrixKind::generalized(q));
      for (std::size_t u = 0; u < g.order(); ++u) {
        auto sa = support(a, u), sm = support(m, u);
        ASSERT_EQ(sa.size(), sm.size());
        for (std::size_t j = 0; j < sa.size(); ++j) {
          double want = sa.values[j] + q * k;
          // the generalized spectrum may reverse order when q * k shifts uniformly: compare as sets
          bool found = false;
          for (std::size_t i = 0; i < sm.size(); ++i)
            if (std::abs(sm.values[i] - want) < 1e-8 && std::abs(sm.weights[i] - sa.weights[j]) < 1e-8) found = true;
          EXPECT_TRUE(found);
        }
      }
    }
  }
}

TEST(Decompose, EmptyMatrixAndOptions) {
  auto dec = decompose(empty(3), MatrixKind::adjacency());
  ASSERT_EQ(dec.eigenvalues().size(), 1u);
  EXPECT_EQ(dec.multiplicities()[0], 3u);
  EXPECT_THROW(support(dec, 3), std::out_of_range);
  EXPECT_THROW(strongly_cospectral(dec, 1, 1), std::invalid_argument);
}
