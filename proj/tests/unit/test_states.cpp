#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"
#include "uncert/bounds.hpp"
#include "uncert/error.hpp"
#include "uncert/states.hpp"

using namespace uncert;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::BadSpec;
}

double projector_gap(const BasisSet& a, const BasisSet& b) {
  double worst = 0.0;
  for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, (a.projector(j) - b.projector(j)).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST(QState, ValidatesInput) {
  CMatrix m = CMatrix::Identity(2, 2);
  EXPECT_EQ(code_of([&] { QState(m, {2}); }), ErrorCode::NotState);
  m(0, 1) = 0.3;
  EXPECT_EQ(code_of([&] { QState(m / 2.0, {2}); }), ErrorCode::NotState);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  EXPECT_EQ(code_of([&] { QState(neg, {2}); }), ErrorCode::NotState);
  EXPECT_EQ(code_of([&] { QState(CMatrix::Identity(4, 4) / 4.0, {2, 3}); }), ErrorCode::DimMismatch);
}

TEST(QState, LabelsAndMarginals) {
  const QState s = random_state({2, 3, 2}, 3, 1);
  ASSERT_EQ(s.labels().size(), 3u);
  EXPECT_EQ(s.labels()[0], "a");
  EXPECT_EQ(s.labels()[2], "c");
  const QState ac = s.marginal({0, 2});
  EXPECT_EQ(ac.dims(), (Dims{2, 2}));
  EXPECT_EQ(ac.labels()[1], "c");
  EXPECT_FALSE(s.is_pure());
  EXPECT_TRUE(random_pure_state({2, 2}, 3).is_pure());
}

TEST(FourierPair, MutuallyUnbiasedUpToEight) {
  for (int d = 2; d <= 8; ++d) {
    const auto [z, x] = fourier_pair(d);
    EXPECT_EQ(z.name(), "z");
    EXPECT_EQ(x.name(), "x");
    const CMatrix ov = z.kets().adjoint() * x.kets();
    for (Eigen::Index i = 0; i < ov.size(); ++i) EXPECT_NEAR(std::norm(ov(i)), 1.0 / d, 1e-12);
    EXPECT_LE(projector_gap(x, BasisSet(oracle::fourier_kets(d))), 1e-12);
  }
  EXPECT_EQ(code_of([] { fourier_pair(1); }), ErrorCode::BadDim);
}

TEST(WBasis, EndpointsAreZAndX) {
  for (int d : {2, 3, 4, 6}) {
    const auto [z, x] = fourier_pair(d);
    EXPECT_LE(projector_gap(w_basis(d, 1), z), 1e-12);
    EXPECT_LE(projector_gap(w_basis(d, d), x), 1e-12);
  }
  EXPECT_EQ(code_of([] { w_basis(6, 4); }), ErrorCode::NotDivisor);
}

TEST(WBasis, MatchesProductUnderIndexMap) {
  // |w_{beta,gamma}> = |z_beta> (x) |x_gamma> after relabelling beta + n t -> (beta, n).
  for (auto [d, s] : std::vector<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 3}, {8, 4}, {8, 2}}) {
    const int t = d / s;
    const BasisSet w = w_basis(d, s);
    const oracle::Mat xs = oracle::fourier_kets(s);
    for (int beta = 0; beta < t; ++beta)
      for (int gamma = 0; gamma < s; ++gamma) {
        Ket expect = Ket::Zero(d);
        for (int n = 0; n < s; ++n) expect[beta + n * t] = xs(n, gamma);
        EXPECT_NEAR(std::abs(expect.dot(w.ket(beta * s + gamma))), 1.0, 1e-12) << d << " " << s;
      }
  }
}

TEST(WBasis, OverlapsWithZAndX) {
  // Each w^s ket has z-entropy log s and x-entropy log(d/s).
  const int d = 8;
  const auto [z, x] = fourier_pair(d);
  for (int s : factors(d).factors) {
    const BasisSet w = w_basis(d, s);
    for (int j = 0; j < d; ++j) {
      std::vector<double> pz, px;
      for (int k = 0; k < d; ++k) {
        pz.push_back(std::norm(z.ket(k).dot(w.ket(j))));
        px.push_back(std::norm(x.ket(k).dot(w.ket(j))));
      }
      EXPECT_NEAR(oracle::shannon(pz), std::log2(s), 1e-12);
      EXPECT_NEAR(oracle::shannon(px), std::log2(d / s), 1e-12);
    }
  }
}

TEST(Factors, CompleteAscending) {
  EXPECT_EQ(factors(4).factors, (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(factors(12).factors, (std::vector<int>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(factors(7).eta(), 2);
}

TEST(QubitTriple, PairwiseUnbiased) {
  const MubTriple t = qubit_mub_triple();
  EXPECT_TRUE(mutually_unbiased(t.x, t.y));
  EXPECT_TRUE(mutually_unbiased(t.y, t.z));
  EXPECT_TRUE(mutually_unbiased(t.x, t.z));
}

TEST(TensorBasis, KronOfParts) {
  const BasisSet tb = tensor_fourier_basis({2, 3});
  const oracle::Mat expect = oracle::kron(oracle::fourier_kets(2), oracle::fourier_kets(3));
  EXPECT_LE(projector_gap(tb, BasisSet(expect)), 1e-12);
  EXPECT_TRUE(mutually_unbiased(tb, computational_basis(6)));
}

TEST(UnbiasedKet, UnbiasedToBothFourierBases) {
  for (int d : {2, 3, 4, 5, 6, 7}) {
    const Ket psi = fourier_unbiased_ket(d);
    const auto [z, x] = fourier_pair(d);
    for (int j = 0; j < d; ++j) {
      EXPECT_NEAR(std::norm(z.ket(j).dot(psi)), 1.0 / d, 1e-12);
      EXPECT_NEAR(std::norm(x.ket(j).dot(psi)), 1.0 / d, 1e-12);
    }
  }
}

TEST(Random, SeededAndValid) {
  const QState a = random_state({2, 3}, 2, 77), b = random_state({2, 3}, 2, 77);
  EXPECT_EQ((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(support_rank(a.matrix()), 2);
  const BasisSet w = random_basis(5, 3);
  EXPECT_LE((w.kets().adjoint() * w.kets() - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
  const Povm p = random_povm(3, 5, 4);
  CMatrix sum = CMatrix::Zero(3, 3);
  for (const auto& e : p.elements()) sum += e;
  EXPECT_LE((sum - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  const CMatrix v = random_isometry(2, 5, 6);
  EXPECT_LE((v.adjoint() * v - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Random, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 3), 5ULL ^ splitmix64(3));
}

TEST(Povm, Validation) {
  std::vector<CMatrix> bad{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  EXPECT_EQ(code_of([&] { Povm p(bad); }), ErrorCode::NotPovm);
  EXPECT_TRUE(Povm::from_basis(computational_basis(3)).is_rank_one());
  EXPECT_FALSE(random_povm(3, 2, 1).is_rank_one());
}

TEST(MeasureStats, BlocksSumToMarginal) {
  const QState s = random_state({3, 2}, 6, 12);
  const MeasStats st = measure_stats(s, random_povm(3, 4, 13), 0, 1);
  CMatrix sum = CMatrix::Zero(2, 2);
  double ptot = 0.0;
  for (std::size_t j = 0; j < st.blocks.size(); ++j) {
    sum += st.blocks[j];
    ptot += st.probs[j];
    EXPECT_NEAR(st.blocks[j].trace().real(), st.probs[j], 1e-12);
  }
  EXPECT_NEAR(ptot, 1.0, 1e-12);
  EXPECT_LE((sum - s.marginal({1}).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}
