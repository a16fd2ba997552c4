#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "uncert/error.hpp"
#include "uncert/qmath.hpp"
#include "uncert/states.hpp"

using namespace uncert;

namespace {

CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(n(rng), n(rng));
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST(HermitianEig, IdentityAndDiagonal) {
  const HermEig e = hermitian_eig(CMatrix::Identity(2, 2));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);

  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const HermEig f = hermitian_eig(m);
  EXPECT_NEAR(f.values[0], 1.0, 1e-14);
  EXPECT_NEAR(f.values[1], 3.0, 1e-14);
}

TEST(HermitianEig, RejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    hermitian_eig(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(HermitianEig, ReconstructionOverRandomMatrices) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 16);
  for (int t = 0; t < 1000; ++t) {
    const CMatrix m = random_hermitian(dim(rng), rng);
    const HermEig e = hermitian_eig(m);
    const CMatrix back = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    ASSERT_LE((back - m).cwiseAbs().maxCoeff(), 1e-10 * scale);
    ASSERT_LE((e.vectors.adjoint() * e.vectors - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) ASSERT_LE(e.values[i - 1], e.values[i]);
  }
}

TEST(MatrixFunc, SqrtAndSupportInverse) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 4.0;
  m(1, 1) = 9.0;
  const CMatrix r = matrix_func(m, MatrixFunction::Sqrt);
  EXPECT_NEAR(r(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1).real(), 3.0, 1e-14);

  m(1, 1) = 0.0;
  const CMatrix inv = matrix_func(m, MatrixFunction::InvSqrt);
  EXPECT_NEAR(inv(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(inv(1, 1)), 0.0, 1e-14);
}

TEST(MatrixFunc, LogRoundTripOnSupport) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix rho = random_state({3}, 2, seed).matrix();
    const CMatrix lg = matrix_func(rho, MatrixFunction::Log);
    const HermEig e = hermitian_eig(lg);
    // exp on the support only, where log is defined.
    const CMatrix pi = support_projector(rho);
    CMatrix back = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      const Ket v = e.vectors.col(i);
      if ((pi * v).norm() > 0.5) back += std::exp(e.values[i]) * v * v.adjoint();
    }
    EXPECT_LE((back - rho).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(MatrixFunc, SqrtSquaredReproducesInput) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CMatrix rho = random_state({4}, 1 + static_cast<int>(seed % 4), seed).matrix();
    const CMatrix r = matrix_func(rho, MatrixFunction::Sqrt);
    EXPECT_LE((r * r - rho).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(MatrixFunc, RejectsNegative) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -0.5;
  EXPECT_THROW(matrix_func(m, MatrixFunction::Sqrt), Error);
}

TEST(Kron, MatchesLoopOracle) {
  EXPECT_LE((kron(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) - CMatrix::Identity(4, 4)).norm(), 0.0);
  std::mt19937_64 rng(5);
  const CMatrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
  EXPECT_LE((kron(a, b) - oracle::kron(a, b)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  Ket phi = Ket::Zero(4);
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  const CMatrix rho_b = partial_trace(phi * phi.adjoint(), {2, 2}, {1});
  EXPECT_LE((rho_b - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, ProductRecoversFactor) {
  const CMatrix ra = random_state({3}, 3, 1).matrix();
  const CMatrix rb = random_state({2}, 2, 2).matrix();
  EXPECT_LE((partial_trace(kron(ra, rb), {3, 2}, {0}) - ra).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, MatchesIndexSumOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix m = random_state({2, 2, 2}, 8, seed).matrix();
    EXPECT_LE((partial_trace(m, {2, 2, 2}, {0, 2}) - oracle::partial_trace3(m, 2, 2, 2, true, false, true))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
    const CMatrix n = random_state({2, 3, 2}, 4, seed).matrix();
    EXPECT_LE((partial_trace(n, {2, 3, 2}, {1}) - oracle::partial_trace3(n, 2, 3, 2, false, true, false))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(PartialTrace, DimMismatch) {
  try {
    partial_trace(CMatrix::Identity(4, 4), {2, 3}, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
}

TEST(SupNorm, KnownValuesAndOracle) {
  EXPECT_NEAR(sup_norm(CMatrix::Identity(3, 3)), 1.0, 1e-14);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 1.0 / 3.0;
  EXPECT_NEAR(sup_norm(m), 0.5, 1e-14);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    CMatrix a(3, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(n(rng), n(rng));
    EXPECT_NEAR(sup_norm(a), oracle::max_singular(a), 1e-10);
  }
}

TEST(SupportProjector, RankAndAction) {
  const Ket psi = random_ket(3, 4);
  EXPECT_LE((support_projector(psi * psi.adjoint()) - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((support_projector(CMatrix::Identity(3, 3) / 3.0) - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-12);
  const CMatrix rho = random_state({3}, 2, 8).matrix();
  const CMatrix pi = support_projector(rho);
  EXPECT_EQ(support_rank(rho), 2);
  EXPECT_NEAR(pi.trace().real(), 2.0, 1e-10);
  EXPECT_LE((pi * rho - rho).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Purify, MarginalRoundTrip) {
  const Ket phi = random_ket(3, 11);
  const Purification pp = purify(phi * phi.adjoint());
  EXPECT_EQ(pp.ancilla_dim, 1);
  EXPECT_NEAR(std::abs(pp.ket.dot(phi)), 1.0, 1e-12);

  const Purification pm = purify(CMatrix::Identity(2, 2) / 2.0);
  EXPECT_EQ(pm.ancilla_dim, 2);
  EXPECT_LE((partial_trace(pm.ket * pm.ket.adjoint(), {2, 2}, {0}) - CMatrix::Identity(2, 2) / 2.0)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CMatrix rho = random_state({4}, 1 + static_cast<int>(seed % 4), seed).matrix();
    const Purification p = purify(rho);
    EXPECT_EQ(p.ancilla_dim, support_rank(rho));
    const CMatrix back = partial_trace(p.ket * p.ket.adjoint(), {4, p.ancilla_dim}, {0});
    ASSERT_LE((back - rho).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(TraceDistance, KnownValuesAndOracle) {
  const CMatrix rho = random_state({3}, 3, 1).matrix();
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-14);
  CMatrix z0 = CMatrix::Zero(2, 2), z1 = CMatrix::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;
  EXPECT_NEAR(trace_distance(z0, z1), 1.0, 1e-14);
  const CMatrix sigma = random_state({3}, 2, 2).matrix();
  EXPECT_NEAR(trace_distance(rho, sigma), oracle::trace_norm_half(rho, sigma), 1e-12);
}

TEST(PartialTranspose, BellIsNegative) {
  Ket phi = Ket::Zero(4);
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  const HermEig e = hermitian_eig(partial_transpose(phi * phi.adjoint(), {2, 2}, 1));
  EXPECT_NEAR(e.values[0], -0.5, 1e-14);
}
