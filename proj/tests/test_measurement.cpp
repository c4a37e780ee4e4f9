#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "altmin/measurement.hpp"
#include "altmin/stats.hpp"

using namespace altmin;

namespace {

const Complex I1(0.0, 1.0);

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

// A with prescribed singular values, built from random unitary factors.
CMatrix with_singular_values(Index m, const RVector& s, Rng& rng) {
  const Index n = s.size();
  CMatrix g(m, m), h(n, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) g(i, j) = rng.complex_normal();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = rng.complex_normal();
  const CMatrix u = Eigen::HouseholderQR<CMatrix>(g).householderQ();
  const CMatrix v = Eigen::HouseholderQR<CMatrix>(h).householderQ();
  return u.leftCols(n) * s.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace

TEST(SampleSignal, UnitLengthOne) {
  const auto s = sample_signal(1, true, RngStream(1, 1));
  EXPECT_NEAR(std::abs(s.values()(0)), 1.0, 1e-15);
}

TEST(SampleSignal, UnitNorm) {
  const auto s = sample_signal(64, true, RngStream(1, 2));
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
}

TEST(SampleSignal, EntryPowerAveragesToOne) {
  const auto s = sample_signal(1000, false, RngStream(1, 3));
  const double mean = s.values().squaredNorm() / 1000.0;
  EXPECT_GE(mean, 0.9);
  EXPECT_LE(mean, 1.1);
}

TEST(SampleSignal, ZeroDimensionRejected) {
  expect_error(ErrorKind::dimension, [] { sample_signal(0, false, RngStream(1, 1)); });
  expect_error(ErrorKind::dimension, [] { random_unit(0, RngStream(1, 1)); });
}

TEST(RandomUnit, ModulusOneInDimensionOne) {
  EXPECT_NEAR(std::abs(random_unit(1, RngStream(2, 0)).values()(0)), 1.0, 1e-15);
}

TEST(RandomUnit, OverlapWithFixedVector) {
  const Index n = 16;
  const auto z = random_unit(n, RngStream(3, 0));
  const RngStream root(3, 1);
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < 10000; ++t) acc.add(std::norm(z.values().dot(random_unit(n, root.child(t)).values())));
  EXPECT_NEAR(acc.estimate().value, 1.0 / 16.0, 0.2 / 16.0);
}

TEST(RandomUnit, Determinism) {
  const auto a = random_unit(32, RngStream(4, 1));
  const auto b = random_unit(32, RngStream(4, 2));
  const auto c = random_unit(32, RngStream(4, 1));
  EXPECT_GT((a.values() - b.values()).norm(), 0.1);
  EXPECT_EQ(a.values(), c.values());
}

TEST(SampleSensing, EntryPowerOverRedraws) {
  const RngStream root(5, 0);
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const auto a = sample_sensing(4, 2, root.child(t));
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 2; ++j) acc.add(std::norm(a.matrix()(i, j)));
  }
  EXPECT_GE(acc.estimate().value, 0.99);
  EXPECT_LE(acc.estimate().value, 1.01);
}

TEST(SampleSensing, RealAndImaginaryHalfVariance) {
  const auto a = sample_sensing(20000, 4, RngStream(5, 1));
  const double re = a.matrix().real().array().square().mean();
  const double im = a.matrix().imag().array().square().mean();
  EXPECT_NEAR(re, 0.5, 0.01);
  EXPECT_NEAR(im, 0.5, 0.01);
}

TEST(SampleSensing, FullRank) {
  const auto a = sample_sensing(200, 10, RngStream(6, 0));
  EXPECT_FALSE(a.rank_deficient());
  EXPECT_GT(a.min_singular_value(), 0.0);
}

TEST(SampleSensing, TooFewMeasurements) {
  expect_error(ErrorKind::insufficient_measurements, [] { sample_sensing(2, 3, RngStream(1, 1)); });
  expect_error(ErrorKind::insufficient_measurements, [] { SensingEnsemble(CMatrix::Ones(2, 3)); });
}

TEST(SampleSensing, DeterministicBitForBit) {
  const auto a = sample_sensing(50, 5, RngStream(9, 9));
  const auto b = sample_sensing(50, 5, RngStream(9, 9));
  EXPECT_EQ(a.matrix(), b.matrix());
}

TEST(SensingEnsemble, FactorizationReproducesMatrix) {
  const auto a = sample_sensing(64, 8, RngStream(7, 0));
  EXPECT_LE((a.reconstruct() - a.matrix()).norm(), 1e-10 * a.matrix().norm());
  const CMatrix r = a.r_factor();
  EXPECT_LE((r.adjoint() * r - a.matrix().adjoint() * a.matrix()).norm(), 1e-10 * a.matrix().squaredNorm());
}

TEST(SensingEnsemble, NormalSolveBackwardError) {
  Rng rng(8, 0);
  for (double cond : {1.0, 1e3, 1e6}) {
    RVector s(6);
    for (Index i = 0; i < 6; ++i) s(i) = std::pow(cond, -static_cast<double>(i) / 5.0);
    const SensingEnsemble a(with_singular_values(40, s, rng));
    const CMatrix gram = a.matrix().adjoint() * a.matrix();
    const CVector v = complex_normal_vector(6, rng);
    const CVector u = a.solve_normal(v);
    const double backward = (gram * u - v).norm() / (gram.norm() * u.norm() + v.norm());
    EXPECT_LE(backward, 1e-10) << "cond=" << cond;
  }
}

TEST(SensingEnsemble, LeastSquaresMatchesNormalEquations) {
  const auto a = sample_sensing(30, 5, RngStream(8, 1));
  Rng rng(8, 2);
  const CVector w = complex_normal_vector(30, rng);
  const CVector x1 = a.least_squares(w);
  const CVector x2 = a.solve_normal(a.apply_adjoint(w));
  EXPECT_LE((x1 - x2).norm(), 1e-10 * x1.norm());
}

TEST(SensingEnsemble, RankDeficientRejectedOnSolve) {
  CMatrix m = CMatrix::Zero(4, 2);
  m.col(0).setOnes();
  m.col(1).setOnes();
  const SensingEnsemble a(m);
  EXPECT_TRUE(a.rank_deficient());
  expect_error(ErrorKind::singularity, [&] { a.solve_normal(CVector::Ones(2)); });
}

TEST(SensingEnsemble, SelectRows) {
  const auto a = sample_sensing(10, 2, RngStream(8, 3));
  const std::vector<Index> rows{7, 2, 5};
  const auto sub = a.select_rows(rows);
  ASSERT_EQ(sub.m(), 3);
  EXPECT_EQ(sub.matrix().row(0), a.matrix().row(7));
  EXPECT_EQ(sub.matrix().row(2), a.matrix().row(5));
}

TEST(Covariance, IdentityReproducesStandardEnsemble) {
  const std::vector<double> ones{1.0, 1.0};
  const auto cov = CovarianceSpec::diagonal(ones);
  const auto a = sample_sensing_cov(100000, cov, RngStream(10, 0));
  // Row i stores a_i^*, so A^*A = sum_i a_i a_i^*.
  const CMatrix emp = a.matrix().adjoint() * a.matrix() / 100000.0;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(emp(i, j) - (i == j ? 1.0 : 0.0)), 0.0, 0.02);
}

TEST(Covariance, DiagonalScaling) {
  const std::vector<double> d{4.0, 1.0};
  const auto a = sample_sensing_cov(100000, CovarianceSpec::diagonal(d), RngStream(10, 1));
  const double first = a.matrix().col(0).squaredNorm() / 100000.0;
  const double second = a.matrix().col(1).squaredNorm() / 100000.0;
  EXPECT_GE(first, 3.9);
  EXPECT_LE(first, 4.1);
  EXPECT_NEAR(second, 1.0, 0.03);
}

TEST(Covariance, FullCovarianceMoments) {
  CMatrix sigma(2, 2);
  sigma << Complex(2.0, 0.0), Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(1.0, 0.0);
  const CovarianceSpec cov(sigma);
  EXPECT_LE((cov.sqrt() * cov.sqrt() - sigma).norm(), 1e-10 * sigma.norm());
  const auto a = sample_sensing_cov(200000, cov, RngStream(10, 2));
  const CMatrix emp = a.matrix().adjoint() * a.matrix() / 200000.0;
  EXPECT_LE((emp - sigma).cwiseAbs().maxCoeff(), 0.02);
}

TEST(Covariance, Rejections) {
  const std::vector<double> singular{1.0, 0.0};
  expect_error(ErrorKind::covariance, [&] { CovarianceSpec::diagonal(singular); });
  const std::vector<double> negative{1.0, -1.0};
  expect_error(ErrorKind::covariance, [&] { CovarianceSpec::diagonal(negative); });
  CMatrix nonherm(2, 2);
  nonherm << 1.0, 0.5, 0.0, 1.0;
  expect_error(ErrorKind::covariance, [&] { CovarianceSpec c(nonherm); });
  expect_error(ErrorKind::covariance, [&] { CovarianceSpec c(CMatrix(2, 3)); });
  const std::vector<double> ok{1.0, 1.0, 1.0};
  expect_error(ErrorKind::insufficient_measurements,
               [&] { sample_sensing_cov(2, CovarianceSpec::diagonal(ok), RngStream(1, 1)); });
}

TEST(Observe, HandExample) {
  CMatrix m(2, 2);
  m << Complex(1.0, 1.0), 5.0, 0.0, 1.0;
  const SensingEnsemble a(m);
  CVector z(2);
  z << 1.0, 0.0;
  const auto y = observe(a, Signal(z));
  EXPECT_NEAR(y.values()(0), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(y.values()(1), 0.0);
}

TEST(Observe, ZeroSignal) {
  const auto a = sample_sensing(8, 3, RngStream(11, 0));
  const auto y = observe(a, Signal::zeros(3));
  EXPECT_EQ(y.values(), RVector::Zero(8));
}

TEST(Observe, PhaseInvarianceAndScaling) {
  const auto a = sample_sensing(32, 8, RngStream(11, 1));
  const auto z = sample_signal(8, false, RngStream(11, 2));
  const auto y = observe(a, z);
  const auto y_phase = observe(a, z.scaled(std::polar(1.0, 1.3)));
  EXPECT_LE((y.values() - y_phase.values()).cwiseAbs().maxCoeff(), 1e-12);
  const Complex c(-2.0, 1.5);
  const auto y_scaled = observe(a, z.scaled(c));
  EXPECT_LE((y_scaled.values() - std::abs(c) * y.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Observe, DimensionMismatch) {
  const auto a = sample_sensing(8, 3, RngStream(11, 3));
  expect_error(ErrorKind::dimension, [&] { observe(a, Signal::zeros(4)); });
}

TEST(Observations, RejectNegative) {
  RVector v(2);
  v << 1.0, -0.5;
  expect_error(ErrorKind::domain, [&] { Observations o(v); });
}
