#include <gtest/gtest.h>

#include <cmath>

#include "altmin/altmin_ops.hpp"
#include "altmin/metrics.hpp"

using namespace altmin;

namespace {

const Complex I1(0.0, 1.0);

MeasurementVector random_mvec(Index m, std::uint64_t seed) {
  Rng rng(seed, 77);
  return MeasurementVector(complex_normal_vector(m, rng));
}

}  // namespace

TEST(ProjectRange, RangeVectorUnchanged) {
  const auto a = sample_sensing(32, 8, RngStream(1, 0));
  Rng rng(1, 1);
  const CVector w = a.apply(complex_normal_vector(8, rng));
  const auto p = project_range(a, MeasurementVector(w));
  EXPECT_LE((p.values() - w).norm(), 1e-10 * w.norm());
}

TEST(ProjectRange, OrthogonalComplementAnnihilated) {
  const auto a = sample_sensing(32, 8, RngStream(2, 0));
  Rng rng(2, 1);
  CVector w = complex_normal_vector(32, rng);
  const Eigen::HouseholderQR<CMatrix> qr(a.matrix());
  const CMatrix q = CMatrix(qr.householderQ()).leftCols(8);
  w -= q * (q.adjoint() * w);
  const auto p = project_range(a, MeasurementVector(w));
  EXPECT_LE(p.values().norm(), 1e-10 * w.norm());
}

TEST(ProjectRange, SquareInvertibleIsIdentity) {
  const auto a = sample_sensing(6, 6, RngStream(3, 0));
  const auto w = random_mvec(6, 3);
  EXPECT_LE((project_range(a, w).values() - w.values()).norm(), 1e-10 * w.values().norm());
}

TEST(ProjectRange, Idempotent) {
  const auto a = sample_sensing(20, 5, RngStream(3, 1));
  const auto p = project_range(a, random_mvec(20, 4));
  EXPECT_LE((project_range(a, p).values() - p.values()).norm(), 1e-10 * p.values().norm());
}

TEST(ProjectAmplitude, Examples) {
  RVector y(2);
  y << 2.0, 3.0;
  CVector w(2);
  w << 1.0, -3.0 * I1;
  const auto p = project_amplitude(Observations(y), MeasurementVector(w));
  EXPECT_NEAR(std::abs(p.values()(0) - Complex(2.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.values()(1) + 3.0 * I1), 0.0, 1e-15);

  const auto same = project_amplitude(Observations(y), MeasurementVector(CVector(p.values())));
  EXPECT_LE((same.values() - p.values()).norm(), 1e-15);

  const auto zero = project_amplitude(Observations(RVector::Constant(1, 5.0)), MeasurementVector(CVector::Zero(1)));
  EXPECT_EQ(zero.values()(0), Complex(5.0, 0.0));
}

TEST(ApplyG, ScalarExample) {
  const SensingEnsemble a(CMatrix::Ones(1, 1));
  const Observations y(RVector::Constant(1, 2.0));
  CVector x(1);
  x << I1;
  const auto g = apply_g(a, y, Signal(x));
  EXPECT_NEAR(std::abs(g.values()(0) - 2.0 * I1), 0.0, 1e-15);
}

TEST(ApplyG, AtTruthIsGramTimesTruth) {
  const auto a = sample_sensing(16, 4, RngStream(4, 0));
  const auto z = sample_signal(4, false, RngStream(4, 1));
  const auto g = apply_g(a, observe(a, z), z);
  const CVector want = a.matrix().adjoint() * a.matrix() * z.values();
  EXPECT_LE((g.values() - want).norm(), 1e-10 * want.norm());
}

TEST(ApplyG, ZeroObservationsAndZeroInput) {
  const auto a = sample_sensing(16, 4, RngStream(5, 0));
  const Observations y(RVector::Zero(16));
  EXPECT_EQ(apply_g(a, y, random_unit(4, RngStream(5, 1))).values(), CVector::Zero(4));
  try {
    apply_g(a, observe(a, random_unit(4, RngStream(5, 2))), Signal::zeros(4));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
}

TEST(AltminStep, TruthIsFixedPoint) {
  const auto a = sample_sensing(64, 8, RngStream(6, 0));
  const auto z = sample_signal(8, false, RngStream(6, 1));
  const auto t = altmin_step(a, observe(a, z), z);
  EXPECT_LE((t.values() - z.values()).norm(), 1e-10 * z.norm());
}

TEST(AltminStep, ScaledTruthKeepsOnlyPhase) {
  const auto a = sample_sensing(64, 8, RngStream(7, 0));
  const auto z = sample_signal(8, false, RngStream(7, 1));
  const Complex c = 3.0 * std::polar(1.0, 0.7);
  const auto t = altmin_step(a, observe(a, z), z.scaled(c));
  EXPECT_LE((t.values() - std::polar(1.0, 0.7) * z.values()).norm(), 1e-10 * z.norm());
}

TEST(AltminStep, HandExample) {
  const SensingEnsemble a(CMatrix::Ones(2, 1));
  const Observations y(RVector::Constant(2, 2.0));
  CVector x(1);
  x << I1;
  const auto t = altmin_step(a, y, Signal(x));
  EXPECT_NEAR(std::abs(t.values()(0) - 2.0 * I1), 0.0, 1e-15);
}

TEST(AltminStep, AgreesWithProjectionPath) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto a = sample_sensing(64, 8, RngStream(8, s));
    const auto z = sample_signal(8, false, RngStream(9, s));
    const auto x = sample_signal(8, false, RngStream(10, s));
    const auto y = observe(a, z);
    const CVector lhs = a.apply(altmin_step(a, y, x).values());
    const CVector rhs = project_range(a, project_amplitude(y, MeasurementVector(a.apply(x.values())))).values();
    EXPECT_LE((lhs - rhs).norm(), 1e-8 * rhs.norm());
  }
}

TEST(AltminStep, PhaseEquivarianceAndScaleCollapse) {
  const auto a = sample_sensing(48, 6, RngStream(11, 0));
  const auto y = observe(a, sample_signal(6, false, RngStream(11, 1)));
  const auto x = sample_signal(6, false, RngStream(11, 2));
  const auto t = altmin_step(a, y, x);
  const Complex rot = std::polar(1.0, 2.2);
  EXPECT_LE((altmin_step(a, y, x.scaled(rot)).values() - rot * t.values()).norm(), 1e-10 * t.norm());
  const Complex c(-0.3, 4.0);
  EXPECT_LE((altmin_step(a, y, x.scaled(c)).values() - (c / std::abs(c)) * t.values()).norm(), 1e-10 * t.norm());
}

TEST(AltminStep, GlobalPhaseFamilyFixed) {
  const auto a = sample_sensing(40, 5, RngStream(12, 0));
  const auto z = sample_signal(5, false, RngStream(12, 1));
  const auto y = observe(a, z);
  for (double phi : {0.3, 1.9, -2.8}) {
    const auto zp = z.scaled(std::polar(1.0, phi));
    EXPECT_LE((altmin_step(a, y, zp).values() - zp.values()).norm(), 1e-10 * z.norm());
  }
}

TEST(AltminStep, SquareSystemMatchesAmplitudesExactly) {
  const auto a = sample_sensing(5, 5, RngStream(13, 0));
  const auto y = observe(a, sample_signal(5, false, RngStream(13, 1)));
  const auto x = sample_signal(5, false, RngStream(13, 2));
  const CVector ax = a.apply(x.values());
  const CVector got = a.apply(altmin_step(a, y, x).values());
  for (Index i = 0; i < 5; ++i) {
    const Complex want = y.values()(i) * ax(i) / std::abs(ax(i));
    EXPECT_NEAR(std::abs(got(i) - want), 0.0, 1e-9 * (1.0 + y.values()(i)));
  }
}

TEST(AltminStep, DimensionChecks) {
  const auto a = sample_sensing(10, 3, RngStream(14, 0));
  const Observations y(RVector::Ones(9));
  EXPECT_THROW(apply_g(a, y, random_unit(3, RngStream(14, 1))), Error);
  EXPECT_THROW(project_range(a, MeasurementVector(CVector::Zero(9))), Error);
}
