#include "fracop/solution_operators.hpp"

#include "fracop/mittag_leffler.hpp"
#include "ml_oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fracop;

namespace {

CVector one() { return CVector::Ones(1); }

RVector log_space(double lo, double hi, int n) {
  RVector t(n);
  for (int i = 0; i < n; ++i) {
    t(i) = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
  }
  return t;
}

CVector random_real(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = g(rng);
  }
  return v;
}

double ml_ref(double a1, double a2, double x) { return oracle::mittag_leffler(a1, a2, x).real(); }

double rel(const CVector& x, const CVector& ref) { return (x - ref).norm() / ref.norm(); }

}  // namespace

TEST(ApplyG, ScalarHalfOrderAtOne) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const CVector g = apply_G(op, FractionalOrder(0.5), 1.0, one());
  const double oracle = ml_ref(0.5, 1.0, -1.0);
  EXPECT_NEAR(g(0).real(), oracle, 1e-10);
  EXPECT_NEAR(g(0).imag(), 0.0, 1e-12);
}

TEST(ApplyG, ScalarSweepAgainstSeriesOracle) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (double t : log_space(-3.0, 1.0, 9)) {
      const double x = std::pow(t, alpha);
      const double g = ml_ref(alpha, 1.0, -x);
      const double k = std::pow(t, alpha - 1.0) * ml_ref(alpha, alpha, -x);
      EXPECT_NEAR(apply_G(op, FractionalOrder(alpha), t, one())(0).real(), g, 1e-10 * std::abs(g));
      EXPECT_NEAR(apply_K(op, FractionalOrder(alpha), t, one())(0).real(), k, 1e-8 * std::abs(k));
    }
  }
}

TEST(ApplyK, ScalarWithGeneralMu) {
  const double mu = 7.5;
  DiagonalOperator op = DiagonalOperator::scalar(-mu);
  const FractionalOrder order(0.6);
  for (double t : {0.01, 0.3, 2.0}) {
    const double oracle =
        std::pow(t, -0.4) * ml_ref(0.6, 0.6, -mu * std::pow(t, 0.6));
    EXPECT_NEAR(apply_K(op, order, t, one())(0).real(), oracle, 1e-8 * std::abs(oracle));
  }
}

TEST(ApplyK, AgreesWithMittagLefflerWeightForm) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  for (double alpha : {0.3, 0.5, 0.8}) {
    const FractionalOrder order(alpha);
    for (double t : log_space(-3.0, 3.0, 7)) {
      const CVector k = apply_K(op, order, t, one());
      const CVector d = apply_dJtauG(op, order, alpha, t, one());
      EXPECT_LE(rel(d, k), 1e-7) << alpha << " " << t;
    }
  }
}

TEST(ApplyGprime, MatchesCentralDifference) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const FractionalOrder order(0.5);
  for (double t : {0.1, 1.0, 5.0}) {
    const double h = 1e-4 * t;
    const CVector fd = (apply_G(op, order, t + h, one()) - apply_G(op, order, t - h, one())) / (2.0 * h);
    EXPECT_LE(rel(apply_Gprime(op, order, t, one()), fd), 1e-5);
  }
}

TEST(ApplyGprime, SmallTimeSlopeAtLeastMinusOne) {
  DirichletLaplacian1D op(32);
  const FractionalOrder order(0.5);
  const CVector a = random_real(32, 1);
  // Small enough that |mu_max| t^alpha << 1 for every mode.
  const double t1 = 1e-14;
  const double t2 = 1e-12;
  const double s = std::log(apply_Gprime(op, order, t2, a).norm() / apply_Gprime(op, order, t1, a).norm()) /
                   std::log(t2 / t1);
  EXPECT_GE(s, -1.0 - 0.05);
}

TEST(ApplyDJtauG, TauOneIsG) {
  DirichletLaplacian1D op(16);
  const FractionalOrder order(0.4);
  const CVector a = random_real(16, 2);
  for (double t : {0.01, 0.5, 3.0}) {
    EXPECT_LE(rel(apply_dJtauG(op, order, 1.0, t, a), apply_G(op, order, t, a)), 1e-8);
  }
  EXPECT_THROW(OperatorWeight::dJtauG(0.0), DomainError);
  EXPECT_THROW(OperatorWeight::dJtauG(1.5), DomainError);
}

TEST(ApplyJbetaG, BetaZeroIsGAndScalarOracle) {
  DiagonalOperator op = DiagonalOperator::scalar(-2.0);
  const FractionalOrder order(0.7);
  for (double t : {0.05, 1.0}) {
    EXPECT_LE(rel(apply_JbetaG(op, order, 0.0, t, one()), apply_G(op, order, t, one())), 1e-10);
    // J^beta of E_{alpha,1}(-2 s^alpha) is t^beta E_{alpha,1+beta}(-2 t^alpha).
    const double oracle =
        std::pow(t, 0.5) * ml_ref(0.7, 1.5, -2.0 * std::pow(t, 0.7));
    EXPECT_NEAR(apply_JbetaG(op, order, 0.5, t, one())(0).real(), oracle, 1e-7 * std::abs(oracle));
  }
  EXPECT_THROW(OperatorWeight::JbetaG(-0.1), DomainError);
}

TEST(ApplyJbetaG, MatchesProductIntegrationUnderRefinement) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const FractionalOrder order(0.5);
  const double beta = 0.4;
  auto error = [&](Index n) {
    const TimeGrid grid = TimeGrid::graded(1.0, n, 2.0);
    const auto g = operator_trajectory(op, order, OperatorWeight::G(), grid, one());
    const auto jg = riemann_liouville_integral(g, beta);
    return (jg[n] - apply_JbetaG(op, order, beta, 1.0, one())).norm();
  };
  const double e1 = error(32);
  const double e2 = error(128);
  EXPECT_LT(e2, e1 / 2.0);
  EXPECT_LT(e2, 1e-3);
}

TEST(ApplyG, LaplacianMatchesEigenExpansion) {
  const Index n = 64;
  DirichletLaplacian1D op(n);
  const Eigendecomposition& e = *op.eigen();
  const CVector a = random_real(n, 3);
  const CVector coeff = e.vectors.transpose().cast<Complex>() * a;
  for (double alpha : {0.3, 0.8}) {
    const FractionalOrder order(alpha);
    for (double t : {1e-3, 0.1, 1.0}) {
      CVector oracle_coeff(n);
      for (Index k = 0; k < n; ++k) {
        oracle_coeff(k) = ml(MLParams(alpha, 1.0), e.values(k) * std::pow(t, alpha)) * coeff(k);
      }
      const CVector g = apply_G(op, order, t, a);
      const CVector g_coeff = e.vectors.transpose().cast<Complex>() * g;
      EXPECT_LE((g_coeff - oracle_coeff).norm(), 1e-8 * oracle_coeff.norm()) << alpha << " " << t;
    }
  }
}

TEST(ApplyG, SingleModeStaysRankOne) {
  const Index n = 24;
  DirichletLaplacian1D op(n);
  const CVector phi = op.eigen()->vectors.col(2).cast<Complex>();
  const CVector g = apply_G(op, FractionalOrder(0.5), 0.2, phi);
  const CVector c = op.eigen()->vectors.transpose().cast<Complex>() * g;
  for (Index k = 0; k < n; ++k) {
    if (k != 2) {
      EXPECT_LE(std::abs(c(k)), 1e-12);
    }
  }
}

TEST(ApplyG, CommutesWithA) {
  VariableElliptic1D op(30, [](double x) { return 1.0 + x * x; }, [](double) { return -0.5; });
  const FractionalOrder order(0.6);
  const CVector a = random_real(30, 4);
  const CVector aa = op.apply(a);
  for (double t : {1e-3, 0.1, 2.0}) {
    const CVector lhs = op.apply(apply_G(op, order, t, a));
    const CVector rhs = apply_G(op, order, t, aa);
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * aa.norm()) << t;
  }
}

TEST(ApplyG, RealDataGivesRealResult) {
  DirichletLaplacian1D op(20);
  const CVector a = random_real(20, 5);
  const CVector g = apply_G(op, FractionalOrder(0.5), 0.3, a);
  EXPECT_LE(g.imag().norm(), 1e-10 * g.norm());
}

TEST(ApplyG, PathInvariance) {
  DirichletLaplacian1D op(32);
  const FractionalOrder order(0.5);
  const CVector a = random_real(32, 6);
  QuadratureConfig paper;
  QuadratureConfig fixed;
  fixed.path = PathKind::Fixed;
  for (double t : {0.01, 0.5}) {
    const CVector g1 = apply_G(op, order, t, a, paper);
    const CVector g2 = apply_G(op, order, t, a, fixed);
    EXPECT_LE(rel(g2, g1), 1e-8) << t;
  }
}

TEST(ApplyG, SmallTimeApproachesInitialValue) {
  // ||G(t) a - a|| <= C t^alpha ||A a||: fitted slope alpha.
  DiagonalOperator op(RVector{{-1.0, -2.0, -5.0}});
  const FractionalOrder order(0.4);
  const CVector a = CVector::Ones(3);
  const double t1 = 1e-8;
  const double t2 = 1e-5;
  const double d1 = (apply_G(op, order, t1, a) - a).norm();
  const double d2 = (apply_G(op, order, t2, a) - a).norm();
  EXPECT_NEAR(std::log(d2 / d1) / std::log(t2 / t1), 0.4, 0.05);
}

TEST(ApplyOperator, DomainErrors) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  EXPECT_THROW(apply_G(op, FractionalOrder(0.5), 0.0, one()), DomainError);
  EXPECT_THROW(apply_G(op, FractionalOrder(0.5), 1.0, CVector(CVector::Ones(2))), DomainError);
}

TEST(OperatorTrajectory, InitialNodeConvention) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  const auto g = operator_trajectory(op, FractionalOrder(0.5), OperatorWeight::G(), grid, one());
  EXPECT_EQ(g[0](0), Complex(1.0, 0.0));
  const auto k = operator_trajectory(op, FractionalOrder(0.5), OperatorWeight::K(), grid, one());
  EXPECT_EQ(k[0](0), Complex(0.0, 0.0));
  EXPECT_NEAR(g[4](0).real(), ml(MLParams(0.5, 1.0), -1.0), 1e-10);
}
