#include "fracop/evolution_solver.hpp"

#include "fracop/mittag_leffler.hpp"
#include "ml_oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fracop;

namespace {

CVector one() { return CVector::Ones(1); }

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

double sup_diff(const GridFunction<Complex>& a, const GridFunction<Complex>& b) {
  return (a - b).sup_norm();
}

ForcingTerm constant_forcing(const CVector& v) {
  return ForcingTerm::callback([v](double) { return v; });
}

NonlinearForcing componentwise_sin() {
  NonlinearForcing f;
  f.map = [](double, const CVector& u) {
    CVector out(u.size());
    for (Index i = 0; i < u.size(); ++i) {
      out(i) = std::sin(u(i).real());
    }
    return out;
  };
  f.lipschitz = 1.0;
  return f;
}

}  // namespace

TEST(SolveLinear, ZeroForcingIsGTrajectory) {
  DirichletLaplacian1D op(16);
  const FractionalOrder order(0.5);
  const CVector a = random_real(16, 1);
  const TimeGrid grid = TimeGrid::geometric(1e-3, 1.0, 12);
  const SolveReport rep = solve_linear(op, order, a, ForcingTerm::zero(), grid);
  const auto g = operator_trajectory(op, order, OperatorWeight::G(), grid, a);
  EXPECT_LE(sup_diff(rep.trajectory, g), 1e-9 * a.norm());
  EXPECT_EQ(rep.iterations, 1);
}

TEST(SolveLinear, ScalarConstantForcing) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  for (double alpha : {0.3, 0.5, 0.8}) {
    const TimeGrid grid = TimeGrid::geometric(1e-4, 10.0, 60);
    const SolveReport rep = solve_linear(op, FractionalOrder(alpha), CVector::Zero(1), constant_forcing(one()), grid);
    for (Index i = 1; i < grid.size(); ++i) {
      const double t = grid[i];
      const double exact = std::pow(t, alpha) * ml_ref(alpha, alpha + 1.0, -std::pow(t, alpha));
      EXPECT_NEAR(rep.trajectory[i](0).real(), exact, 1e-7 * exact) << alpha << " " << t;
    }
  }
}

TEST(SolveLinear, LinearForcingIsExactForPiecewiseLinearData) {
  // F(t) = t is reproduced exactly by the interpolant: u = t^{1+alpha} E_{alpha,alpha+2}(-t^alpha).
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const double alpha = 0.6;
  const TimeGrid grid = TimeGrid::uniform(2.0, 10);
  const SolveReport rep = solve_linear(op, FractionalOrder(alpha), CVector::Zero(1),
                                       ForcingTerm::callback([](double t) { return CVector(CVector::Constant(1, t)); }),
                                       grid);
  for (Index i = 1; i < grid.size(); ++i) {
    const double t = grid[i];
    const double exact = std::pow(t, 1.0 + alpha) * ml_ref(alpha, alpha + 2.0, -std::pow(t, alpha));
    EXPECT_NEAR(rep.trajectory[i](0).real(), exact, 1e-9 * exact) << t;
  }
}

TEST(SolveLinear, Superposition) {
  DirichletLaplacian1D op(20);
  const FractionalOrder order(0.4);
  const CVector a = random_real(20, 2);
  const CVector b = random_real(20, 3);
  const TimeGrid grid = TimeGrid::uniform(1.0, 40);
  auto f = ForcingTerm::callback([b](double t) { return CVector(std::cos(3.0 * t) * b); });
  const auto full = solve_linear(op, order, a, f, grid).trajectory;
  const auto hom = solve_linear(op, order, a, ForcingTerm::zero(), grid).trajectory;
  const auto inh = solve_linear(op, order, CVector::Zero(20), f, grid).trajectory;
  EXPECT_LE(sup_diff(full, hom + inh), 1e-12 * full.sup_norm());
}

TEST(SolveLinear, SampledAndCallbackForcingAgree) {
  DiagonalOperator op(RVector{{-1.0, -3.0}});
  const FractionalOrder order(0.5);
  const TimeGrid grid = TimeGrid::uniform(1.0, 16);
  auto cb = [](double t) { return CVector(CVector::Constant(2, std::sin(t))); };
  const auto g = GridFunction<Complex>::sample(grid, 2, cb);
  const CVector a = CVector::Ones(2);
  const auto u1 = solve_linear(op, order, a, ForcingTerm::callback(cb), grid).trajectory;
  const auto u2 = solve_linear(op, order, a, ForcingTerm::samples(g), grid).trajectory;
  EXPECT_EQ(sup_diff(u1, u2), 0.0);
}

TEST(SolveLinear, InputErrors) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  const FractionalOrder order(0.5);
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  auto bad = ForcingTerm::callback([](double t) {
    return CVector(CVector::Constant(1, t > 0.5 ? std::nan("") : 0.0));
  });
  EXPECT_THROW(solve_linear(op, order, one(), bad, grid), DomainError);
  EXPECT_THROW(solve_linear(op, order, CVector(CVector::Ones(2)), ForcingTerm::zero(), grid), DomainError);
  const auto other = GridFunction<Complex>(TimeGrid::uniform(1.0, 5), 1);
  EXPECT_THROW(solve_linear(op, order, one(), ForcingTerm::samples(other), grid), DomainError);
}

TEST(SolveLinear, RealProblemStaysReal) {
  DirichletLaplacian1D op(12);
  const CVector b = random_real(12, 4);
  const auto rep = solve_linear(op, FractionalOrder(0.7), random_real(12, 5),
                                ForcingTerm::callback([b](double t) { return CVector(t * b); }),
                                TimeGrid::uniform(1.0, 20));
  EXPECT_LE(max_imag(rep.trajectory), 1e-10 * rep.trajectory.sup_norm());
}

TEST(SolveShifted, ZeroShiftIsLinearSolve) {
  DirichletLaplacian1D op(10);
  const FractionalOrder order(0.5);
  const CVector a = random_real(10, 6);
  const TimeGrid grid = TimeGrid::uniform(1.0, 10);
  const auto f = constant_forcing(random_real(10, 7));
  const auto lin = solve_linear(op, order, a, f, grid);
  const auto sh = solve_shifted(op, 0.0, order, a, f, grid, 1e-12, 5);
  EXPECT_EQ(sh.iterations, 1);
  EXPECT_EQ(sup_diff(sh.trajectory, lin.trajectory), 0.0);
}

TEST(SolveShifted, ScalarConvergesToMittagLeffler) {
  DiagonalOperator op0 = DiagonalOperator::scalar(-2.0);
  for (double alpha : {0.5, 0.8}) {
    const TimeGrid grid = TimeGrid::graded(1.0, 400, 2.0 / alpha);
    // The sup increment bottoms out near 1e-11 (rounding in the contour sum),
    // so the monotone-ratio check stops at 1e-9.
    const auto rep = solve_shifted(op0, 1.0, FractionalOrder(alpha), one(), ForcingTerm::zero(), grid, 1e-9, 25);
    double err = 0.0;
    for (Index i = 0; i < grid.size(); ++i) {
      err = std::max(err, std::abs(rep.trajectory[i](0) - ml(MLParams(alpha, 1.0), -std::pow(grid[i], alpha))));
    }
    EXPECT_LE(err, 1e-6) << alpha;
    EXPECT_LE(rep.iterations, 25);
    for (std::size_t n = 3; n + 1 < rep.ratios.size(); ++n) {
      EXPECT_LT(rep.ratios[n + 1], rep.ratios[n]) << alpha << " n=" << n;
    }
    // Increments never exceed the theoretical factor sequence times the first increment.
    for (std::size_t n = 0; n < rep.increments.size(); ++n) {
      EXPECT_LE(rep.increments[n], rep.theoretical_factors[n] * rep.increments[0] * (1.0 + 1e-6) + 1e-12);
    }
  }
}

TEST(SolveShifted, AgreesWithAssembledOperator) {
  auto base = std::make_shared<DirichletLaplacian1D>(12);
  const double c0 = 2.0;
  ShiftedOperator assembled(base, c0);
  const FractionalOrder order(0.6);
  const CVector a = base->eigen()->vectors.col(0).cast<Complex>() - 0.5 * base->eigen()->vectors.col(1).cast<Complex>();
  const TimeGrid grid = TimeGrid::graded(1.0, 600, 2.0 / 0.6);
  const auto lin = solve_linear(assembled, order, a, ForcingTerm::zero(), grid);
  const auto sh = solve_shifted(*base, c0, order, a, ForcingTerm::zero(), grid, 1e-11, 60);
  EXPECT_LE(sup_diff(lin.trajectory, sh.trajectory), 1e-6 * a.norm());
}

TEST(SolveShifted, IterationCapRaisesWithHistory) {
  DiagonalOperator op0 = DiagonalOperator::scalar(-2.0);
  try {
    solve_shifted(op0, 1.0, FractionalOrder(0.5), one(), ForcingTerm::zero(), TimeGrid::uniform(1.0, 20),
                  1e-14, 3);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.increments().size(), 3u);
  }
}

TEST(SolveSemilinear, ZeroNonlinearityOneIteration) {
  DirichletLaplacian1D op(8);
  NonlinearForcing f;
  f.map = [](double, const CVector& u) { return CVector(CVector::Zero(u.size())); };
  const CVector a = random_real(8, 9);
  const TimeGrid grid = TimeGrid::uniform(0.5, 10);
  const auto rep = solve_semilinear(op, FractionalOrder(0.5), a, f, grid);
  EXPECT_EQ(rep.iterations, 1);
  EXPECT_EQ(rep.increments.back(), 0.0);
  const auto g = solve_linear(op, FractionalOrder(0.5), a, ForcingTerm::zero(), grid).trajectory;
  EXPECT_EQ(sup_diff(rep.trajectory, g), 0.0);
}

TEST(SolveSemilinear, IdentityNonlinearityCancelsOperator) {
  // A = -1 and F(u) = u: the equation reduces to d^alpha (u - a) = 0.
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  NonlinearForcing f;
  f.map = [](double, const CVector& u) { return u; };
  f.lipschitz = 1.0;
  SemilinearOptions opt;
  opt.gamma_exp = 0.0;
  const TimeGrid grid = TimeGrid::graded(1.0, 300, 4.0);
  const auto rep = solve_semilinear(op, FractionalOrder(0.5), CVector::Constant(1, 2.0), f, grid, opt);
  for (Index i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(rep.trajectory[i](0).real(), 2.0, 1e-5);
  }
  EXPECT_LT(rep.contraction, 1.0);
}

TEST(SolveSemilinear, InitialGuessesReachSameFixedPoint) {
  DirichletLaplacian1D op(16);
  const FractionalOrder order(0.5);
  const CVector a = random_real(16, 10);
  const TimeGrid grid = TimeGrid::uniform(0.5, 40);
  SemilinearOptions opt;
  opt.tol = 1e-10;
  const auto r1 = solve_semilinear(op, order, a, componentwise_sin(), grid, opt);
  opt.initial_guess = GridFunction<Complex>(grid, 16);
  const auto r2 = solve_semilinear(op, order, a, componentwise_sin(), grid, opt);
  EXPECT_LE(sup_diff(r1.trajectory, r2.trajectory), 2.0 * opt.tol * 10.0);
  EXPECT_LT(r1.contraction, 1.0);
  EXPECT_FALSE(r1.norm_substituted);
}

TEST(SolveSemilinear, LipschitzInInitialValue) {
  DirichletLaplacian1D op(8);
  const FractionalOrder order(0.5);
  const TimeGrid grid = TimeGrid::uniform(0.5, 20);
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    const CVector a = random_real(8, 20 + k);
    const CVector b = a + 0.01 * random_real(8, 40 + k);
    const auto ua = solve_semilinear(op, order, a, componentwise_sin(), grid).trajectory;
    const auto ub = solve_semilinear(op, order, b, componentwise_sin(), grid).trajectory;
    worst = std::max(worst, sup_diff(ua, ub) / (a - b).norm());
  }
  EXPECT_LT(worst, 10.0);
}

TEST(SolveSemilinear, BallViolation) {
  DirichletLaplacian1D op(8);
  NonlinearForcing f = componentwise_sin();
  f.radius = 1.0;
  const CVector a = 100.0 * CVector::Ones(8);
  EXPECT_THROW(solve_semilinear(op, FractionalOrder(0.5), a, f, TimeGrid::uniform(0.5, 5)), BallViolationError);
}

TEST(SolveSemilinear, ContractionFailureOnLongInterval) {
  DiagonalOperator op = DiagonalOperator::scalar(-1.0);
  NonlinearForcing f;
  f.map = [](double, const CVector& u) { return CVector(60.0 * u); };
  f.lipschitz = 60.0;
  SemilinearOptions opt;
  opt.gamma_exp = 0.0;
  try {
    solve_semilinear(op, FractionalOrder(0.5), one(), f, TimeGrid::uniform(1.0, 20), opt);
    FAIL() << "expected ContractionError";
  } catch (const ContractionError& e) {
    EXPECT_GE(e.ratios().back(), 1.0);
    EXPECT_NE(std::string(e.what()).find("reduce T"), std::string::npos);
  }
}

TEST(SolveSemilinear, NormSubstitutedWithoutEigen) {
  DenseOperator op(RMatrix{{-2.0, 1.0}, {0.0, -3.0}});
  const auto rep = solve_semilinear(op, FractionalOrder(0.5), CVector::Ones(2), componentwise_sin(),
                                    TimeGrid::uniform(0.2, 10));
  EXPECT_TRUE(rep.norm_substituted);
  EXPECT_FALSE(rep.note.empty());
}

TEST(EquationResidual, DecreasesUnderRefinement) {
  DirichletLaplacian1D op(16);
  const double alpha = 0.5;
  const FractionalOrder order(alpha);
  const CVector a = random_real(16, 12);
  const CVector b = random_real(16, 13);
  auto fcb = [b](double t) { return CVector(std::sin(t) * b); };
  auto residual = [&](Index n) {
    const TimeGrid grid = TimeGrid::uniform(1.0, n);
    const auto u = solve_linear(op, order, a, ForcingTerm::callback(fcb), grid).trajectory;
    const auto r = equation_residual(op, order, u, a, GridFunction<Complex>::sample(grid, 16, fcb));
    double s = 0.0;
    for (Index i = 0; i < grid.size(); ++i) {
      if (grid[i] >= 0.25) {
        s = std::max(s, r[i].norm());
      }
    }
    return s;
  };
  const double r1 = residual(64);
  const double r2 = residual(128);
  const double r3 = residual(256);
  EXPECT_LT(r2, r1);
  EXPECT_LT(r3, r2);
  EXPECT_GE(std::log2(r2 / r3), 1.0 - alpha);
}
