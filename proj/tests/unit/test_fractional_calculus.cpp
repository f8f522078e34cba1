#include "fracop/fractional_calculus.hpp"

#include "fracop/mittag_leffler.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace fracop;

namespace {

GridFunction<double> scalar_samples(const TimeGrid& g, double (*f)(double)) {
  return GridFunction<double>::sample(g, 1, [f](double t) { return RVector::Constant(1, f(t)); });
}

double sup_abs_diff(const GridFunction<double>& u, const std::function<double(double)>& f,
                    Index first = 0) {
  double e = 0.0;
  for (Index i = first; i < u.size(); ++i) {
    e = std::max(e, std::abs(u[i](0) - f(u.time(i))));
  }
  return e;
}

}  // namespace

TEST(TimeGrid, RejectsInvalidNodes) {
  EXPECT_THROW(TimeGrid({0.0}), DomainError);
  EXPECT_THROW(TimeGrid({0.1, 0.2}), DomainError);
  EXPECT_THROW(TimeGrid({0.0, 0.2, 0.2}), DomainError);
  EXPECT_NO_THROW(TimeGrid({0.0, 0.5}));
}

TEST(TimeGrid, Constructors) {
  const TimeGrid u = TimeGrid::uniform(2.0, 4);
  EXPECT_EQ(u.size(), 5);
  EXPECT_DOUBLE_EQ(u[2], 1.0);
  const TimeGrid g = TimeGrid::graded(1.0, 4, 2.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0 / 16.0);
  const TimeGrid geo = TimeGrid::geometric(1e-3, 1.0, 4);
  EXPECT_DOUBLE_EQ(geo[1], 1e-3);
  EXPECT_NEAR(geo[2], 1e-2, 1e-16);
  EXPECT_EQ(geo.final_time(), 1.0);
  EXPECT_EQ(u.refined().coarsened(), u);
}

TEST(RiemannLiouville, ConstantIsExact) {
  const TimeGrid g = TimeGrid::uniform(2.0, 64);
  const auto w = riemann_liouville_integral(scalar_samples(g, [](double) { return 1.0; }), 0.5);
  for (Index i = 1; i < g.size(); ++i) {
    const double exact = std::pow(g[i], 0.5) / std::tgamma(1.5);
    EXPECT_NEAR(w[i](0), exact, 1e-12 * exact);
  }
}

TEST(RiemannLiouville, ZeroMapsToZero) {
  const TimeGrid g = TimeGrid::uniform(1.0, 16);
  const auto w = riemann_liouville_integral(GridFunction<double>(g, 3), 0.7);
  EXPECT_EQ(w.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(RiemannLiouville, LinearIsExact) {
  const TimeGrid g = TimeGrid::graded(1.5, 40, 1.7);
  const auto w = riemann_liouville_integral(scalar_samples(g, [](double t) { return t; }), 0.5);
  for (Index i = 1; i < g.size(); ++i) {
    const double exact = std::tgamma(2.0) / std::tgamma(2.5) * std::pow(g[i], 1.5);
    EXPECT_NEAR(w[i](0), exact, 1e-12 * exact);
  }
}

TEST(RiemannLiouville, QuadraticConvergesSecondOrder) {
  auto err = [](Index n) {
    const TimeGrid g = TimeGrid::uniform(1.0, n);
    const auto w = riemann_liouville_integral(scalar_samples(g, [](double t) { return t * t; }), 0.4);
    return sup_abs_diff(w, [](double t) { return 2.0 / std::tgamma(3.4) * std::pow(t, 2.4); });
  };
  const double e1 = err(32);
  const double e2 = err(64);
  EXPECT_GT(std::log2(e1 / e2), 1.9);
}

TEST(RiemannLiouville, RejectsBadOrder) {
  const TimeGrid g = TimeGrid::uniform(1.0, 4);
  EXPECT_THROW(riemann_liouville_integral(GridFunction<double>(g, 1), 0.0), DomainError);
  EXPECT_THROW(riemann_liouville_integral(GridFunction<double>(g, 1), 1.5), DomainError);
}

TEST(RiemannLiouville, Linearity) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const TimeGrid g = TimeGrid::graded(1.0, 30, 1.5);
  GridFunction<double> u(g, 2), v(g, 2);
  for (Index i = 0; i < g.size(); ++i) {
    u[i] = RVector::NullaryExpr(2, [&] { return nd(rng); });
    v[i] = RVector::NullaryExpr(2, [&] { return nd(rng); });
  }
  const auto lhs = riemann_liouville_integral(2.5 * u + v, 0.6);
  const auto rhs = 2.5 * riemann_liouville_integral(u, 0.6) + riemann_liouville_integral(v, 0.6);
  EXPECT_LE((lhs - rhs).sup_norm(), 1e-13 * rhs.sup_norm());
}

TEST(RiemannLiouville, SemigroupUnderRefinement) {
  auto err = [](Index n) {
    const TimeGrid g = TimeGrid::uniform(1.0, n);
    const auto v = scalar_samples(g, [](double t) { return std::cos(3.0 * t); });
    const auto lhs = riemann_liouville_integral(riemann_liouville_integral(v, 0.3), 0.4);
    const auto rhs = riemann_liouville_integral(v, 0.7);
    return (lhs - rhs).sup_norm();
  };
  // J^0.3 v behaves like t^0.3 near 0, so the first-interval error decays like h^0.7.
  const double e1 = err(64);
  const double e2 = err(256);
  EXPECT_LT(e2, e1 / 2.5);
  EXPECT_LT(e2, 5e-3);
}

TEST(CaputoL1, PowerFunctionConverges) {
  // d^alpha t^alpha = Gamma(1 + alpha)
  const FractionalOrder order(0.5);
  auto err = [&](Index n) {
    const TimeGrid g = TimeGrid::uniform(1.0, n);
    const auto d = caputo_l1(scalar_samples(g, [](double t) { return std::sqrt(t); }), order);
    return std::abs(d[n](0) - std::tgamma(1.5));
  };
  const double e1 = err(64);
  const double e2 = err(128);
  const double e3 = err(256);
  EXPECT_LT(e3, e2);
  EXPECT_LT(e2, e1);
  EXPECT_LT(e3, 1e-2);
}

TEST(CaputoL1, SmoothFunctionOrderTwoMinusAlpha) {
  const FractionalOrder order(0.4);
  auto err = [&](Index n) {
    const TimeGrid g = TimeGrid::uniform(1.0, n);
    const auto d = caputo_l1(scalar_samples(g, [](double t) { return t * t; }), order);
    return sup_abs_diff(d, [](double t) { return 2.0 / std::tgamma(2.6) * std::pow(t, 1.6); }, 1);
  };
  const double rate = std::log2(err(128) / err(256));
  EXPECT_GT(rate, 1.5);
}

TEST(CaputoL1, ConstantGivesZero) {
  const TimeGrid g = TimeGrid::graded(1.0, 20, 2.0);
  const auto d = caputo_l1(scalar_samples(g, [](double) { return 4.2; }), FractionalOrder(0.3));
  EXPECT_EQ(d.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(CaputoL1, InvertsRiemannLiouville) {
  const FractionalOrder order(0.6);
  auto err = [&](Index n) {
    const TimeGrid g = TimeGrid::uniform(1.0, n);
    const auto w = scalar_samples(g, [](double t) { return std::sin(2.0 * t); });
    const auto back = caputo_l1(riemann_liouville_integral(w, 0.6), order);
    double e = 0.0;
    for (Index i = 1; i < g.size(); ++i) {
      e = std::max(e, std::abs(back[i](0) - w[i](0)));
    }
    return e;
  };
  const double e1 = err(64);
  const double e2 = err(256);
  EXPECT_GT(std::log(e1 / e2) / std::log(4.0), 0.4);
}

TEST(CaputoL1, RejectsInvalidOrder) {
  EXPECT_THROW(FractionalOrder(0.0), DomainError);
  EXPECT_THROW(FractionalOrder(1.0), DomainError);
}

TEST(NumericalLaplace, Constant) {
  const TimeGrid g = TimeGrid::uniform(40.0, 4000);
  const auto lv = numerical_laplace(scalar_samples(g, [](double) { return 1.0; }), Complex(1.0, 0.0));
  EXPECT_NEAR(lv.value(0).real(), 1.0 - std::exp(-40.0), 1e-12);
  EXPECT_NEAR(lv.tail_bound, std::exp(-40.0), 1e-25);
}

TEST(NumericalLaplace, Exponential) {
  const double T = 30.0;
  const TimeGrid g = TimeGrid::uniform(T, 6000);
  const auto lv =
      numerical_laplace(scalar_samples(g, [](double t) { return std::exp(-t); }), Complex(1.0, 0.0));
  EXPECT_NEAR(lv.value(0).real(), 0.5 * (1.0 - std::exp(-2.0 * T)), 2e-6);
}

TEST(NumericalLaplace, MittagLefflerTrajectory) {
  // L[E_{a,1}(-t^a)](lambda) = lambda^{a-1} / (lambda^a + 1)
  const double a = 0.5;
  const TimeGrid g = TimeGrid::geometric(1e-10, 60.0, 6000);
  const auto u = GridFunction<double>::sample(g, 1, [&](double t) {
    return RVector::Constant(1, ml(MLParams(a, 1.0), -std::pow(t, a)));
  });
  for (double lambda : {1.0, 2.0, 5.0}) {
    const auto lv = numerical_laplace(u, Complex(lambda, 0.0));
    const double exact = std::pow(lambda, a - 1.0) / (std::pow(lambda, a) + 1.0);
    EXPECT_NEAR(lv.value(0).real(), exact, 1e-6 * exact) << lambda;
  }
}

TEST(NumericalLaplace, RejectsLeftHalfPlane) {
  const TimeGrid g = TimeGrid::uniform(1.0, 4);
  EXPECT_THROW(numerical_laplace(GridFunction<double>(g, 1), Complex(0.0, 1.0)), DomainError);
}

TEST(GridFunctionCsv, RoundTrip) {
  const TimeGrid g = TimeGrid::graded(1.0, 7, 1.3);
  auto u = GridFunction<double>::sample(g, 2, [](double t) {
    RVector v(2);
    v << std::sin(t), 1.0 / 3.0 + t;
    return v;
  });
  std::stringstream ss;
  write_csv(ss, u);
  const auto back = read_csv(ss);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ((back - u).sup_norm(), 0.0);
}

TEST(GridFunctionCsv, ComplexHeader) {
  const TimeGrid g = TimeGrid::uniform(1.0, 1);
  GridFunction<Complex> u(g, 1);
  std::stringstream ss;
  write_csv(ss, u);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "t,v_0_re,v_0_im");
}
