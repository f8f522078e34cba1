#include "fracop/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <random>
#include <sstream>

namespace fracop {

SectorSpec::SectorSpec(double gamma_, double c_bound_) : gamma(gamma_), c_bound(c_bound_) {
  if (!(gamma > kPi / 2.0 && gamma < kPi)) {
    throw DomainError("SectorSpec: gamma must lie in (pi/2, pi)");
  }
  if (c_bound == 0.0) {
    // Sharp constant for normal operators with spectrum on (-inf, 0).
    c_bound = 1.0 / std::sin(gamma);
  }
  if (!(c_bound > 0.0)) {
    throw DomainError("SectorSpec: c_bound must be positive");
  }
}

CMatrix ResolventFactor::solve(const CMatrix& b) const {
  CMatrix x(b.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    x.col(j) = solve(CVector(b.col(j)));
  }
  return x;
}

RVector SectorialOperator::apply(const RVector& v) const {
  if (!is_real()) {
    throw UnsupportedOperatorError(name() + ": real apply on a complex operator");
  }
  return apply(CVector(v.cast<Complex>())).real();
}

std::unique_ptr<ResolventFactor> SectorialOperator::factorize(Complex z) const {
  if (const Eigendecomposition* e = eigen()) {
    for (Index k = 0; k < e->values.size(); ++k) {
      const double mu = e->values(k);
      if (std::abs(z - mu) <= 1e-12 * std::max(std::abs(mu), 1.0)) {
        std::ostringstream msg;
        msg << name() << ": resolvent requested at z = " << z << ", within 1e-12 of eigenvalue " << mu;
        throw NearSingularError(msg.str());
      }
    }
  }
  return do_factorize(z);
}

CMatrix SectorialOperator::dense() const {
  const Index n = dim();
  CMatrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    m.col(j) = apply(CVector(CVector::Unit(n, j)));
  }
  return m;
}

std::optional<double> SectorialOperator::min_spectral_modulus() const {
  if (const Eigendecomposition* e = eigen()) {
    return e->values.cwiseAbs().minCoeff();
  }
  return std::nullopt;
}

double SectorialOperator::spectral_bound() const {
  if (const Eigendecomposition* e = eigen()) {
    return e->values.cwiseAbs().maxCoeff();
  }
  return dense().cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

void check_outside_sector(const CVector& mu, double gamma, const std::string& who) {
  for (Index k = 0; k < mu.size(); ++k) {
    if (mu(k) == Complex(0.0, 0.0)) {
      throw DomainError(who + ": 0 must lie in the resolvent set");
    }
    if (std::abs(std::arg(mu(k))) < gamma) {
      std::ostringstream msg;
      msg << who << ": eigenvalue " << mu(k) << " lies inside the sector |arg| < " << gamma;
      throw DomainError(msg.str());
    }
  }
}

class DiagonalFactor final : public ResolventFactor {
public:
  explicit DiagonalFactor(CVector inv) : inv_(std::move(inv)) {}
  CVector solve(const CVector& b) const override { return inv_.cwiseProduct(b); }

private:
  CVector inv_;
};

// (z - A) for tridiagonal A, factored with partial pivoting in the LAPACK
// gttrf layout: unit lower bidiagonal L with row swaps, upper U with two
// superdiagonals.
class TridiagonalFactor final : public ResolventFactor {
public:
  TridiagonalFactor(CVector dl, CVector d, CVector du, double scale)
      : dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)) {
    const Index n = d_.size();
    du2_ = CVector::Zero(std::max<Index>(n - 2, 0));
    pivot_.assign(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), false);
    for (Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d_(i)) >= std::abs(dl_(i))) {
        if (d_(i) != Complex(0.0, 0.0)) {
          const Complex fact = dl_(i) / d_(i);
          dl_(i) = fact;
          d_(i + 1) -= fact * du_(i);
        }
      } else {
        const Complex fact = d_(i) / dl_(i);
        d_(i) = dl_(i);
        dl_(i) = fact;
        const Complex temp = du_(i);
        du_(i) = d_(i + 1);
        d_(i + 1) = temp - fact * d_(i + 1);
        if (i + 2 < n) {
          du2_(i) = du_(i + 1);
          du_(i + 1) = -fact * du_(i + 1);
        }
        pivot_[static_cast<std::size_t>(i)] = true;
      }
    }
    for (Index i = 0; i < n; ++i) {
      if (std::abs(d_(i)) <= 1e-14 * scale) {
        throw NearSingularError("tridiagonal resolvent: pivot collapsed, z is numerically an eigenvalue");
      }
    }
  }

  CVector solve(const CVector& rhs) const override {
    const Index n = d_.size();
    CVector b = rhs;
    for (Index i = 0; i + 1 < n; ++i) {
      if (!pivot_[static_cast<std::size_t>(i)]) {
        b(i + 1) -= dl_(i) * b(i);
      } else {
        const Complex temp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = temp - dl_(i) * b(i);
      }
    }
    b(n - 1) /= d_(n - 1);
    if (n > 1) {
      b(n - 2) = (b(n - 2) - du_(n - 2) * b(n - 1)) / d_(n - 2);
    }
    for (Index i = n - 3; i >= 0; --i) {
      b(i) = (b(i) - du_(i) * b(i + 1) - du2_(i) * b(i + 2)) / d_(i);
    }
    return b;
  }

private:
  CVector dl_;
  CVector d_;
  CVector du_;
  CVector du2_;
  std::vector<bool> pivot_;
};

class DenseFactor final : public ResolventFactor {
public:
  explicit DenseFactor(const CMatrix& m) : lu_(m) {
    if (!(lu_.rcond() > 1e-15)) {
      throw NearSingularError("dense resolvent: (z - A) is numerically singular");
    }
  }
  CVector solve(const CVector& b) const override { return lu_.solve(b); }

private:
  Eigen::PartialPivLU<CMatrix> lu_;
};

class ShiftedFactor final : public ResolventFactor {
public:
  explicit ShiftedFactor(std::unique_ptr<ResolventFactor> inner) : inner_(std::move(inner)) {}
  CVector solve(const CVector& b) const override { return inner_->solve(b); }

private:
  std::unique_ptr<ResolventFactor> inner_;
};

std::optional<Eigendecomposition> symmetric_eigen(const RMatrix& a) {
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(a.cwiseAbs().maxCoeff(), 1e-300)) {
    return std::nullopt;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
  return Eigendecomposition{es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

// ---------------------------------------------------------------- diagonal

DiagonalOperator::DiagonalOperator(CVector mu, double gamma, int)
    : SectorialOperator(SectorSpec(gamma)), mu_(std::move(mu)) {
  if (mu_.size() == 0) {
    throw DomainError("DiagonalOperator: empty spectrum");
  }
  check_outside_sector(mu_, gamma, "DiagonalOperator");
  if (mu_.imag().cwiseAbs().maxCoeff() == 0.0) {
    eig_ = Eigendecomposition{mu_.real(), RMatrix::Identity(mu_.size(), mu_.size())};
  }
  // Normal operator: |lambda| / |lambda - mu| <= 1 / sin(angular gap) on the sector.
  double gap = kPi;
  for (Index k = 0; k < mu_.size(); ++k) {
    gap = std::min(gap, std::abs(std::arg(mu_(k))) - gamma);
  }
  const double c = gap >= kPi / 2.0 ? 1.0 : 1.0 / std::sin(std::max(gap, 1e-3));
  set_sector(SectorSpec(gamma, c));
}

DiagonalOperator::DiagonalOperator(const RVector& mu, double gamma)
    : DiagonalOperator(CVector(mu.cast<Complex>()), gamma, 0) {}

DiagonalOperator DiagonalOperator::complex_spectrum(const CVector& mu, double gamma) {
  return DiagonalOperator(mu, gamma, 0);
}

CVector DiagonalOperator::apply(const CVector& v) const { return mu_.cwiseProduct(v); }

CMatrix DiagonalOperator::dense() const { return mu_.asDiagonal(); }

std::optional<double> DiagonalOperator::min_spectral_modulus() const {
  return mu_.cwiseAbs().minCoeff();
}

double DiagonalOperator::spectral_bound() const { return mu_.cwiseAbs().maxCoeff(); }

std::unique_ptr<ResolventFactor> DiagonalOperator::do_factorize(Complex z) const {
  CVector inv(mu_.size());
  for (Index k = 0; k < mu_.size(); ++k) {
    if (std::abs(z - mu_(k)) <= 1e-12 * std::max(std::abs(mu_(k)), 1.0)) {
      std::ostringstream msg;
      msg << "diagonal: resolvent requested at z = " << z << ", within 1e-12 of eigenvalue " << mu_(k);
      throw NearSingularError(msg.str());
    }
    inv(k) = 1.0 / (z - mu_(k));
  }
  return std::make_unique<DiagonalFactor>(std::move(inv));
}

// ------------------------------------------------------------- tridiagonal

TridiagonalOperator::TridiagonalOperator(RVector lower, RVector diag, RVector upper, double gamma)
    : SectorialOperator(SectorSpec(gamma)),
      lower_(std::move(lower)),
      diag_(std::move(diag)),
      upper_(std::move(upper)) {
  if (diag_.size() < 1 || lower_.size() != diag_.size() - 1 || upper_.size() != diag_.size() - 1) {
    throw DomainError("TridiagonalOperator: inconsistent band sizes");
  }
}

CVector TridiagonalOperator::apply(const CVector& v) const {
  const Index n = dim();
  if (v.size() != n) {
    throw DomainError("apply: dimension mismatch");
  }
  CVector out = diag_.cast<Complex>().cwiseProduct(v);
  if (n > 1) {
    out.head(n - 1) += upper_.cast<Complex>().cwiseProduct(v.tail(n - 1));
    out.tail(n - 1) += lower_.cast<Complex>().cwiseProduct(v.head(n - 1));
  }
  return out;
}

CMatrix TridiagonalOperator::dense() const {
  const Index n = dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = diag_(i);
    if (i + 1 < n) {
      m(i, i + 1) = upper_(i);
      m(i + 1, i) = lower_(i);
    }
  }
  return m;
}

double TridiagonalOperator::spectral_bound() const {
  if (eig_) {
    return eig_->values.cwiseAbs().maxCoeff();
  }
  double s = 0.0;
  for (Index i = 0; i < dim(); ++i) {
    double row = std::abs(diag_(i));
    if (i > 0) {
      row += std::abs(lower_(i - 1));
    }
    if (i + 1 < dim()) {
      row += std::abs(upper_(i));
    }
    s = std::max(s, row);
  }
  return s;
}

std::optional<double> TridiagonalOperator::min_spectral_modulus() const {
  if (eig_) {
    return eig_->values.cwiseAbs().minCoeff();
  }
  return std::nullopt;
}

std::unique_ptr<ResolventFactor> TridiagonalOperator::do_factorize(Complex z) const {
  CVector dl = -lower_.cast<Complex>();
  CVector du = -upper_.cast<Complex>();
  CVector d = (-diag_).cast<Complex>();
  d.array() += z;
  return std::make_unique<TridiagonalFactor>(std::move(dl), std::move(d), std::move(du),
                                             std::abs(z) + spectral_bound());
}

DirichletLaplacian1D::DirichletLaplacian1D(Index n, double gamma)
    : TridiagonalOperator(RVector::Constant(std::max<Index>(n - 1, 0), 1.0),
                          RVector::Constant(std::max<Index>(n, 1), -2.0),
                          RVector::Constant(std::max<Index>(n - 1, 0), 1.0), gamma),
      h_(1.0 / static_cast<double>(n + 1)) {
  if (n < 1) {
    throw DomainError("DirichletLaplacian1D: need n >= 1");
  }
  const double inv_h2 = 1.0 / (h_ * h_);
  lower_ *= inv_h2;
  upper_ *= inv_h2;
  diag_ *= inv_h2;
  Eigendecomposition e;
  e.values.resize(n);
  e.vectors.resize(n, n);
  const double scale = std::sqrt(2.0 * h_);
  for (Index k = 1; k <= n; ++k) {
    const double s = std::sin(k * kPi * h_ / 2.0);
    e.values(k - 1) = -4.0 * inv_h2 * s * s;
    for (Index j = 1; j <= n; ++j) {
      e.vectors(j - 1, k - 1) = scale * std::sin(k * kPi * j * h_);
    }
  }
  set_eigen(std::move(e));
}

RVector DirichletLaplacian1D::nodes() const {
  return RVector::LinSpaced(dim(), h_, h_ * static_cast<double>(dim()));
}

RVector VariableElliptic1D::off_diagonal(Index n, const std::function<double(double)>& a) {
  const double h = 1.0 / static_cast<double>(n + 1);
  RVector off(std::max<Index>(n - 1, 0));
  for (Index j = 1; j < n; ++j) {
    off(j - 1) = a((j + 0.5) * h) / (h * h);
  }
  return off;
}

RVector VariableElliptic1D::main_diagonal(Index n, const std::function<double(double)>& a,
                                          const std::function<double(double)>& c) {
  const double h = 1.0 / static_cast<double>(n + 1);
  RVector d(n);
  for (Index j = 1; j <= n; ++j) {
    d(j - 1) = -(a((j - 0.5) * h) + a((j + 0.5) * h)) / (h * h) + c(j * h);
  }
  return d;
}

VariableElliptic1D::VariableElliptic1D(Index n, const std::function<double(double)>& a,
                                       const std::function<double(double)>& c, double gamma)
    : TridiagonalOperator(off_diagonal(std::max<Index>(n, 1), a), main_diagonal(std::max<Index>(n, 1), a, c),
                          off_diagonal(std::max<Index>(n, 1), a), gamma),
      h_(1.0 / static_cast<double>(n + 1)),
      kappa_(std::numeric_limits<double>::infinity()) {
  if (n < 1) {
    throw DomainError("VariableElliptic1D: need n >= 1");
  }
  for (Index j = 0; j <= n; ++j) {
    kappa_ = std::min(kappa_, a((j + 0.5) * h_));
  }
  if (!(kappa_ > 0.0)) {
    throw DomainError("VariableElliptic1D: diffusion coefficient must be bounded below by kappa > 0");
  }
  for (Index j = 1; j <= n; ++j) {
    if (!(c(j * h_) <= 0.0)) {
      throw DomainError("VariableElliptic1D: reaction coefficient must satisfy c <= 0");
    }
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag_, lower_, Eigen::ComputeEigenvectors);
  set_eigen(Eigendecomposition{es.eigenvalues(), es.eigenvectors()});
}

// ------------------------------------------------------------------- dense

DenseOperator::DenseOperator(RMatrix a, double gamma)
    : SectorialOperator(SectorSpec(gamma)), a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    throw DomainError("DenseOperator: need a non-empty square matrix");
  }
  eig_ = symmetric_eigen(a_);
  if (eig_) {
    check_outside_sector(eig_->values.cast<Complex>(), gamma, "DenseOperator");
  } else {
    Eigen::EigenSolver<RMatrix> es(a_, false);
    check_outside_sector(es.eigenvalues(), gamma, "DenseOperator");
    set_sector(SectorSpec(gamma, 0.0));
  }
}

CVector DenseOperator::apply(const CVector& v) const { return a_.cast<Complex>() * v; }

std::optional<double> DenseOperator::min_spectral_modulus() const {
  if (eig_) {
    return eig_->values.cwiseAbs().minCoeff();
  }
  Eigen::EigenSolver<RMatrix> es(a_, false);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

double DenseOperator::spectral_bound() const {
  if (eig_) {
    return eig_->values.cwiseAbs().maxCoeff();
  }
  return a_.cwiseAbs().rowwise().sum().maxCoeff();
}

std::unique_ptr<ResolventFactor> DenseOperator::do_factorize(Complex z) const {
  CMatrix m = -a_.cast<Complex>();
  m.diagonal().array() += z;
  return std::make_unique<DenseFactor>(m);
}

// ----------------------------------------------------------------- shifted

ShiftedOperator::ShiftedOperator(OperatorPtr base, double c)
    : SectorialOperator(base->sector()), base_(std::move(base)), c_(c) {
  if (const Eigendecomposition* e = base_->eigen()) {
    Eigendecomposition s = *e;
    s.values.array() += c_;
    eig_ = std::move(s);
  }
}

CVector ShiftedOperator::apply(const CVector& v) const { return base_->apply(v) + c_ * v; }

std::optional<double> ShiftedOperator::min_spectral_modulus() const {
  if (eig_) {
    return eig_->values.cwiseAbs().minCoeff();
  }
  return std::nullopt;
}

double ShiftedOperator::spectral_bound() const { return base_->spectral_bound() + std::abs(c_); }

std::unique_ptr<ResolventFactor> ShiftedOperator::do_factorize(Complex z) const {
  return std::make_unique<ShiftedFactor>(base_->factorize(z - c_));
}

// ------------------------------------------------------------ free functions

CVector fractional_power_apply(const SectorialOperator& op, double beta, const CVector& v) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("fractional_power_apply: beta must lie in [0,1]");
  }
  const Eigendecomposition* e = op.eigen();
  if (e == nullptr) {
    throw UnsupportedOperatorError(op.name() + ": fractional powers need an eigendecomposition");
  }
  if (v.size() != op.dim()) {
    throw DomainError("fractional_power_apply: dimension mismatch");
  }
  const RVector scale = (-e->values).array().pow(beta);
  const CVector coeff = e->vectors.transpose().cast<Complex>() * v;
  return e->vectors.cast<Complex>() * scale.cast<Complex>().cwiseProduct(coeff);
}

RVector fractional_power_apply(const SectorialOperator& op, double beta, const RVector& v) {
  return fractional_power_apply(op, beta, CVector(v.cast<Complex>())).real();
}

namespace {

double p_norm(const CVector& x, double p) { return std::pow(x.cwiseAbs().array().pow(p).sum(), 1.0 / p); }

// dual_p(y): the unit q-norm vector attaining Re(dual^H y) = ||y||_p
CVector dual_vector(const CVector& y, double p) {
  const double n = p_norm(y, p);
  CVector d(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    d(i) = a == 0.0 ? Complex(0.0, 0.0) : (y(i) / a) * std::pow(a / n, p - 1.0);
  }
  return d;
}

double power_p_norm(const CMatrix& m, double p, const CVector& start) {
  const double q = p / (p - 1.0);
  CVector x = start / p_norm(start, p);
  double est = 0.0;
  for (int it = 0; it < 100; ++it) {
    const CVector y = m * x;
    est = std::max(est, p_norm(y, p));
    if (est == 0.0) {
      return 0.0;
    }
    const CVector z = m.adjoint() * dual_vector(y, p);
    if (p_norm(z, q) <= (z.adjoint() * x)(0).real() * (1.0 + 1e-12)) {
      break;
    }
    x = dual_vector(z, q);
  }
  return est;
}

double l2_power(const std::function<CVector(const CVector&)>& apply,
                const std::function<CVector(const CVector&)>& apply_adjoint, Index n) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  CVector x(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = Complex(nd(rng), nd(rng));
  }
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < 50; ++it) {
    CVector y = apply_adjoint(apply(x));
    const double nrm = y.norm();
    if (nrm == 0.0) {
      return 0.0;
    }
    const double next = std::sqrt(nrm);
    x = y / nrm;
    if (std::abs(next - est) <= 1e-8 * next) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

}  // namespace

double matrix_norm(const CMatrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::L1:
      return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::LInf:
      return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::L2:
      if (m.rows() <= 256 && m.cols() <= 256) {
        Eigen::BDCSVD<CMatrix> svd(m);
        return svd.singularValues()(0);
      }
      return l2_power([&](const CVector& v) { return CVector(m * v); },
                      [&](const CVector& v) { return CVector(m.adjoint() * v); }, m.cols());
    case NormKind::L4: {
      // Local maximizers: take the best of a few deterministic starts.
      double best = power_p_norm(m, 4.0, CVector::Ones(m.cols()));
      std::mt19937_64 rng(99);
      std::normal_distribution<double> nd;
      for (int s = 0; s < 4; ++s) {
        CVector x(m.cols());
        for (Index i = 0; i < x.size(); ++i) {
          x(i) = Complex(nd(rng), nd(rng));
        }
        best = std::max(best, power_p_norm(m, 4.0, x));
      }
      for (Index j = 0; j < m.cols(); ++j) {
        best = std::max(best, p_norm(m.col(j), 4.0));
      }
      return best;
    }
  }
  return 0.0;
}

double resolvent_norm(const SectorialOperator& op, Complex lambda, NormKind kind) {
  const Index n = op.dim();
  auto factor = op.factorize(lambda);
  if (kind == NormKind::L2 && n > 256 && op.eigen() != nullptr) {
    // Real symmetric A: (lambda - A)^{-H} = (conj(lambda) - A)^{-1}.
    auto adjoint = op.factorize(std::conj(lambda));
    return l2_power([&](const CVector& v) { return factor->solve(v); },
                    [&](const CVector& v) { return adjoint->solve(v); }, n);
  }
  return matrix_norm(factor->solve(CMatrix(CMatrix::Identity(n, n))), kind);
}

std::vector<Complex> sector_sweep(double angle, double lo, double hi, Index per_ray) {
  std::vector<Complex> out;
  for (Index i = 0; i < per_ray; ++i) {
    const double r = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(per_ray - 1));
    out.push_back(std::polar(r, angle));
    out.push_back(std::polar(r, -angle));
    out.push_back(Complex(r, 0.0));
  }
  return out;
}

SectorReport verify_sector_bound(const SectorialOperator& op, double gamma,
                                 std::span<const Complex> samples, NormKind kind) {
  if (!(gamma > kPi / 2.0 && gamma < kPi)) {
    throw DomainError("verify_sector_bound: gamma must lie in (pi/2, pi)");
  }
  if (samples.empty()) {
    throw DomainError("verify_sector_bound: no samples");
  }
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const Complex& l : samples) {
    if (l == Complex(0.0, 0.0) || std::abs(std::arg(l)) >= gamma) {
      std::ostringstream msg;
      msg << "verify_sector_bound: sample " << l << " outside the sector |arg| < " << gamma;
      throw DomainError(msg.str());
    }
    rmin = std::min(rmin, std::abs(l));
    rmax = std::max(rmax, std::abs(l));
  }
  if (rmax < 1e6 * rmin) {
    throw DomainError("verify_sector_bound: sample moduli must span at least 6 decades");
  }
  SectorReport rep;
  for (const Complex& l : samples) {
    const double v = std::abs(l) * resolvent_norm(op, l, kind);
    rep.lambdas.push_back(l);
    rep.values.push_back(v);
    rep.sup = std::max(rep.sup, v);
  }
  rep.sup_extended = rep.sup;
  for (const Complex& l : samples) {
    for (double f : {0.1, 10.0}) {
      const Complex e = l * f;
      if (std::abs(e) < rmin || std::abs(e) > rmax) {
        rep.sup_extended = std::max(rep.sup_extended, std::abs(e) * resolvent_norm(op, e, kind));
      }
    }
  }
  rep.stable = rep.sup_extended <= 1.1 * rep.sup;
  return rep;
}

}  // namespace fracop
