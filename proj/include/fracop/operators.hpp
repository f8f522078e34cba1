#pragma once

#include "fracop/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace fracop {

/// Sector data: Sigma_gamma = {|arg lambda| < gamma} lies in the resolvent set
/// and |lambda| ||(lambda - A)^{-1}|| <= c_bound there.
struct SectorSpec {
  explicit SectorSpec(double gamma_ = 0.75 * kPi, double c_bound_ = 0.0);
  double gamma;
  double c_bound;
  double delta() const { return -std::cos(gamma); }
};

/// Self-adjoint spectral data: A = V diag(values) V^T with orthonormal V.
struct Eigendecomposition {
  RVector values;
  RMatrix vectors;
};

/// A factorization of (z - A) that can be reused for many right-hand sides.
class ResolventFactor {
public:
  virtual ~ResolventFactor() = default;
  virtual CVector solve(const CVector& b) const = 0;
  CMatrix solve(const CMatrix& b) const;
};

class SectorialOperator {
public:
  virtual ~SectorialOperator() = default;

  virtual Index dim() const = 0;
  virtual CVector apply(const CVector& v) const = 0;
  RVector apply(const RVector& v) const;

  /// Factorization of (z - A). Throws NearSingularError when z is within
  /// 1e-12 max(|mu|, 1) of a known eigenvalue mu or a pivot collapses.
  std::unique_ptr<ResolventFactor> factorize(Complex z) const;
  CVector resolvent_solve(Complex z, const CVector& b) const { return factorize(z)->solve(b); }

  /// Eigendecomposition for self-adjoint instances, nullptr otherwise.
  virtual const Eigendecomposition* eigen() const { return nullptr; }
  /// True if A has real entries (contour results for real data are then real).
  virtual bool is_real() const { return true; }
  virtual std::string name() const = 0;

  virtual CMatrix dense() const;
  /// Smallest |mu| over the spectrum when known.
  virtual std::optional<double> min_spectral_modulus() const;
  /// Largest |mu| when known; otherwise an upper bound (infinity norm).
  virtual double spectral_bound() const;

  const SectorSpec& sector() const noexcept { return sector_; }
  void set_sector(const SectorSpec& s) { sector_ = s; }

protected:
  explicit SectorialOperator(SectorSpec sector) : sector_(sector) {}
  virtual std::unique_ptr<ResolventFactor> do_factorize(Complex z) const = 0;

private:
  SectorSpec sector_;
};

using OperatorPtr = std::shared_ptr<const SectorialOperator>;

/// A = diag(mu). Exactly solvable; every mu must be nonzero and lie outside
/// the sector.
class DiagonalOperator final : public SectorialOperator {
public:
  explicit DiagonalOperator(const RVector& mu, double gamma = 0.75 * kPi);
  static DiagonalOperator complex_spectrum(const CVector& mu, double gamma = 0.75 * kPi);
  static DiagonalOperator scalar(double mu, double gamma = 0.75 * kPi) {
    return DiagonalOperator(RVector::Constant(1, mu), gamma);
  }

  Index dim() const override { return mu_.size(); }
  CVector apply(const CVector& v) const override;
  const Eigendecomposition* eigen() const override { return eig_ ? &*eig_ : nullptr; }
  bool is_real() const override { return eig_.has_value(); }
  std::string name() const override { return "diagonal"; }
  CMatrix dense() const override;
  std::optional<double> min_spectral_modulus() const override;
  double spectral_bound() const override;
  const CVector& eigenvalues() const { return mu_; }

private:
  DiagonalOperator(CVector mu, double gamma, int);
  std::unique_ptr<ResolventFactor> do_factorize(Complex z) const override;
  CVector mu_;
  std::optional<Eigendecomposition> eig_;
};

/// Real tridiagonal A with a complex partially pivoted LU for (z - A).
class TridiagonalOperator : public SectorialOperator {
public:
  TridiagonalOperator(RVector lower, RVector diag, RVector upper, double gamma);

  Index dim() const override { return diag_.size(); }
  CVector apply(const CVector& v) const override;
  CMatrix dense() const override;
  double spectral_bound() const override;
  std::optional<double> min_spectral_modulus() const override;
  const Eigendecomposition* eigen() const override { return eig_ ? &*eig_ : nullptr; }

protected:
  std::unique_ptr<ResolventFactor> do_factorize(Complex z) const override;
  void set_eigen(Eigendecomposition e) { eig_ = std::move(e); }

  RVector lower_;
  RVector diag_;
  RVector upper_;
  std::optional<Eigendecomposition> eig_;
};

/// Second-difference Dirichlet Laplacian on N interior nodes of (0, 1), h = 1/(N+1).
class DirichletLaplacian1D final : public TridiagonalOperator {
public:
  explicit DirichletLaplacian1D(Index n, double gamma = 0.75 * kPi);
  std::string name() const override { return "laplacian1d"; }
  double mesh_width() const { return h_; }
  /// x_j = j h, j = 1..N
  RVector nodes() const;

private:
  double h_;
};

/// A v = D(a D v) + c v with a >= kappa > 0 sampled at cell midpoints and
/// c <= 0 at the nodes; Dirichlet ends.
class VariableElliptic1D final : public TridiagonalOperator {
public:
  VariableElliptic1D(Index n, const std::function<double(double)>& a,
                     const std::function<double(double)>& c, double gamma = 0.75 * kPi);
  std::string name() const override { return "elliptic1d"; }
  double mesh_width() const { return h_; }
  double kappa() const { return kappa_; }

private:
  static RVector off_diagonal(Index n, const std::function<double(double)>& a);
  static RVector main_diagonal(Index n, const std::function<double(double)>& a,
                               const std::function<double(double)>& c);
  double h_;
  double kappa_;
};

/// Arbitrary dense real matrix; symmetric input gets an eigendecomposition.
class DenseOperator final : public SectorialOperator {
public:
  explicit DenseOperator(RMatrix a, double gamma = 0.75 * kPi);
  Index dim() const override { return a_.rows(); }
  CVector apply(const CVector& v) const override;
  const Eigendecomposition* eigen() const override { return eig_ ? &*eig_ : nullptr; }
  std::string name() const override { return "dense"; }
  CMatrix dense() const override { return a_.cast<Complex>(); }
  std::optional<double> min_spectral_modulus() const override;
  double spectral_bound() const override;
  const RMatrix& matrix() const { return a_; }

private:
  std::unique_ptr<ResolventFactor> do_factorize(Complex z) const override;
  RMatrix a_;
  std::optional<Eigendecomposition> eig_;
};

/// A0 + c I for a given A0.
class ShiftedOperator final : public SectorialOperator {
public:
  ShiftedOperator(OperatorPtr base, double c);
  Index dim() const override { return base_->dim(); }
  CVector apply(const CVector& v) const override;
  const Eigendecomposition* eigen() const override { return eig_ ? &*eig_ : nullptr; }
  bool is_real() const override { return base_->is_real(); }
  std::string name() const override { return base_->name() + "+shift"; }
  std::optional<double> min_spectral_modulus() const override;
  double spectral_bound() const override;

private:
  std::unique_ptr<ResolventFactor> do_factorize(Complex z) const override;
  OperatorPtr base_;
  double c_;
  std::optional<Eigendecomposition> eig_;
};

/// sum_n (-mu_n)^beta (v, phi_n) phi_n. Needs an eigendecomposition.
CVector fractional_power_apply(const SectorialOperator& op, double beta, const CVector& v);
RVector fractional_power_apply(const SectorialOperator& op, double beta, const RVector& v);

enum class NormKind { L1, L2, L4, LInf };

/// Induced matrix norm: exact for l1/linf, SVD for l2 with N <= 256 (power
/// iteration on M^H M above), Boyd's power method for l4.
double matrix_norm(const CMatrix& m, NormKind kind);

/// ||(lambda - A)^{-1}|| in the requested norm.
double resolvent_norm(const SectorialOperator& op, Complex lambda, NormKind kind = NormKind::L2);

struct SectorReport {
  double sup = 0.0;
  /// Sup over the sweep extended by one decade in each direction.
  double sup_extended = 0.0;
  bool stable = false;
  std::vector<Complex> lambdas;
  std::vector<double> values;
};

/// |lambda| ||(lambda - A)^{-1}|| over the samples, which must lie in the
/// sector of half-angle gamma and span at least 6 decades in modulus. Stable
/// if the extended sweep changes the sup by at most 10%.
SectorReport verify_sector_bound(const SectorialOperator& op, double gamma,
                                 std::span<const Complex> samples, NormKind kind = NormKind::L2);

/// Default sweep: both rays at +-angle plus the positive axis, moduli
/// log-spaced over [10^lo, 10^hi].
std::vector<Complex> sector_sweep(double angle, double lo, double hi, Index per_ray);

}  // namespace fracop
