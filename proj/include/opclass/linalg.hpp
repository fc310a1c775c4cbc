#pragma once

// Dense complex linear algebra kernel. Everything here is a pure function of
// its arguments and is templated on the real scalar type; the rest of the
// library instantiates it with double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "opclass/error.hpp"

namespace opclass {

using Index = Eigen::Index;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using Complex = std::complex<double>;

/// Numerical slack used by every decision. Each field is applied relative to
/// max(1, norm of the quantity being tested); see the individual predicates
/// for which norm.
template <typename Real = double>
struct TolerancePolicy {
  Real psd = Real(1e-10);       // least-eigenvalue slack
  Real eq = Real(1e-10);        // Frobenius matrix-equality slack
  Real rank = Real(1e-10);      // singular-value cutoff
  Real recon = Real(1e-9);      // reconstruction / orthonormality
  Real decision = Real(1e-8);   // definite NonMember threshold

  void validate() const {
    if (!(psd >= 0 && eq >= 0 && rank >= 0 && recon >= 0 && decision >= 0))
      throw Error(ErrorCode::InvalidArgument, "tolerances must be nonnegative");
  }
};
using Tolerances = TolerancePolicy<double>;

template <typename Real>
struct HermitianEigen {
  RVector<Real> eigenvalues;    // ascending
  CMatrix<Real> eigenvectors;   // columns, unitary
};

/// A subspace of C^n held as an orthonormal column basis (n x r, r may be 0).
template <typename Real>
struct Subspace {
  Index ambient_dim = 0;
  CMatrix<Real> basis;

  Index dim() const { return basis.cols(); }

  CMatrix<Real> projector() const {
    if (dim() == 0) return CMatrix<Real>::Zero(ambient_dim, ambient_dim);
    return basis * basis.adjoint();
  }

  static Subspace full(Index n) { return {n, CMatrix<Real>::Identity(n, n)}; }
  static Subspace zero(Index n) { return {n, CMatrix<Real>(n, 0)}; }
};

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

// ---------------------------------------------------------------------------
// Validation

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(std::real(a(i, j))) || !std::isfinite(std::imag(a(i, j)))) return false;
  return true;
}

/// Enforces the operator invariants: square, dim >= 1, finite entries.
template <typename Derived>
void require_operator(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::DimensionError, "matrix is " + std::to_string(a.rows()) + "x" +
                                               std::to_string(a.cols()) + ", expected square");
  if (a.rows() < 1) throw Error(ErrorCode::DimensionError, "matrix dimension must be >= 1");
  if (!all_finite(a)) throw Error(ErrorCode::DimensionError, "matrix has non-finite entries");
}

// ---------------------------------------------------------------------------
// Elementary operations

template <typename Derived>
CMatrix<RealOf<Derived>> adjoint(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint();
}

template <typename Derived>
RVector<RealOf<Derived>> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Real = RealOf<Derived>;
  if (a.size() == 0) return RVector<Real>(0);
  Eigen::JacobiSVD<CMatrix<Real>> svd{CMatrix<Real>(a)};
  return svd.singularValues();
}

/// Largest singular value.
template <typename Derived>
RealOf<Derived> operator_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return singular_values(a)(0);
}

template <typename Derived>
RealOf<Derived> spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  using Real = RealOf<Derived>;
  if (a.size() == 0) return 0;
  Eigen::ComplexEigenSolver<CMatrix<Real>> ces(CMatrix<Real>(a), /*computeEigenvectors=*/false);
  return ces.eigenvalues().cwiseAbs().maxCoeff();
}

/// A^n by repeated squaring; A^0 = I.
template <typename Derived>
CMatrix<RealOf<Derived>> matrix_power(const Eigen::MatrixBase<Derived>& a, int n) {
  using Real = RealOf<Derived>;
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "matrix_power needs n >= 0");
  CMatrix<Real> result = CMatrix<Real>::Identity(a.rows(), a.cols());
  CMatrix<Real> base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <typename Derived>
CMatrix<RealOf<Derived>> self_commutator(const Eigen::MatrixBase<Derived>& t) {
  return t.adjoint() * t - t * t.adjoint();
}

// ---------------------------------------------------------------------------
// Hermitian spectral calculus

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const TolerancePolicy<RealOf<Derived>>& tol) {
  using Real = RealOf<Derived>;
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "Hermitian test needs a square matrix");
  const Real asym = (a - a.adjoint()).norm();
  if (asym > tol.eq * std::max(Real(1), a.norm()))
    throw Error(ErrorCode::NotHermitian, "||A - A*||_F = " + std::to_string(double(asym)));
}

/// Symmetrizes (A + A*)/2 and diagonalizes; eigenvalues ascending.
template <typename Derived>
HermitianEigen<RealOf<Derived>> hermitian_eigen(const Eigen::MatrixBase<Derived>& a,
                                                const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Real = RealOf<Derived>;
  require_hermitian(a, tol);
  const CMatrix<Real> h = (a + a.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Smallest eigenvalue of a Hermitian matrix.
template <typename Derived>
RealOf<Derived> psd_defect(const Eigen::MatrixBase<Derived>& a, const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Real = RealOf<Derived>;
  require_hermitian(a, tol);
  if (a.size() == 0) return 0;
  const CMatrix<Real> h = (a + a.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& a, const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Real = RealOf<Derived>;
  return psd_defect(a, tol) >= -tol.psd * std::max(Real(1), operator_norm(a));
}

/// A^p for PSD A and real p > 0; eigenvalues within the PSD slack are clamped
/// to zero before exponentiation.
template <typename Derived>
CMatrix<RealOf<Derived>> psd_power(const Eigen::MatrixBase<Derived>& a, RealOf<Derived> p,
                                   const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Real = RealOf<Derived>;
  if (!(p > 0)) throw Error(ErrorCode::InvalidArgument, "psd_power needs p > 0");
  const auto eig = hermitian_eigen(a, tol);
  if (eig.eigenvalues.size() == 0) return CMatrix<Real>(a);
  const Real norm = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (eig.eigenvalues(0) < -tol.psd * std::max(Real(1), norm))
    throw Error(ErrorCode::NotPSD, "least eigenvalue " + std::to_string(double(eig.eigenvalues(0))));
  RVector<Real> w = eig.eigenvalues.unaryExpr([p](Real x) { return x > 0 ? std::pow(x, p) : Real(0); });
  return eig.eigenvectors * w.asDiagonal() * eig.eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Subspace algebra

/// Null space: right singular vectors whose singular value is at most
/// tol.rank * max(sigma_max, reference_norm). With sigma_max = 0 this is the
/// whole domain.
template <typename Derived>
Subspace<RealOf<Derived>> kernel(const Eigen::MatrixBase<Derived>& a, const TolerancePolicy<RealOf<Derived>>& tol = {},
                                 RealOf<Derived> reference_norm = 0) {
  using Real = RealOf<Derived>;
  const Index n = a.cols();
  if (n == 0) return Subspace<Real>::zero(0);
  if (a.rows() == 0) return Subspace<Real>::full(n);
  Eigen::JacobiSVD<CMatrix<Real>> svd(CMatrix<Real>(a), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Real smax = sv.size() ? sv(0) : Real(0);
  if (smax == 0) return Subspace<Real>::full(n);
  const Real cutoff = tol.rank * std::max(smax, reference_norm);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return {n, svd.matrixV().rightCols(n - rank)};
}

/// Orthonormal basis for the column span of `columns`.
template <typename Derived>
Subspace<RealOf<Derived>> span_of(const Eigen::MatrixBase<Derived>& columns, const TolerancePolicy<RealOf<Derived>>& tol = {}) {
  using Real = RealOf<Derived>;
  const Index n = columns.rows();
  if (columns.cols() == 0) return Subspace<Real>::zero(n);
  Eigen::JacobiSVD<CMatrix<Real>> svd(CMatrix<Real>(columns), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0) return Subspace<Real>::zero(n);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank * sv(0)) ++rank;
  return {n, svd.matrixU().leftCols(rank)};
}

template <typename Real>
Subspace<Real> orthogonal_complement(const Subspace<Real>& v, const TolerancePolicy<Real>& tol = {}) {
  if (v.dim() == 0) return Subspace<Real>::full(v.ambient_dim);
  return kernel(CMatrix<Real>(v.basis.adjoint()), tol, Real(1));
}

template <typename Real>
Subspace<Real> subspace_intersect(const Subspace<Real>& u, const Subspace<Real>& v, const TolerancePolicy<Real>& tol = {}) {
  if (u.ambient_dim != v.ambient_dim) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different spaces");
  const Index n = u.ambient_dim;
  const CMatrix<Real> id = CMatrix<Real>::Identity(n, n);
  CMatrix<Real> stacked(2 * n, n);
  stacked << id - u.projector(), id - v.projector();
  return kernel(stacked, tol, Real(1));
}

/// {x : A x in V} = ker((I - P_V) A).
template <typename Derived, typename Real>
Subspace<Real> preimage_in(const Eigen::MatrixBase<Derived>& a, const Subspace<Real>& v, const TolerancePolicy<Real>& tol = {}) {
  if (a.rows() != v.ambient_dim) throw Error(ErrorCode::DimensionMismatch, "preimage_in: dimension mismatch");
  const CMatrix<Real> id = CMatrix<Real>::Identity(v.ambient_dim, v.ambient_dim);
  const CMatrix<Real> residual = (id - v.projector()) * a;
  return kernel(residual, tol, operator_norm(a));
}

/// Largest sine of the principal angles between V and its projection onto U;
/// zero iff V is contained in U.
template <typename Real>
Real containment_gap(const Subspace<Real>& u, const Subspace<Real>& v) {
  if (u.ambient_dim != v.ambient_dim) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different spaces");
  if (v.dim() == 0) return 0;
  const CMatrix<Real> id = CMatrix<Real>::Identity(u.ambient_dim, u.ambient_dim);
  return operator_norm(CMatrix<Real>((id - u.projector()) * v.basis));
}

/// Q* A Q with Q the basis of V.
template <typename Derived, typename Real>
CMatrix<Real> compress(const Eigen::MatrixBase<Derived>& a, const Subspace<Real>& v) {
  if (v.dim() == 0) throw Error(ErrorCode::EmptySubspace, "cannot compress onto the zero subspace");
  if (a.rows() != v.ambient_dim || a.cols() != v.ambient_dim)
    throw Error(ErrorCode::DimensionMismatch, "compress: dimension mismatch");
  return v.basis.adjoint() * a * v.basis;
}

/// Block-diagonal direct sum; empty blocks are skipped.
template <typename Real>
CMatrix<Real> direct_sum(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out = CMatrix<Real>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  if (a.size()) out.topLeftCorner(a.rows(), a.cols()) = a;
  if (b.size()) out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace opclass
