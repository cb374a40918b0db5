#pragma once

// Dense complex linear algebra used by the beamformer solvers: Hermitian-definite
// generalized eigenproblems, minimum-norm solutions of underdetermined systems, and
// orthonormal bases for null spaces and ranges.
//
// Backed by Eigen. Every routine is a pure function of its arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "coopsec/error.hpp"

namespace coopsec {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

namespace numerics {

/// Relative singular-value threshold separating "zero" from "nonzero".
inline constexpr double kRankTolerance = 1e-10;
/// Relative tolerance on ||A - A^H||_F / ||A||_F.
inline constexpr double kHermitianTolerance = 1e-10;

template <typename Derived>
[[nodiscard]] bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

[[nodiscard]] inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = kHermitianTolerance) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

/// True when `a` is Hermitian and its smallest eigenvalue is >= -rel_tol * ||a||.
[[nodiscard]] inline bool is_hermitian_psd(const ComplexMatrix& a, double rel_tol = kRankTolerance) {
  if (!is_hermitian(a)) return false;
  if (a.size() == 0) return true;
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -rel_tol * std::max(a.norm(), 1e-300);
}

/// Rotates `x` so that its first entry with magnitude above kRankTolerance * max|x_i|
/// is real and non-negative. Zero vectors are returned unchanged.
[[nodiscard]] inline ComplexVector normalize_phase(ComplexVector x) {
  const double peak = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x(i));
    if (mag > kRankTolerance * peak) {
      x *= std::conj(x(i)) / mag;
      x(i) = Complex(mag, 0.0);
      break;
    }
  }
  return x;
}

struct GeneralizedEigpair {
  double value = 0.0;
  ComplexVector vector;  // unit Euclidean norm, phase-normalized
};

/// Largest eigenpair of the Hermitian-definite pencil A x = lambda B x.
///
/// B = L L^H is factored by Cholesky and the standard Hermitian problem for
/// L^{-1} A L^{-H} is solved instead. A must be Hermitian; B must be Hermitian positive
/// definite. When the top eigenvalue is repeated, the eigenvector with the largest
/// component on the lowest possible coordinate is returned.
[[nodiscard]] inline GeneralizedEigpair largest_generalized_eigpair(const ComplexMatrix& a,
                                                                    const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(Errc::DimensionMismatch, "pencil matrices must be square and of equal size");
  if (a.rows() == 0) throw Error(Errc::DimensionMismatch, "empty pencil");
  if (!all_finite(a) || !all_finite(b)) throw Error(Errc::DimensionMismatch, "non-finite entries");
  if (!is_hermitian(a)) throw Error(Errc::NotHermitian, "A is not Hermitian");
  if (!is_hermitian(b)) throw Error(Errc::NotHermitian, "B is not Hermitian");

  const ComplexMatrix b_sym = 0.5 * (b + b.adjoint());
  Eigen::LLT<ComplexMatrix> llt(b_sym);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::NotPositiveDefinite, "Cholesky factorization of B failed");
  const auto l = llt.matrixL();

  // C = L^{-1} A L^{-H}
  ComplexMatrix c = l.solve(ComplexMatrix(0.5 * (a + a.adjoint())));
  c = l.solve(ComplexMatrix(c.adjoint())).adjoint();
  c = 0.5 * (c + c.adjoint());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NotPositiveDefinite, "Hermitian eigensolver did not converge");

  const Eigen::Index n = c.rows();
  const double top = es.eigenvalues()(n - 1);
  const double tie_tol = 1e-12 * std::max(std::abs(top), 1e-300);
  Eigen::Index multiplicity = 1;
  while (multiplicity < n && top - es.eigenvalues()(n - 1 - multiplicity) <= tie_tol) ++multiplicity;

  // x = L^{-H} y for every y in the top eigenspace.
  const ComplexMatrix ys = es.eigenvectors().rightCols(multiplicity);
  const ComplexMatrix xs = l.adjoint().solve(ys);

  ComplexVector x = xs.col(multiplicity - 1);
  if (multiplicity > 1) {
    const double peak = xs.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (xs.row(i).norm() > kRankTolerance * peak) {
        x = xs * xs.row(i).adjoint();
        break;
      }
    }
  }
  x /= x.norm();
  return {top, normalize_phase(std::move(x))};
}

/// Singular values of `m`, descending.
[[nodiscard]] inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

/// Numerical rank with the kRankTolerance relative threshold.
[[nodiscard]] inline Eigen::Index numerical_rank(const Eigen::VectorXd& sv) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = kRankTolerance * sv(0);
  return static_cast<Eigen::Index>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

/// Minimum-norm solution of M w = b for a full-row-rank m x n matrix (m <= n).
///
/// Solved through a Householder QR of M^H = Q R, giving w = Q R^{-H} b, which lies in
/// range(M^H) and is therefore orthogonal to null(M).
[[nodiscard]] inline ComplexVector min_norm_solve(const ComplexMatrix& m, const ComplexVector& b) {
  if (m.rows() != b.size()) throw Error(Errc::DimensionMismatch, "rhs length must equal row count");
  if (m.rows() > m.cols()) throw Error(Errc::DimensionMismatch, "system must not be overdetermined");
  if (m.rows() == 0) return ComplexVector::Zero(m.cols());
  if (!all_finite(m) || !all_finite(b)) throw Error(Errc::DimensionMismatch, "non-finite entries");

  if (numerical_rank(singular_values(m)) < m.rows())
    throw Error(Errc::RankDeficient, "matrix does not have full row rank");

  const Eigen::Index rows = m.rows();
  Eigen::HouseholderQR<ComplexMatrix> qr(m.adjoint());
  const ComplexMatrix r = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();
  // R^H z = b
  const ComplexVector z = r.adjoint().triangularView<Eigen::Lower>().solve(b);
  ComplexVector w = ComplexVector::Zero(m.cols());
  w.head(rows) = z;
  return qr.householderQ() * w;
}

/// Orthonormal basis (columns) of null(M); n x (n - rank).
[[nodiscard]] inline ComplexMatrix null_space_basis(const ComplexMatrix& m) {
  const Eigen::Index n = m.cols();
  if (!all_finite(m)) throw Error(Errc::DimensionMismatch, "non-finite entries");
  if (m.rows() == 0 || n == 0) return ComplexMatrix::Identity(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::Index rank = numerical_rank(svd.singularValues());
  return svd.matrixV().rightCols(n - rank);
}

/// Orthonormal basis (columns) of range(M); m x rank.
[[nodiscard]] inline ComplexMatrix range_basis(const ComplexMatrix& m) {
  if (!all_finite(m)) throw Error(Errc::DimensionMismatch, "non-finite entries");
  if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const Eigen::Index rank = numerical_rank(svd.singularValues());
  return svd.matrixU().leftCols(rank);
}

}  // namespace numerics
}  // namespace coopsec
