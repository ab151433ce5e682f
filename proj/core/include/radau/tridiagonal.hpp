#pragma once

// Dense symmetric tridiagonal linear algebra at configurable precision.

#include <cstddef>
#include <span>
#include <vector>

#include "radau/precision.hpp"

namespace radau {

/// Symmetric tridiagonal matrix with strictly positive off-diagonal
/// (a Jacobi matrix). alphas holds the diagonal, betas the k-1 couplings.
template <class Real>
class JacobiMatrix {
 public:
  JacobiMatrix() = default;
  /// Throws std::invalid_argument unless betas.size() == alphas.size() - 1
  /// and every beta is strictly positive.
  JacobiMatrix(std::vector<Real> alphas, std::vector<Real> betas);

  std::size_t size() const noexcept { return alphas_.size(); }
  bool empty() const noexcept { return alphas_.empty(); }
  const std::vector<Real>& alphas() const noexcept { return alphas_; }
  const std::vector<Real>& betas() const noexcept { return betas_; }
  const Real& alpha(std::size_t i) const { return alphas_.at(i); }
  const Real& beta(std::size_t i) const { return betas_.at(i); }

  /// Leading k x k principal submatrix.
  JacobiMatrix leading(std::size_t k) const;
  /// Infinity norm.
  Real norm_inf() const;
  /// y = T x
  void apply(std::span<const Real> x, std::span<Real> y) const;

 private:
  std::vector<Real> alphas_;
  std::vector<Real> betas_;
};

enum class EigenVectors {
  boundary,  ///< first and last rows of S only
  full,      ///< all eigenvectors
};

/// T = S diag(thetas) S^T with thetas ascending. first_components is the
/// first row of S (squares are Gauss weights), last_components the last row.
template <class Real>
struct EigenDecomposition {
  std::vector<Real> thetas;
  std::vector<Real> first_components;
  std::vector<Real> last_components;
  /// vectors[i] is the eigenvector for thetas[i]; empty for EigenVectors::boundary.
  std::vector<std::vector<Real>> vectors;

  std::size_t size() const noexcept { return thetas.size(); }
};

/// Implicit QL with Wilkinson shifts. Eigenvectors are normalized so that
/// their first component is nonnegative.
/// Throws ConvergenceFailure naming the eigenvalue index that did not
/// converge within 50 * k * max(1, D/16) sweeps.
template <class Real>
EigenDecomposition<Real> eig_tridiagonal(const JacobiMatrix<Real>& t, const PrecisionContext& ctx,
                                         EigenVectors vectors = EigenVectors::boundary);

/// T = L D L^T with unit lower bidiagonal L.
template <class Real>
struct LdlFactors {
  std::vector<Real> subdiagonal;  ///< L(i+1, i), size k-1
  std::vector<Real> pivots;       ///< D(i, i), size k
};

/// Throws NotPositiveDefinite on a nonpositive pivot.
template <class Real>
LdlFactors<Real> ldl_tridiagonal(const JacobiMatrix<Real>& t, const PrecisionContext& ctx);

/// Solves (T - mu I) y = rhs through the LDL^T factorization of T - mu I.
/// Throws ShiftNotBelowSpectrum if a pivot is nonpositive, i.e. mu is not
/// below the smallest eigenvalue of T.
template <class Real>
std::vector<Real> solve_shifted(const JacobiMatrix<Real>& t, const Real& mu, std::span<const Real> rhs,
                                const PrecisionContext& ctx);

/// Number of eigenvalues of T strictly below x (Sturm count from the LDL^T
/// pivots of T - x I).
template <class Real>
std::size_t count_eigenvalues_below(const JacobiMatrix<Real>& t, const Real& x);

}  // namespace radau
