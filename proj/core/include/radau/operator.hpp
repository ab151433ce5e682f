#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radau/precision.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {

/// Symmetric linear operator y = A x.
template <class Real>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(std::span<const Real> x, std::span<Real> y) const = 0;
  /// Infinity norm (or an upper estimate of it).
  virtual Real norm_inf() const = 0;
};

template <class Real>
class TridiagonalOperator final : public LinearOperator<Real> {
 public:
  explicit TridiagonalOperator(JacobiMatrix<Real> t) : t_(std::move(t)) {}
  std::size_t size() const override { return t_.size(); }
  void apply(std::span<const Real> x, std::span<Real> y) const override { t_.apply(x, y); }
  Real norm_inf() const override { return t_.norm_inf(); }
  const JacobiMatrix<Real>& matrix() const noexcept { return t_; }

 private:
  JacobiMatrix<Real> t_;
};

/// One stored entry of a symmetric matrix, 0-based.
template <class Real>
struct Triplet {
  std::size_t row;
  std::size_t col;
  Real value;
};

/// Symmetric matrix in compressed sparse row form with both triangles
/// stored and column indices sorted within each row.
template <class Real>
class SparseSymmetricMatrix final : public LinearOperator<Real> {
 public:
  SparseSymmetricMatrix() = default;
  /// Builds from lower- or upper-triangle triplets; off-diagonal entries are
  /// mirrored. Duplicate entries are summed.
  SparseSymmetricMatrix(std::size_t n, std::vector<Triplet<Real>> triangle);

  std::size_t size() const override { return n_; }
  void apply(std::span<const Real> x, std::span<Real> y) const override;
  Real norm_inf() const override;

  std::size_t nonzeros() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const noexcept { return offsets_; }
  const std::vector<std::size_t>& columns() const noexcept { return columns_; }
  const std::vector<Real>& values() const noexcept { return values_; }

  /// Tridiagonal matrices are exported this way for the Matrix Market path.
  static SparseSymmetricMatrix from_jacobi(const JacobiMatrix<Real>& t);

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> columns_;
  std::vector<Real> values_;
};

/// Solves A x = b by dense Cholesky at the working precision of `ctx`.
/// Intended for reference solutions of moderate-size problems.
/// Throws NotPositiveDefinite when A is not SPD.
template <class Real>
std::vector<Real> dense_spd_solve(const LinearOperator<Real>& a, std::span<const Real> b,
                                  const PrecisionContext& ctx);

template <class Real>
Real dot(std::span<const Real> x, std::span<const Real> y);

template <class Real>
Real norm2(std::span<const Real> x);

}  // namespace radau
