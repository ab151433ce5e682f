#include "radau/operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "radau/errors.hpp"

namespace radau {

template <class Real>
Real dot(std::span<const Real> x, std::span<const Real> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  Real sum(0);
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

template <class Real>
Real norm2(std::span<const Real> x) {
  using std::sqrt;
  return sqrt(dot(x, x));
}

template <class Real>
SparseSymmetricMatrix<Real>::SparseSymmetricMatrix(std::size_t n, std::vector<Triplet<Real>> triangle) : n_(n) {
  std::vector<Triplet<Real>> all;
  all.reserve(2 * triangle.size());
  for (auto& t : triangle) {
    if (t.row >= n || t.col >= n) {
      throw std::invalid_argument("sparse matrix entry (" + std::to_string(t.row + 1) + ", " +
                                  std::to_string(t.col + 1) + ") outside " + std::to_string(n) + " x " +
                                  std::to_string(n));
    }
    if (t.row != t.col) all.push_back({t.col, t.row, t.value});
    all.push_back(std::move(t));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  offsets_.assign(n + 1, 0);
  std::size_t last_row = n;
  for (auto& t : all) {
    if (!values_.empty() && last_row == t.row && columns_.back() == t.col) {
      values_.back() += t.value;
      continue;
    }
    columns_.push_back(t.col);
    values_.push_back(std::move(t.value));
    last_row = t.row;
    ++offsets_[t.row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
}

template <class Real>
void SparseSymmetricMatrix<Real>::apply(std::span<const Real> x, std::span<Real> y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("dimension mismatch in sparse apply");
  for (std::size_t i = 0; i < n_; ++i) {
    Real sum(0);
    for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) sum += values_[j] * x[columns_[j]];
    y[i] = std::move(sum);
  }
}

template <class Real>
Real SparseSymmetricMatrix<Real>::norm_inf() const {
  using std::abs;
  Real best(0);
  for (std::size_t i = 0; i < n_; ++i) {
    Real row(0);
    for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) row += abs(values_[j]);
    if (row > best) best = row;
  }
  return best;
}

template <class Real>
SparseSymmetricMatrix<Real> SparseSymmetricMatrix<Real>::from_jacobi(const JacobiMatrix<Real>& t) {
  std::vector<Triplet<Real>> lower;
  for (std::size_t i = 0; i < t.size(); ++i) {
    lower.push_back({i, i, t.alphas()[i]});
    if (i + 1 < t.size()) lower.push_back({i + 1, i, t.betas()[i]});
  }
  return SparseSymmetricMatrix(t.size(), std::move(lower));
}

template <class Real>
std::vector<Real> dense_spd_solve(const LinearOperator<Real>& a, std::span<const Real> b,
                                  const PrecisionContext& ctx) {
  using std::sqrt;
  PrecisionScope scope(ctx);
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("dense_spd_solve: rhs size mismatch");
  // Assemble column by column.
  std::vector<Real> m(n * n, Real(0));
  std::vector<Real> e(n, Real(0));
  std::vector<Real> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = Real(1);
    a.apply(e, col);
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = col[i];
    e[j] = Real(0);
  }
  // Cholesky, lower triangle in place.
  for (std::size_t j = 0; j < n; ++j) {
    Real diag = m[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= m[j * n + k] * m[j * n + k];
    if (!(diag > Real(0))) {
      throw NotPositiveDefinite("matrix not positive definite: Cholesky pivot " + std::to_string(j + 1));
    }
    m[j * n + j] = sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      Real s = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
      m[i * n + j] = s / m[j * n + j];
    }
  }
  std::vector<Real> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= m[i * n + k] * x[k];
    x[i] /= m[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= m[k * n + i] * x[k];
    x[i] /= m[i * n + i];
  }
  return x;
}

#define RADAU_INSTANTIATE(Real)                                                                  \
  template class SparseSymmetricMatrix<Real>;                                                    \
  template std::vector<Real> dense_spd_solve(const LinearOperator<Real>&, std::span<const Real>, \
                                             const PrecisionContext&);                           \
  template Real dot(std::span<const Real>, std::span<const Real>);                               \
  template Real norm2(std::span<const Real>);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
