#include "radau/tridiagonal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "radau/errors.hpp"

namespace radau {

template <class Real>
JacobiMatrix<Real>::JacobiMatrix(std::vector<Real> alphas, std::vector<Real> betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  const std::size_t expected = alphas_.empty() ? 0 : alphas_.size() - 1;
  if (betas_.size() != expected) {
    throw std::invalid_argument("Jacobi matrix of order " + std::to_string(alphas_.size()) + " needs " +
                                std::to_string(expected) + " off-diagonal entries, got " +
                                std::to_string(betas_.size()));
  }
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    if (!(betas_[i] > Real(0))) {
      throw std::invalid_argument("Jacobi matrix off-diagonal beta_" + std::to_string(i + 1) +
                                  " is not strictly positive");
    }
  }
}

template <class Real>
JacobiMatrix<Real> JacobiMatrix<Real>::leading(std::size_t k) const {
  if (k > size()) throw std::out_of_range("leading submatrix larger than matrix");
  JacobiMatrix out;
  out.alphas_.assign(alphas_.begin(), alphas_.begin() + static_cast<std::ptrdiff_t>(k));
  if (k > 1) out.betas_.assign(betas_.begin(), betas_.begin() + static_cast<std::ptrdiff_t>(k - 1));
  return out;
}

template <class Real>
Real JacobiMatrix<Real>::norm_inf() const {
  using std::abs;
  Real best(0);
  for (std::size_t i = 0; i < size(); ++i) {
    // Column order, as in the sparse row sum.
    Real row(0);
    if (i > 0) row += abs(betas_[i - 1]);
    row += abs(alphas_[i]);
    if (i + 1 < size()) row += abs(betas_[i]);
    if (row > best) best = row;
  }
  return best;
}

template <class Real>
void JacobiMatrix<Real>::apply(std::span<const Real> x, std::span<Real> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw std::invalid_argument("dimension mismatch in Jacobi apply");
  // Terms are accumulated in column order so that results match a sorted
  // sparse row product bit for bit.
  for (std::size_t i = 0; i < n; ++i) {
    Real sum(0);
    if (i > 0) sum += betas_[i - 1] * x[i - 1];
    sum += alphas_[i] * x[i];
    if (i + 1 < n) sum += betas_[i] * x[i + 1];
    y[i] = std::move(sum);
  }
}

template <class Real>
EigenDecomposition<Real> eig_tridiagonal(const JacobiMatrix<Real>& t, const PrecisionContext& ctx,
                                         EigenVectors vectors) {
  using std::abs;
  using std::hypot;
  PrecisionScope scope(ctx);
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("eig_tridiagonal: empty matrix");

  std::vector<Real> d = t.alphas();
  std::vector<Real> e(n, Real(0));
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.betas()[i];

  // Tracked rows of the accumulated rotation matrix Z (eigenvectors are its
  // columns). Only the first and last rows are needed for quadrature and
  // Ritz residual work, which keeps a solve at O(k^2).
  std::vector<std::size_t> rows;
  if (vectors == EigenVectors::full) {
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    rows.push_back(0);
    if (n > 1) rows.push_back(n - 1);
  }
  std::vector<std::vector<Real>> z(rows.size(), std::vector<Real>(n, Real(0)));
  for (std::size_t r = 0; r < rows.size(); ++r) z[r][rows[r]] = Real(1);

  const Real eps = ScalarTraits<Real>::unit_roundoff();
  const int scale = std::max(1, ctx.effective_digits() / 16);
  const long cap = 50L * static_cast<long>(n) * scale;

  for (std::size_t l = 0; l < n; ++l) {
    long iterations = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const Real dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iterations > cap) {
          throw ConvergenceFailure("tridiagonal eigensolver did not converge for eigenvalue index " +
                                       std::to_string(l) + " after " + std::to_string(cap) + " iterations",
                                   static_cast<int>(l));
        }
        Real g = (d[l + 1] - d[l]) / (Real(2) * e[l]);
        Real r = hypot(g, Real(1));
        g = d[m] - d[l] + e[l] / (g + (g >= Real(0) ? abs(r) : -abs(r)));
        Real s(1);
        Real c(1);
        Real p(0);
        bool deflated = false;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          Real f = s * e[i];
          const Real b = c * e[i];
          r = hypot(f, g);
          e[i + 1] = r;
          if (r == Real(0)) {
            d[i + 1] -= p;
            e[m] = Real(0);
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + Real(2) * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (auto& row : z) {
            f = row[i + 1];
            row[i + 1] = s * row[i] + c * f;
            row[i] = c * row[i] - s * f;
          }
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = Real(0);
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  EigenDecomposition<Real> out;
  out.thetas.reserve(n);
  out.first_components.reserve(n);
  out.last_components.reserve(n);
  const std::size_t last_row = rows.size() == 1 ? 0 : (vectors == EigenVectors::full ? n - 1 : 1);
  for (std::size_t idx : order) {
    const bool flip = z[0][idx] < Real(0);
    out.thetas.push_back(d[idx]);
    out.first_components.push_back(flip ? Real(-z[0][idx]) : z[0][idx]);
    out.last_components.push_back(flip ? Real(-z[last_row][idx]) : z[last_row][idx]);
    if (vectors == EigenVectors::full) {
      std::vector<Real> v(n);
      for (std::size_t r = 0; r < n; ++r) v[r] = flip ? Real(-z[r][idx]) : z[r][idx];
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

/// Pivots of T - shift I. Returns the index of the first nonpositive pivot,
/// or n when all are positive.
template <class Real>
std::size_t shifted_ldl(const JacobiMatrix<Real>& t, const Real& shift, std::vector<Real>& sub,
                        std::vector<Real>& piv) {
  const std::size_t n = t.size();
  piv.assign(n, Real(0));
  sub.assign(n > 0 ? n - 1 : 0, Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    Real pivot = t.alphas()[i] - shift;
    if (i > 0) pivot -= t.betas()[i - 1] * sub[i - 1];
    piv[i] = pivot;
    if (!(pivot > Real(0))) return i;
    if (i + 1 < n) sub[i] = t.betas()[i] / pivot;
  }
  return n;
}

}  // namespace

template <class Real>
LdlFactors<Real> ldl_tridiagonal(const JacobiMatrix<Real>& t, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  LdlFactors<Real> out;
  const std::size_t bad = shifted_ldl(t, Real(0), out.subdiagonal, out.pivots);
  if (bad != t.size()) {
    throw NotPositiveDefinite("matrix not positive definite: pivot " + std::to_string(bad + 1) + " is " +
                              format_real(out.pivots[bad], 6));
  }
  return out;
}

template <class Real>
std::vector<Real> solve_shifted(const JacobiMatrix<Real>& t, const Real& mu, std::span<const Real> rhs,
                                const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t n = t.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_shifted: rhs size mismatch");
  std::vector<Real> sub;
  std::vector<Real> piv;
  const std::size_t bad = shifted_ldl(t, mu, sub, piv);
  if (bad != n) {
    throw ShiftNotBelowSpectrum("shift not below spectrum: pivot " + std::to_string(bad + 1) +
                                " of T - mu I is nonpositive (mu = " + format_real(mu, 17) + ")");
  }
  std::vector<Real> y(rhs.begin(), rhs.end());
  for (std::size_t i = 1; i < n; ++i) y[i] -= sub[i - 1] * y[i - 1];
  for (std::size_t i = 0; i < n; ++i) y[i] /= piv[i];
  for (std::size_t i = n; i-- > 1;) y[i - 1] -= sub[i - 1] * y[i];
  return y;
}

template <class Real>
std::size_t count_eigenvalues_below(const JacobiMatrix<Real>& t, const Real& x) {
  // Sturm sequence: number of negative pivots of T - x I.
  using std::abs;
  std::size_t count = 0;
  Real pivot(0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    Real next = t.alphas()[i] - x;
    if (i > 0) {
      if (pivot == Real(0)) pivot = ScalarTraits<Real>::unit_roundoff() * abs(t.betas()[i - 1]);
      next -= t.betas()[i - 1] * t.betas()[i - 1] / pivot;
    }
    if (next < Real(0)) ++count;
    pivot = next;
  }
  return count;
}

#define RADAU_INSTANTIATE(Real)                                                                          \
  template class JacobiMatrix<Real>;                                                                     \
  template EigenDecomposition<Real> eig_tridiagonal(const JacobiMatrix<Real>&, const PrecisionContext&, \
                                                    EigenVectors);                                       \
  template LdlFactors<Real> ldl_tridiagonal(const JacobiMatrix<Real>&, const PrecisionContext&);         \
  template std::vector<Real> solve_shifted(const JacobiMatrix<Real>&, const Real&, std::span<const Real>, \
                                           const PrecisionContext&);                                     \
  template std::size_t count_eigenvalues_below(const JacobiMatrix<Real>&, const Real&);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
