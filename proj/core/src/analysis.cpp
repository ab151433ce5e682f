#include "radau/analysis.hpp"

#include <stdexcept>
#include <string>

#include "radau/errors.hpp"

namespace radau {

template <class Real>
RitzCache<Real>::RitzCache(const CGTrace<Real>& trace, PrecisionContext ctx) : trace_(&trace), ctx_(ctx) {
  if (trace.size() == 0) throw std::invalid_argument("RitzCache: empty trace");
  full_ = cg_to_lanczos(trace, trace.size());
  jacobi_.resize(trace.size() + 1);
  eig_.resize(trace.size() + 1);
}

template <class Real>
const JacobiMatrix<Real>& RitzCache<Real>::jacobi(std::size_t k) const {
  if (k == 0 || k > max_k()) throw std::out_of_range("RitzCache: no T_" + std::to_string(k));
  std::lock_guard lock(mutex_);
  if (!jacobi_[k]) {
    PrecisionScope scope(ctx_);
    jacobi_[k] = std::make_unique<JacobiMatrix<Real>>(full_.leading(k));
  }
  return *jacobi_[k];
}

template <class Real>
const EigenDecomposition<Real>& RitzCache<Real>::eig(std::size_t k) const {
  const auto& t = jacobi(k);
  std::lock_guard lock(mutex_);
  if (!eig_[k]) eig_[k] = std::make_unique<EigenDecomposition<Real>>(eig_tridiagonal(t, ctx_));
  return *eig_[k];
}

template <class Real>
Real RitzCache<Real>::beta(std::size_t k) const {
  using std::sqrt;
  PrecisionScope scope(ctx_);
  return sqrt(lanczos_beta2(*trace_, k));
}

template <class Real>
std::size_t EtaBreakdown<Real>::max_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < etas.size(); ++i) {
    if (etas[i] > etas[best]) best = i;
  }
  return best;
}

template <class Real>
EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                                 const Real& mu, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t k = t.size();
  if (k == 0 || eig.size() != k) throw std::invalid_argument("eta_breakdown: decomposition does not match T");
  if (!(mu < eig.thetas.front())) {
    throw ShiftNotBelowSpectrum("eta_breakdown: mu is not below the smallest Ritz value");
  }
  EtaBreakdown<Real> out;
  out.mu = mu;
  out.zeta = Real(0);
  out.etas.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Real bs = beta * eig.last_components[i];
    out.etas.push_back(bs * bs / (eig.thetas[i] - mu));
    out.zeta += out.etas.back();
  }
  std::vector<Real> rhs(k, Real(0));
  rhs[k - 1] = beta * beta;
  out.zeta_solve = solve_shifted(t, mu, std::span<const Real>(rhs), ctx).back();
  return out;
}

template <class Real>
EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>& t, const Real& beta, const Real& mu,
                                 const PrecisionContext& ctx) {
  return eta_breakdown(t, eig_tridiagonal(t, ctx), beta, mu, ctx);
}

template <class Real>
ShiftSensitivity<Real> shift_sensitivity(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                              const Real& mu, const Real& lambda, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (!(mu <= lambda) || !(lambda < eig.thetas.front())) {
    throw Error("shift_sensitivity: need mu <= lambda < theta_1");
  }
  const auto em = eta_breakdown(t, eig, beta, mu, ctx);
  const auto el = eta_breakdown(t, eig, beta, lambda, ctx);
  const std::size_t k = eig.size();
  ShiftSensitivity<Real> out;
  out.e_lambda_mu = Real(1);
  out.e_mu_lambda = Real(1);
  for (std::size_t i = 0; i < k; ++i) {
    out.growth.push_back((el.etas[i] - em.etas[i]) / em.etas[i]);
    out.growth_predicted.push_back((lambda - mu) / (eig.thetas[i] - lambda));
    if (i > 0) {
      out.e_lambda_mu += el.etas[i] / (eig.thetas[i] - mu);
      out.e_mu_lambda += em.etas[i] / (eig.thetas[i] - lambda);
    }
  }
  out.alpha_diff = el.alpha_mu() - em.alpha_mu();
  out.alpha_diff_formula =
      (lambda - mu) / (eig.thetas.front() - mu) * el.etas.front() + (lambda - mu) * out.e_lambda_mu;
  return out;
}

template <class Real>
Real omega_identity_check(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                          const Real& mu, const Real& phi, const Real& gamma_mu, const PrecisionContext& ctx) {
  using std::abs;
  PrecisionScope scope(ctx);
  const auto eta = eta_breakdown(t, eig, beta, mu, ctx);
  Real rhs = mu / phi;
  for (std::size_t i = 0; i < eig.size(); ++i) rhs += square(mu / eig.thetas[i]) * eta.etas[i];
  const Real lhs = Real(1) / gamma_mu;
  return abs(lhs - rhs) / abs(lhs);
}

template <class Real>
Real neumann_identity_check(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& mu,
                            const Real& gamma_prev, const Real& phi_prev, const PrecisionContext& ctx) {
  using std::abs;
  PrecisionScope scope(ctx);
  const std::size_t k = t.size();
  std::vector<Real> ek(k, Real(0));
  ek[k - 1] = Real(1);
  const Real lhs = solve_shifted(t, mu, std::span<const Real>(ek), ctx).back();
  Real rhs = gamma_prev + mu * gamma_prev * gamma_prev / phi_prev;
  for (std::size_t i = 0; i < k; ++i) {
    rhs += square(mu / eig.thetas[i]) * square(eig.last_components[i]) / (eig.thetas[i] - mu);
  }
  return abs(lhs - rhs) / abs(lhs);
}

template <class Real>
Real relative_distance(const Real& phi, const Real& mu, const Real& gamma_mu) {
  return (phi / mu - gamma_mu) / gamma_mu;
}

template <class Real>
NegligibleTerms<Real> negligible_terms(const EigenDecomposition<Real>& eig, const EtaBreakdown<Real>& eta,
                                       const Real& beta, const std::optional<Real>& lambda1) {
  const Real& mu = eta.mu;
  NegligibleTerms<Real> out;
  const Real& theta1 = eig.thetas.front();
  out.eta1_over_mu = eta.etas.front() / mu;
  out.first = square(mu / theta1) * out.eta1_over_mu;
  out.rest = Real(0);
  Real rest_upper(0);
  for (std::size_t i = 1; i < eig.size(); ++i) {
    const Real relacc = square(beta * eig.last_components[i] / eig.thetas[i]);
    out.rest += relacc * mu / (eig.thetas[i] - mu);
    if (lambda1) rest_upper += relacc * *lambda1 / (eig.thetas[i] - *lambda1);
  }
  if (lambda1) {
    out.first_upper = square(*lambda1 / theta1) * out.eta1_over_mu;
    out.rest_upper = rest_upper;
  }
  return out;
}

template <class Real>
std::optional<std::size_t> phase2_onset_oracle(std::span<const Real> theta1, const Real& lambda1, const Real& mu) {
  const Real gap = lambda1 - mu;
  for (std::size_t i = 0; i < theta1.size(); ++i) {
    if (theta1[i] - lambda1 < gap) return i + 1;
  }
  return std::nullopt;
}

template <class Real>
PhaseMarkers phase2_markers_practical(std::span<const Real> reldist, const Real& threshold) {
  PhaseMarkers out;
  std::size_t k = 0;
  while (k < reldist.size() && reldist[k] < threshold) ++k;
  if (k == 0) return out;
  out.ell1 = k - 1;
  for (; k < reldist.size(); ++k) {
    if (reldist[k] < threshold) {
      out.ell2 = k;
      break;
    }
  }
  return out;
}

template <class Real>
std::vector<RitzAccuracy<Real>> ritz_accuracy(const EigenDecomposition<Real>& eig, const Real& beta,
                                              std::span<const Real> eigs_of_a) {
  using std::abs;
  std::vector<RitzAccuracy<Real>> out;
  out.reserve(eig.size());
  for (std::size_t j = 0; j < eig.size(); ++j) {
    RitzAccuracy<Real> row;
    row.theta = eig.thetas[j];
    row.residual = beta * abs(eig.last_components[j]);
    row.relacc = square(row.residual / row.theta);
    if (eigs_of_a.size() >= 2) {
      std::size_t nearest = 0;
      for (std::size_t i = 1; i < eigs_of_a.size(); ++i) {
        if (abs(eigs_of_a[i] - row.theta) < abs(eigs_of_a[nearest] - row.theta)) nearest = i;
      }
      std::optional<Real> gap;
      for (std::size_t i = 0; i < eigs_of_a.size(); ++i) {
        if (i == nearest) continue;
        const Real d = abs(eigs_of_a[i] - row.theta);
        if (!gap || d < *gap) gap = d;
      }
      row.gap_bound = square(row.residual) / *gap;
    }
    if (!eigs_of_a.empty() && j > 0) row.weight = eigs_of_a.front() / (row.theta - eigs_of_a.front());
    out.push_back(std::move(row));
  }
  return out;
}

template <class Real>
GapSandwich<Real> gap_sandwich(const EigenDecomposition<Real>& eig, const Real& beta, std::span<const Real> eigs_of_a) {
  if (eigs_of_a.size() < 2) throw std::invalid_argument("gap_sandwich: need at least two eigenvalues of A");
  const Real& theta1 = eig.thetas.front();
  const Real& lam1 = eigs_of_a.front();
  return {eigs_of_a[1] - theta1, square(beta * eig.last_components.front()) / (theta1 - lam1),
          eigs_of_a.back() - lam1};
}

template <class Real>
std::optional<Real> convergence_ratio(std::span<const Real> theta1, std::size_t k, const Real& lambda1) {
  if (k == 0 || k >= theta1.size()) return std::nullopt;
  const Real den = theta1[k - 1] - lambda1;
  if (den == Real(0)) return std::nullopt;
  return (theta1[k] - lambda1) / den;
}

template <class Real>
std::optional<Real> h_ratio(const Real& theta1, const Real& lambda1, const Real& mu) {
  const Real den = theta1 - lambda1;
  if (den == Real(0)) return std::nullopt;
  return (lambda1 - mu) / den;
}

template <class Real>
std::optional<Closeness<Real>> closeness(const RitzCache<Real>& cache, std::size_t k, const Real& lambda1) {
  const auto& ctx = cache.context();
  PrecisionScope scope(ctx);
  if (k == 0 || k >= cache.max_k()) return std::nullopt;
  const auto& eig = cache.eig(k);
  const Real& th_k = eig.thetas.front();
  const Real& th_next = cache.theta1(k + 1);
  if (!(lambda1 < th_next) || !(th_next < th_k)) return std::nullopt;
  const Real beta = cache.beta(k);
  const auto& t = cache.jacobi(k);
  const auto base = eta_breakdown(t, eig, beta, lambda1, ctx);
  const auto l2 = shift_sensitivity(t, eig, beta, lambda1, th_next, ctx);
  Closeness<Real> out;
  out.exact = cache.jacobi(k + 1).alphas().back() - base.alpha_mu();
  out.expansion = base.etas.front() * (th_next - lambda1) / (th_k - th_next) + (th_next - lambda1) * l2.e_lambda_mu;
  out.rho = (th_next - lambda1) / (th_k - lambda1);
  out.predicted = base.etas.front() * out.rho / (Real(1) - out.rho);
  return out;
}

template <class Real>
std::vector<AnalysisRow<Real>> analyze_mu(const RitzCache<Real>& cache, const std::vector<BoundRecord<Real>>& series,
                                          const Real& mu, const std::optional<Real>& lambda1) {
  const auto& ctx = cache.context();
  PrecisionScope scope(ctx);
  std::vector<Real> theta1;
  for (std::size_t k = 1; k <= cache.max_k(); ++k) theta1.push_back(cache.theta1(k));

  std::vector<AnalysisRow<Real>> rows;
  const std::size_t last = std::min(cache.max_beta_k(), series.size() == 0 ? 0 : series.size() - 1);
  for (std::size_t k = 1; k <= last; ++k) {
    AnalysisRow<Real> row;
    row.k = k;
    row.theta1 = theta1[k - 1];
    const auto& rec = series[k];
    row.reldist = relative_distance(rec.phi, mu, rec.gamma_mu);
    if (mu < row.theta1) {
      const auto& t = cache.jacobi(k);
      const auto& eig = cache.eig(k);
      const Real beta = cache.beta(k);
      const auto eta = eta_breakdown(t, eig, beta, mu, ctx);
      row.eta1 = eta.etas.front();
      row.eta_max_index = eta.max_index() + 1;
      row.eta_max = eta.etas[eta.max_index()];
      row.zeta = eta.zeta;
      row.omega_discrepancy = omega_identity_check(t, eig, beta, mu, rec.phi, rec.gamma_mu, ctx);
      row.negligible = negligible_terms(eig, eta, beta, lambda1);
    }
    if (lambda1) {
      row.theta1_minus_lambda1 = row.theta1 - *lambda1;
      row.h = h_ratio(row.theta1, *lambda1, mu);
      row.rho = convergence_ratio(std::span<const Real>(theta1), k, *lambda1);
      row.phase = (row.theta1 - *lambda1 < *lambda1 - mu) ? 2 : 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

#define RADAU_INSTANTIATE(Real)                                                                                     \
  template class RitzCache<Real>;                                                                                   \
  template struct EtaBreakdown<Real>;                                                                               \
  template EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>&, const EigenDecomposition<Real>&,             \
                                            const Real&, const Real&, const PrecisionContext&);                     \
  template EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>&, const Real&, const Real&,                    \
                                            const PrecisionContext&);                                               \
  template ShiftSensitivity<Real> shift_sensitivity(const JacobiMatrix<Real>&, const EigenDecomposition<Real>&, const Real&,   \
                                         const Real&, const Real&, const PrecisionContext&);                        \
  template Real omega_identity_check(const JacobiMatrix<Real>&, const EigenDecomposition<Real>&, const Real&,       \
                                     const Real&, const Real&, const Real&, const PrecisionContext&);               \
  template Real neumann_identity_check(const JacobiMatrix<Real>&, const EigenDecomposition<Real>&, const Real&,     \
                                       const Real&, const Real&, const PrecisionContext&);                          \
  template Real relative_distance(const Real&, const Real&, const Real&);                                           \
  template NegligibleTerms<Real> negligible_terms(const EigenDecomposition<Real>&, const EtaBreakdown<Real>&,       \
                                                  const Real&, const std::optional<Real>&);                         \
  template std::optional<std::size_t> phase2_onset_oracle(std::span<const Real>, const Real&, const Real&);         \
  template PhaseMarkers phase2_markers_practical(std::span<const Real>, const Real&);                               \
  template std::vector<RitzAccuracy<Real>> ritz_accuracy(const EigenDecomposition<Real>&, const Real&,              \
                                                         std::span<const Real>);                                    \
  template GapSandwich<Real> gap_sandwich(const EigenDecomposition<Real>&, const Real&, std::span<const Real>);     \
  template std::optional<Real> convergence_ratio(std::span<const Real>, std::size_t, const Real&);                  \
  template std::optional<Real> h_ratio(const Real&, const Real&, const Real&);                                      \
  template std::optional<Closeness<Real>> closeness(const RitzCache<Real>&, std::size_t, const Real&);              \
  template std::vector<AnalysisRow<Real>> analyze_mu(const RitzCache<Real>&, const std::vector<BoundRecord<Real>>&, \
                                                     const Real&, const std::optional<Real>&);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
