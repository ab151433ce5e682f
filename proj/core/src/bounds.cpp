#include "radau/bounds.hpp"

#include <stdexcept>

#include "radau/errors.hpp"

namespace radau {

namespace {

template <class Real>
bool finite_positive(const Real& x) {
  using std::isfinite;
  return isfinite(x) && x > Real(0);
}

template <class Real>
Real partial_sum(const std::vector<Real>& terms, std::size_t from, std::size_t to_exclusive) {
  // Terms decrease with the index; add the small end first.
  Real sum(0);
  for (std::size_t j = to_exclusive; j-- > from;) sum += terms[j];
  return sum;
}

}  // namespace

template <class Real>
Real update_phi(const Real& phi, const Real& delta_next) {
  return Real(1) / (Real(1) + delta_next / phi);
}

template <class Real>
Real update_gamma_mu(const Real& gamma_mu, const Real& gamma, const Real& delta_next, const Real& mu) {
  if (!(gamma_mu > gamma)) throw BoundDiagnostic("prescribed mu not below current Ritz value (gamma_mu <= gamma)");
  const Real diff = gamma_mu - gamma;
  return diff / (mu * diff + delta_next);
}

template <class Real>
Real update_alpha_mu(const Real& alpha_mu, const Real& alpha, const Real& beta2, const Real& mu) {
  if (!(alpha > alpha_mu)) throw BoundDiagnostic("prescribed mu not below current Ritz value (alpha <= alpha_mu)");
  return mu + beta2 / (alpha - alpha_mu);
}

template <class Real>
Real gamma_from_alpha(const Real& alpha_mu_next, const Real& delta, const Real& gamma_prev) {
  const Real den = alpha_mu_next - delta / gamma_prev;
  if (!(den > Real(0))) throw BoundDiagnostic("prescribed mu not below current Ritz value (nonpositive pivot)");
  return Real(1) / den;
}

template <class Real>
BoundTriple<Real> bounds_at(const Real& rnorm2, const Real& gamma, const Real& gamma_mu, const Real& phi,
                            const Real& mu) {
  return {gamma * rnorm2, gamma_mu * rnorm2, phi / mu * rnorm2};
}

template <class Real>
MuEstimator<Real>::MuEstimator(Real mu, std::string label) : mu_(std::move(mu)), label_(std::move(label)) {
  if (!(mu_ > Real(0))) throw std::invalid_argument("MuEstimator: mu must be positive");
}

template <class Real>
const BoundRecord<Real>& MuEstimator<Real>::update(const CGRecord<Real>& rec) {
  const std::size_t k = history_.size();
  if (rec.k != k) throw std::invalid_argument("MuEstimator: records must arrive in order");
  BoundRecord<Real> out;
  out.k = k;
  bool ok = true;
  if (k == 0) {
    out.phi = Real(1);
    out.gamma_mu = Real(1) / mu_;
    out.alpha_mu = mu_;
    out.gamma_mu_alpha = Real(1) / mu_;
  } else {
    out.phi = update_phi(phi_prev_, rec.delta);
    // gamma path
    const Real diff = gamma_mu_prev_ - gamma_prev_;
    ok = ok && diff > Real(0);
    out.gamma_mu = diff / (mu_ * diff + rec.delta);
    // alpha path: alpha_k of T, then alpha_{k+1}^(mu)
    Real alpha = Real(1) / gamma_prev_;
    if (k >= 2) alpha += delta_prev_ / gamma_prev2_;
    const Real beta2 = rec.delta / (gamma_prev_ * gamma_prev_);
    ok = ok && alpha > alpha_mu_prev_;
    out.alpha_mu = mu_ + beta2 / (alpha - alpha_mu_prev_);
    const Real den = out.alpha_mu - rec.delta / gamma_prev_;
    ok = ok && den > Real(0);
    out.gamma_mu_alpha = Real(1) / den;
    alpha_prev_ = alpha;
  }
  ok = ok && finite_positive(out.gamma_mu) && !(out.gamma_mu < rec.gamma);
  if (!ok && !untrusted_from_) untrusted_from_ = k;
  out.trusted = !untrusted_from_;
  const auto b = bounds_at(rec.rnorm2, rec.gamma, out.gamma_mu, out.phi, mu_);
  out.gauss_lower = b.gauss_lower;
  out.radau_upper = b.radau_upper;
  out.simple_upper = b.simple_upper;

  if (k >= 1) {
    gamma_prev2_ = gamma_prev_;
  }
  delta_prev_ = rec.delta;
  gamma_prev_ = rec.gamma;
  gamma_mu_prev_ = out.gamma_mu;
  phi_prev_ = out.phi;
  alpha_mu_prev_ = out.alpha_mu;
  history_.push_back(std::move(out));
  return history_.back();
}

template <class Real>
std::string MuEstimator<Real>::status() const {
  if (!untrusted_from_) return "ok";
  return "untrusted_from_k=" + std::to_string(*untrusted_from_);
}

template <class Real>
MuEstimator<Real> estimate(const CGTrace<Real>& trace, const Real& mu, std::string label) {
  MuEstimator<Real> est(mu, std::move(label));
  for (const auto& rec : trace.records) est.update(rec);
  return est;
}

template <class Real>
ImprovedBounds<Real> improved_bounds(const CGTrace<Real>& trace, const std::vector<BoundRecord<Real>>& series,
                                     std::size_t ell, std::size_t k) {
  if (ell > k) throw Error("improved_bounds: ell > k");
  if (k >= trace.size() || k >= series.size()) throw Error("improved_bounds: missing record " + std::to_string(k));
  std::vector<Real> terms;
  terms.reserve(k + 1);
  for (std::size_t j = 0; j <= k; ++j) terms.push_back(trace.records[j].gamma * trace.records[j].rnorm2);
  const Real prefix = partial_sum(terms, ell, k);
  return {prefix + series[k].gamma_mu * trace.records[k].rnorm2, prefix + terms[k]};
}

template <class Real>
AdaptiveAcceptor<Real>::AdaptiveAcceptor(Real tau) : tau_(std::move(tau)) {
  if (!(tau_ > Real(0))) throw std::invalid_argument("AdaptiveAcceptor: tau must be positive");
}

template <class Real>
std::vector<Acceptance<Real>> AdaptiveAcceptor<Real>::advance(const CGRecord<Real>& rec,
                                                              const BoundRecord<Real>& bound) {
  const std::size_t k = terms_.size();
  if (rec.k != k || bound.k != k) throw std::invalid_argument("AdaptiveAcceptor: records must arrive in order");
  terms_.push_back(rec.gamma * rec.rnorm2);
  std::vector<Acceptance<Real>> fresh;
  if (!bound.trusted) return fresh;
  const Real gap = rec.rnorm2 * (bound.gamma_mu - rec.gamma);
  while (ell_ <= k) {
    const Real prefix = partial_sum(terms_, ell_, k);
    const Real delta_lk = prefix + terms_[k];
    const Real criterion = gap / delta_lk;
    if (!(criterion <= tau_)) break;
    fresh.push_back({ell_, k, prefix + bound.radau_upper, delta_lk, criterion});
    ++ell_;
  }
  accepted_.insert(accepted_.end(), fresh.begin(), fresh.end());
  return fresh;
}

template <class Real>
std::vector<Acceptance<Real>> adaptive_accept(const CGTrace<Real>& trace, const std::vector<BoundRecord<Real>>& series,
                                              const Real& tau) {
  if (series.size() < trace.size()) throw Error("adaptive_accept: bound series shorter than trace");
  AdaptiveAcceptor<Real> acceptor(tau);
  for (std::size_t k = 0; k < trace.size(); ++k) acceptor.advance(trace.records[k], series[k]);
  return acceptor.accepted();
}

template <class Real>
std::optional<std::size_t> delay_estimate(const std::vector<BoundRecord<Real>>& series, const CGTrace<Real>& trace,
                                          std::size_t ell) {
  const std::size_t n = std::min(series.size(), trace.size());
  if (ell >= n) return std::nullopt;
  Real target;
  if (trace.records[ell].true_err2) {
    target = *trace.records[ell].true_err2;
  } else {
    std::vector<Real> terms;
    for (std::size_t j = 0; j < n; ++j) terms.push_back(trace.records[j].gamma * trace.records[j].rnorm2);
    target = partial_sum(terms, ell, n);
  }
  for (std::size_t i = ell + 1; i < n; ++i) {
    if (series[i].radau_upper < target) return i - ell - 1;
  }
  return std::nullopt;
}

#define RADAU_INSTANTIATE(Real)                                                                                   \
  template Real update_phi(const Real&, const Real&);                                                             \
  template Real update_gamma_mu(const Real&, const Real&, const Real&, const Real&);                              \
  template Real update_alpha_mu(const Real&, const Real&, const Real&, const Real&);                              \
  template Real gamma_from_alpha(const Real&, const Real&, const Real&);                                          \
  template BoundTriple<Real> bounds_at(const Real&, const Real&, const Real&, const Real&, const Real&);          \
  template class MuEstimator<Real>;                                                                               \
  template class AdaptiveAcceptor<Real>;                                                                          \
  template MuEstimator<Real> estimate(const CGTrace<Real>&, const Real&, std::string);                            \
  template ImprovedBounds<Real> improved_bounds(const CGTrace<Real>&, const std::vector<BoundRecord<Real>>&,      \
                                                std::size_t, std::size_t);                                        \
  template std::vector<Acceptance<Real>> adaptive_accept(const CGTrace<Real>&,                                    \
                                                         const std::vector<BoundRecord<Real>>&, const Real&);     \
  template std::optional<std::size_t> delay_estimate(const std::vector<BoundRecord<Real>>&, const CGTrace<Real>&, \
                                                     std::size_t);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
