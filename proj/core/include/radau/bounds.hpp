#pragma once

// Quadrature-based bounds on the A-norm of the CG error.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radau/krylov.hpp"

namespace radau {

/// phi_{j+1} = 1 / (1 + delta_{j+1} / phi_j), phi_0 = 1. phi_j = ||r_j||^2 / ||p_j||^2.
template <class Real>
Real update_phi(const Real& phi, const Real& delta_next);

/// gamma_{j+1}^(mu) = (gamma_j^(mu) - gamma_j) / (mu (gamma_j^(mu) - gamma_j) + delta_{j+1}).
/// Throws BoundDiagnostic if gamma_mu <= gamma.
template <class Real>
Real update_gamma_mu(const Real& gamma_mu, const Real& gamma, const Real& delta_next, const Real& mu);

/// alpha_{j+1}^(mu) = mu + beta_j^2 / (alpha_j - alpha_j^(mu)), alpha_1^(mu) = mu.
/// Throws BoundDiagnostic if alpha <= alpha_mu.
template <class Real>
Real update_alpha_mu(const Real& alpha_mu, const Real& alpha, const Real& beta2, const Real& mu);

/// gamma_k^(mu) = 1 / (alpha_{k+1}^(mu) - delta_k / gamma_{k-1}).
/// Throws BoundDiagnostic if the denominator is not positive.
template <class Real>
Real gamma_from_alpha(const Real& alpha_mu_next, const Real& delta, const Real& gamma_prev);

template <class Real>
struct BoundTriple {
  Real gauss_lower;
  Real radau_upper;
  Real simple_upper;
};

/// gauss_lower = gamma_k ||r_k||^2, radau_upper = gamma_k^(mu) ||r_k||^2,
/// simple_upper = (phi_k / mu) ||r_k||^2.
template <class Real>
BoundTriple<Real> bounds_at(const Real& rnorm2, const Real& gamma, const Real& gamma_mu, const Real& phi,
                            const Real& mu);

/// Everything a MuEstimator knows at iteration k.
template <class Real>
struct BoundRecord {
  std::size_t k = 0;
  Real gauss_lower;
  Real radau_upper;
  Real simple_upper;
  Real gamma_mu;        ///< gamma_k^(mu)
  Real alpha_mu;        ///< alpha_{k+1}^(mu), mirror recurrence
  Real gamma_mu_alpha;  ///< gamma_k^(mu) recomputed from alpha_mu
  Real phi;             ///< phi_k
  bool trusted = true;
};

/// One accepted improved bound: Omega_{ell:k} and Delta_{ell:k}.
template <class Real>
struct Acceptance {
  std::size_t ell = 0;
  std::size_t k = 0;
  Real omega;
  Real delta_lk;
  Real criterion;  ///< ||r_k||^2 (gamma_k^(mu) - gamma_k) / Delta_{ell:k}
};

/// Gauss-Radau recurrences for one prescribed mu, fed one CG record at a
/// time. Once mu fails to stay below the smallest Ritz value the estimator
/// marks itself untrusted and keeps producing (tagged) values.
template <class Real>
class MuEstimator {
 public:
  MuEstimator(Real mu, std::string label);

  const Real& mu() const noexcept { return mu_; }
  const std::string& label() const noexcept { return label_; }

  /// Consumes record k; records must arrive in order starting at 0.
  const BoundRecord<Real>& update(const CGRecord<Real>& rec);

  const std::vector<BoundRecord<Real>>& history() const noexcept { return history_; }
  bool trusted() const noexcept { return !untrusted_from_; }
  /// First iteration whose values are not guaranteed.
  std::optional<std::size_t> untrusted_from() const noexcept { return untrusted_from_; }
  std::string status() const;

 private:
  Real mu_;
  std::string label_;
  std::vector<BoundRecord<Real>> history_;
  std::optional<std::size_t> untrusted_from_;
  // Previous record's quantities.
  Real gamma_prev_;
  Real gamma_mu_prev_;
  Real phi_prev_;
  Real alpha_prev_;      // alpha_k of T
  Real alpha_mu_prev_;   // alpha_k^(mu)
  Real gamma_prev2_;     // gamma_{k-2}
  Real delta_prev_;      // delta_{k-1}
};

/// Omega_{ell:k} = Delta_{ell:k-1} + gamma_k^(mu) ||r_k||^2 and
/// Delta_{ell:k} = sum_{j=ell}^{k} gamma_j ||r_j||^2.
template <class Real>
struct ImprovedBounds {
  Real omega;
  Real delta_lk;
};

/// Throws Error when ell > k or records are missing.
template <class Real>
ImprovedBounds<Real> improved_bounds(const CGTrace<Real>& trace, const std::vector<BoundRecord<Real>>& series,
                                     std::size_t ell, std::size_t k);

/// Online adaptive choice of ell: after each iteration k, accepts
/// Omega_{ell:k} and advances ell while k >= ell and
/// ||r_k||^2 (gamma_k^(mu) - gamma_k) / Delta_{ell:k} <= tau.
template <class Real>
class AdaptiveAcceptor {
 public:
  explicit AdaptiveAcceptor(Real tau);

  /// Feeds record k (in order) and the estimator's record for k; returns
  /// the newly accepted bounds. Untrusted bounds are never accepted.
  std::vector<Acceptance<Real>> advance(const CGRecord<Real>& rec, const BoundRecord<Real>& bound);

  std::size_t ell() const noexcept { return ell_; }
  const std::vector<Acceptance<Real>>& accepted() const noexcept { return accepted_; }

 private:
  Real tau_;
  std::size_t ell_ = 0;
  std::vector<Real> terms_;  // Delta_j = gamma_j ||r_j||^2
  std::vector<Acceptance<Real>> accepted_;
};

/// Runs the acceptance loop over a completed trace.
template <class Real>
std::vector<Acceptance<Real>> adaptive_accept(const CGTrace<Real>& trace, const std::vector<BoundRecord<Real>>& series,
                                              const Real& tau);

/// Feeds a whole trace through a fresh estimator.
template <class Real>
MuEstimator<Real> estimate(const CGTrace<Real>& trace, const Real& mu, std::string label);

/// Smallest j >= 0 with gamma_{ell+j+1}^(mu) ||r_{ell+j+1}||^2 < eps_ell, where
/// eps_ell is the true error when known and Delta_{ell:k} (k the last
/// iteration) otherwise. nullopt when no such j exists within the trace.
template <class Real>
std::optional<std::size_t> delay_estimate(const std::vector<BoundRecord<Real>>& series, const CGTrace<Real>& trace,
                                          std::size_t ell);

}  // namespace radau
