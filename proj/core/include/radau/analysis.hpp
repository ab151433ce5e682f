#pragma once

// Spectral diagnostics of the Gauss-Radau bound: eta/zeta terms, sensitivity
// to mu, the gamma^(mu) identity, and phase detection.
//
// Oracle quantities need lambda_1 (and for some, the spectrum of A); they
// are optional arguments and come back empty when not supplied.

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "radau/bounds.hpp"
#include "radau/krylov.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {

/// Lazily computed T_k and their eigendecompositions for a completed trace.
/// Thread-safe; entries are computed once.
template <class Real>
class RitzCache {
 public:
  RitzCache(const CGTrace<Real>& trace, PrecisionContext ctx);
  RitzCache(const RitzCache&) = delete;
  RitzCache& operator=(const RitzCache&) = delete;

  /// Largest k for which T_k is available (the trace length).
  std::size_t max_k() const noexcept { return trace_->size(); }
  /// Largest k for which beta_k is available.
  std::size_t max_beta_k() const noexcept { return max_k() == 0 ? 0 : max_k() - 1; }

  const PrecisionContext& context() const noexcept { return ctx_; }
  const CGTrace<Real>& trace() const noexcept { return *trace_; }
  const JacobiMatrix<Real>& jacobi(std::size_t k) const;
  const EigenDecomposition<Real>& eig(std::size_t k) const;
  Real beta(std::size_t k) const;
  const Real& theta1(std::size_t k) const { return eig(k).thetas.front(); }

 private:
  const CGTrace<Real>* trace_;
  PrecisionContext ctx_;
  JacobiMatrix<Real> full_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<JacobiMatrix<Real>>> jacobi_;
  mutable std::vector<std::unique_ptr<EigenDecomposition<Real>>> eig_;
};

/// eta_i = (beta_k s_{k,i})^2 / (theta_i - mu); zeta = sum eta_i.
/// zeta_solve is the independent evaluation beta_k^2 e_k^T (T_k - mu I)^{-1} e_k.
template <class Real>
struct EtaBreakdown {
  Real mu;
  std::vector<Real> etas;
  Real zeta;
  Real zeta_solve;

  /// alpha_{k+1}^(mu) = mu + zeta.
  Real alpha_mu() const { return mu + zeta; }
  /// 0-based index of the largest term.
  std::size_t max_index() const;
};

/// Throws ShiftNotBelowSpectrum unless mu < theta_1.
template <class Real>
EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                                 const Real& mu, const PrecisionContext& ctx);

template <class Real>
EtaBreakdown<Real> eta_breakdown(const JacobiMatrix<Real>& t, const Real& beta, const Real& mu,
                                 const PrecisionContext& ctx);

/// Sensitivity of the eta terms between two shifts mu <= lambda < theta_1.
template <class Real>
struct ShiftSensitivity {
  std::vector<Real> growth;            ///< (eta_i^(lambda) - eta_i^(mu)) / eta_i^(mu), evaluated directly
  std::vector<Real> growth_predicted;  ///< (lambda - mu) / (theta_i - lambda)
  Real alpha_diff;                     ///< alpha^(lambda) - alpha^(mu) from two eta breakdowns
  Real alpha_diff_formula;             ///< ((lambda-mu)/(theta_1-mu)) eta_1^(lambda) + (lambda-mu) E
  Real e_lambda_mu;                    ///< E^(lambda,mu) = 1 + sum_{i>=2} eta_i^(lambda) / (theta_i - mu)
  Real e_mu_lambda;                    ///< E^(mu,lambda)
};

/// Throws Error unless mu <= lambda < theta_1.
template <class Real>
ShiftSensitivity<Real> shift_sensitivity(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                              const Real& mu, const Real& lambda, const PrecisionContext& ctx);

/// |1/gamma_k^(mu) - (mu/phi_k + sum (mu/theta_i)^2 eta_i)| / (1/gamma_k^(mu)).
template <class Real>
Real omega_identity_check(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& beta,
                          const Real& mu, const Real& phi, const Real& gamma_mu, const PrecisionContext& ctx);

/// Relative discrepancy between e_k^T (T_k - mu I)^{-1} e_k from a shifted
/// solve and gamma_{k-1} + mu gamma_{k-1}^2 / phi_{k-1} + sum (mu/theta_i)^2 s_{k,i}^2 / (theta_i - mu).
template <class Real>
Real neumann_identity_check(const JacobiMatrix<Real>& t, const EigenDecomposition<Real>& eig, const Real& mu,
                            const Real& gamma_prev, const Real& phi_prev, const PrecisionContext& ctx);

/// (phi_k / mu - gamma_k^(mu)) / gamma_k^(mu).
template <class Real>
Real relative_distance(const Real& phi, const Real& mu, const Real& gamma_mu);

/// Terms explaining the gap between the Gauss-Radau and simple bounds.
template <class Real>
struct NegligibleTerms {
  Real first;            ///< (mu/theta_1)^2 eta_1 / mu
  Real rest;             ///< sum_{i>=2} (beta s_{k,i} / theta_i)^2 mu / (theta_i - mu)
  /// phi_k (first + rest) equals the relative distance.
  Real bracket() const { return first + rest; }
  std::optional<Real> first_upper;  ///< (lambda_1/theta_1)^2 eta_1 / mu
  std::optional<Real> rest_upper;   ///< sum_{i>=2} (beta s_{k,i} / theta_i)^2 lambda_1 / (theta_i - lambda_1)
  Real eta1_over_mu;                ///< eta_1 / mu
};

template <class Real>
NegligibleTerms<Real> negligible_terms(const EigenDecomposition<Real>& eig, const EtaBreakdown<Real>& eta,
                                       const Real& beta, const std::optional<Real>& lambda1);

/// First k with theta1[k-1] - lambda1 < lambda1 - mu, i.e. theta1[i] is
/// the smallest Ritz value of T_{i+1}. nullopt when it never happens.
template <class Real>
std::optional<std::size_t> phase2_onset_oracle(std::span<const Real> theta1, const Real& lambda1, const Real& mu);

struct PhaseMarkers {
  std::optional<std::size_t> ell1;
  std::optional<std::size_t> ell2;
};

/// reldist[k] for k = 0, 1, ...: ell1 is the last iteration of the initial
/// run with reldist < threshold, ell2 the first later iteration where it
/// drops below the threshold again.
template <class Real>
PhaseMarkers phase2_markers_practical(std::span<const Real> reldist, const Real& threshold);

template <class Real>
struct RitzAccuracy {
  Real theta;
  Real residual;                 ///< beta_k |s_{k,j}|
  Real relacc;                   ///< (beta_k s_{k,j} / theta_j)^2
  std::optional<Real> gap_bound; ///< (beta_k s_{k,j})^2 / gap_j
  std::optional<Real> weight;    ///< lambda_1 / (theta_j - lambda_1), j >= 2
};

/// `eigs_of_a` (ascending), when given, enables the gap and weight columns.
template <class Real>
std::vector<RitzAccuracy<Real>> ritz_accuracy(const EigenDecomposition<Real>& eig, const Real& beta,
                                              std::span<const Real> eigs_of_a);

/// lambda_2 - theta_1 <= (beta_k s_{k,1})^2 / (theta_1 - lambda_1) <= lambda_N - lambda_1.
template <class Real>
struct GapSandwich {
  Real lower;
  Real middle;
  Real upper;
};

template <class Real>
GapSandwich<Real> gap_sandwich(const EigenDecomposition<Real>& eig, const Real& beta, std::span<const Real> eigs_of_a);

/// rho_k = (theta1^(k+1) - lambda_1) / (theta1^(k) - lambda_1); nullopt
/// when theta1^(k) == lambda_1. Indexing as in phase2_onset_oracle.
template <class Real>
std::optional<Real> convergence_ratio(std::span<const Real> theta1, std::size_t k, const Real& lambda1);

/// h_k = (lambda_1 - mu) / (theta1^(k) - lambda_1); nullopt on a collision.
template <class Real>
std::optional<Real> h_ratio(const Real& theta1, const Real& lambda1, const Real& mu);

/// alpha_{k+1} - alpha_{k+1}^(lambda_1) evaluated three ways.
template <class Real>
struct Closeness {
  Real exact;      ///< alpha_{k+1} - lambda_1 - zeta_k^(lambda_1)
  Real expansion;     ///< eta_1^(lambda_1) (theta1^(k+1)-lambda_1)/(theta1^(k)-theta1^(k+1)) + (theta1^(k+1)-lambda_1) E
  Real predicted;  ///< eta_1^(lambda_1) rho_k / (1 - rho_k)
  Real rho;
};

/// Requires 1 <= k < cache.max_k() and lambda_1 < theta1^(k+1).
template <class Real>
std::optional<Closeness<Real>> closeness(const RitzCache<Real>& cache, std::size_t k, const Real& lambda1);

/// One row of the per-mu analysis table.
template <class Real>
struct AnalysisRow {
  std::size_t k = 0;
  Real theta1;
  std::optional<Real> theta1_minus_lambda1;
  std::optional<Real> eta1;
  std::optional<std::size_t> eta_max_index;  ///< 1-based
  std::optional<Real> eta_max;
  std::optional<Real> zeta;
  std::optional<Real> h;
  std::optional<Real> rho;
  Real reldist;
  std::optional<int> phase;
  std::optional<Real> omega_discrepancy;
  std::optional<NegligibleTerms<Real>> negligible;
};

/// Rows k = 1 .. cache.max_beta_k() for one estimator. lambda1 switches on
/// the oracle columns. Rows where mu is not below theta_1 carry empty eta
/// columns instead of failing.
template <class Real>
std::vector<AnalysisRow<Real>> analyze_mu(const RitzCache<Real>& cache, const std::vector<BoundRecord<Real>>& series,
                                          const Real& mu, const std::optional<Real>& lambda1);

}  // namespace radau
