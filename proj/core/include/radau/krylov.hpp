#pragma once

// Lanczos and conjugate gradients at configurable precision.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radau/operator.hpp"
#include "radau/precision.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {

struct LanczosOptions {
  bool keep_basis = false;
  /// Full reorthogonalization against every previous basis vector
  /// (implies keep_basis).
  bool reorthogonalize = false;
};

/// After k steps: alphas = alpha_1..alpha_k, betas = beta_1..beta_k,
/// v = v_{k+1}. `terminal` is set once beta_k falls below the breakdown
/// threshold, i.e. the grade of the starting vector has been reached.
template <class Real>
struct LanczosState {
  std::vector<Real> alphas;
  std::vector<Real> betas;
  std::vector<Real> v_prev;
  std::vector<Real> v;
  std::vector<std::vector<Real>> basis;  ///< v_1..v_{k+1} when retained
  LanczosOptions options;
  bool terminal = false;

  std::size_t steps() const noexcept { return alphas.size(); }
  /// T_k (requires at least one step).
  JacobiMatrix<Real> jacobi() const;
};

/// Normalizes `start` and returns the state before the first step.
template <class Real>
LanczosState<Real> lanczos_start(std::span<const Real> start, const PrecisionContext& ctx,
                                 LanczosOptions options = {});

/// Appends alpha_k, beta_k and v_{k+1}. Throws std::logic_error when called
/// on a terminal state.
template <class Real>
void lanczos_step(LanczosState<Real>& state, const LinearOperator<Real>& a, const PrecisionContext& ctx);

/// State of Algorithm cgiter: after k steps holds x_k, r_k, p_k,
/// gamma_prev = gamma_{k-1}, delta = delta_k and rnorm2 = r_k^T r_k.
template <class Real>
struct CGState {
  std::size_t k = 0;
  std::vector<Real> x;
  std::vector<Real> r;
  std::vector<Real> p;
  Real gamma_prev{};
  Real delta{};
  Real rnorm2{};
};

/// x_0 = 0, r_0 = p_0 = b.
template <class Real>
CGState<Real> cg_start(std::span<const Real> b, const PrecisionContext& ctx);

/// One CG iteration. Throws NotPositiveDefinite ("matrix not SPD") when
/// p^T A p <= 0.
template <class Real>
void cg_step(CGState<Real>& state, const LinearOperator<Real>& a, const PrecisionContext& ctx);

/// Iteration k of a CG run: delta_0 is 0 and true_err2 is the squared A-norm
/// of the error when the exact solution is known.
template <class Real>
struct CGRecord {
  std::size_t k = 0;
  Real gamma;
  Real delta;
  Real rnorm2;
  std::optional<Real> true_err2;
};

enum class CGStop {
  grade_reached,   ///< residual below the breakdown threshold
  tolerance,       ///< ||r_k|| / ||b|| below CGOptions::stop_tolerance
  max_iterations,
  observer,        ///< the observer asked to stop
};

template <class Real>
struct CGTrace {
  std::vector<CGRecord<Real>> records;
  CGStop stop = CGStop::max_iterations;
  /// Squared norm of the residual after the last recorded step.
  Real final_rnorm2;

  std::size_t size() const noexcept { return records.size(); }
  const CGRecord<Real>& operator[](std::size_t k) const { return records.at(k); }
  bool has_true_errors() const noexcept { return !records.empty() && records.front().true_err2.has_value(); }
};

template <class Real>
struct CGOptions {
  std::size_t max_iterations = 0;  ///< 0: twice the dimension
  std::optional<std::vector<Real>> exact_solution;
  /// Reorthogonalize each residual against all previous ones.
  bool reorthogonalize = false;
  /// Optional relative residual threshold ||r_k|| / ||b||.
  std::optional<Real> stop_tolerance;
};

std::string to_string(CGStop stop);

/// Called after each completed record with the state holding x_{k+1};
/// returning false stops the run.
template <class Real>
using CGObserver = std::function<bool(const CGRecord<Real>&, const CGState<Real>&)>;

/// Runs CG from x_0 = 0. Record k holds gamma_k, delta_k, ||r_k||^2 and
/// (optionally) the true error of x_k. The run stops once
/// ||r_{k+1}|| <= 10^-(D-4) (||A||_inf ||x_{k+1}|| + ||b||), which marks the
/// grade; records therefore run 0..n-1.
template <class Real>
CGTrace<Real> run_cg(const LinearOperator<Real>& a, std::span<const Real> b, const PrecisionContext& ctx,
                     const CGOptions<Real>& options = {}, const CGObserver<Real>& observer = {});

/// T_k from the first k CG records: alpha_1 = 1/gamma_0,
/// beta_j = sqrt(delta_j)/gamma_{j-1}, alpha_{j+1} = 1/gamma_j + delta_j/gamma_{j-1}.
/// Throws Error on nonpositive coefficients or k > trace size.
template <class Real>
JacobiMatrix<Real> cg_to_lanczos(const CGTrace<Real>& trace, std::size_t k);

/// The CG coefficients that generate T from b = e_1, read off the LDL^T
/// factorization: gamma_j = 1 / d_j, delta_j = l_j^2, ||r_j||^2 = delta_1 ... delta_j.
/// Records run 0..N-1. Throws NotPositiveDefinite when T is not SPD.
template <class Real>
CGTrace<Real> cg_coefficients(const JacobiMatrix<Real>& t, const PrecisionContext& ctx);

/// beta_k^2 = delta_k / gamma_{k-1}^2 (k >= 1, needs records 0..k).
template <class Real>
Real lanczos_beta2(const CGTrace<Real>& trace, std::size_t k);

/// (x - x_k)^T A (x - x_k).
template <class Real>
Real true_error2(std::span<const Real> x_k, std::span<const Real> exact, const LinearOperator<Real>& a,
                 const PrecisionContext& ctx);

/// Extreme eigenvalues of A through fully reorthogonalized Lanczos from the
/// normalized all-ones vector (used for oracle quantities on ingested
/// matrices). Returns {smallest, largest}.
template <class Real>
std::pair<Real, Real> extreme_eigenvalues(const LinearOperator<Real>& a, const PrecisionContext& ctx);

}  // namespace radau
