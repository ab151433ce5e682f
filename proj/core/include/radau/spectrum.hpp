#pragma once

// Discrete measures and the clustered-spectrum model problem.

#include <string>
#include <vector>

#include "radau/precision.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {

/// Stepwise distribution function: strictly ascending points of increase
/// with positive jumps summing to one.
template <class Real>
struct DistributionFunction {
  std::vector<Real> nodes;
  std::vector<Real> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  Real total_weight() const;
  /// Throws std::invalid_argument on size mismatch, non-ascending nodes,
  /// nonpositive weights, or |sum(weights) - 1| > tol.
  void validate(const Real& tol) const;
};

/// Equal weights 1/m on the given nodes.
template <class Real>
DistributionFunction<Real> uniform_distribution(std::vector<Real> nodes);

/// node_1 = lam1, node_i = lam1 + (i-1)/(m-1) (lamm - lam1) rho^(m-i).
/// Throws std::invalid_argument on bad parameters or non-increasing output.
template <class Real>
std::vector<Real> strakos_nodes(int m, const Real& lam1, const Real& lamm, const Real& rho,
                                const PrecisionContext& ctx);

/// c_i = round(((p-1) i + (m-p)) / (m-1)), half away from zero, i = 1..m.
std::vector<int> cluster_sizes(int m, int p);

/// Replaces node i by c_i equally spaced nodes on [node_i - delta, node_i + delta]
/// (endpoints included, a single node stays at node_i), each carrying
/// weight_i / c_i.
template <class Real>
DistributionFunction<Real> blur(const DistributionFunction<Real>& base, const Real& delta, int p,
                                const PrecisionContext& ctx);

/// Gragg-Harrod reconstruction of the Jacobi matrix whose Gauss rule is the
/// given discrete measure. Throws Error on a nonpositive beta^2.
template <class Real>
JacobiMatrix<Real> rkpw(const DistributionFunction<Real>& dist, const PrecisionContext& ctx);

/// Entrywise rounding to the nearest binary64 value.
template <class Real>
JacobiMatrix<Real> round_to_native(const JacobiMatrix<Real>& t);

/// Parameters of the clustered model problem. Decimal strings so that they
/// are read exactly at the working precision.
struct ModelParameters {
  int m = 12;
  std::string lambda_first = "1e-6";
  std::string lambda_last = "1";
  std::string rho = "0.8";
  std::string delta = "1e-10";
  int p = 4;
};

template <class Real>
struct ModelProblem {
  JacobiMatrix<Real> matrix;     ///< A: native-rounded image of reference
  std::vector<Real> rhs;         ///< b = e_1
  JacobiMatrix<Real> reference;  ///< T at full context precision
  DistributionFunction<Real> distribution;
  Real lambda_min;               ///< smallest eigenvalue of A
  std::vector<Real> exact_solution;  ///< A^{-1} b
};

template <class Real>
ModelProblem<Real> build_model_problem(const ModelParameters& params, const PrecisionContext& ctx);

}  // namespace radau
