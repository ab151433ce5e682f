#include "radau/spectrum.hpp"

#include <stdexcept>
#include <string>

#include "radau/errors.hpp"

namespace radau {

template <class Real>
Real DistributionFunction<Real>::total_weight() const {
  Real sum(0);
  for (const auto& w : weights) sum += w;
  return sum;
}

template <class Real>
void DistributionFunction<Real>::validate(const Real& tol) const {
  using std::abs;
  if (nodes.size() != weights.size()) throw std::invalid_argument("distribution: nodes/weights size mismatch");
  if (nodes.empty()) throw std::invalid_argument("distribution: no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("distribution: nodes not strictly increasing at index " + std::to_string(i));
    }
    if (!(weights[i] > Real(0))) {
      throw std::invalid_argument("distribution: weight " + std::to_string(i) + " is not positive");
    }
  }
  if (abs(total_weight() - Real(1)) > tol) {
    throw std::invalid_argument("distribution: weights sum to " + format_real(total_weight(), 17) + ", not 1");
  }
}

template <class Real>
DistributionFunction<Real> uniform_distribution(std::vector<Real> nodes) {
  DistributionFunction<Real> out;
  const Real w = Real(1) / Real(static_cast<long>(nodes.size()));
  out.weights.assign(nodes.size(), w);
  out.nodes = std::move(nodes);
  return out;
}

template <class Real>
std::vector<Real> strakos_nodes(int m, const Real& lam1, const Real& lamm, const Real& rho,
                                const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (m < 2) throw std::invalid_argument("strakos_nodes: m must be at least 2");
  if (!(lam1 < lamm)) throw std::invalid_argument("strakos_nodes: need lam1 < lamm");
  if (!(rho > Real(0)) || rho > Real(1)) throw std::invalid_argument("strakos_nodes: rho must lie in (0, 1]");
  std::vector<Real> nodes;
  nodes.reserve(static_cast<std::size_t>(m));
  nodes.push_back(lam1);
  const Real span = lamm - lam1;
  for (int i = 2; i <= m; ++i) {
    Real factor(1);
    for (int j = 0; j < m - i; ++j) factor *= rho;
    nodes.push_back(lam1 + Real(i - 1) / Real(m - 1) * span * factor);
    if (!(nodes.back() > nodes[nodes.size() - 2])) {
      throw std::invalid_argument("strakos_nodes: output not increasing at i = " + std::to_string(i));
    }
  }
  return nodes;
}

std::vector<int> cluster_sizes(int m, int p) {
  if (p < 1) throw std::invalid_argument("cluster_sizes: p must be at least 1");
  if (m < 1) throw std::invalid_argument("cluster_sizes: m must be at least 1");
  if (m == 1) return {p};
  std::vector<int> sizes;
  sizes.reserve(static_cast<std::size_t>(m));
  const long den = m - 1;
  for (int i = 1; i <= m; ++i) {
    const long num = static_cast<long>(p - 1) * i + (m - p);
    // Half away from zero; num is positive for p >= 1, i >= 1.
    sizes.push_back(static_cast<int>((2 * num + den) / (2 * den)));
  }
  return sizes;
}

template <class Real>
DistributionFunction<Real> blur(const DistributionFunction<Real>& base, const Real& delta, int p,
                                const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t m = base.size();
  if (m == 0) throw std::invalid_argument("blur: empty distribution");
  if (!(delta > Real(0))) throw std::invalid_argument("blur: delta must be positive");
  const auto sizes = cluster_sizes(static_cast<int>(m), p);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(base.nodes[i] + delta < base.nodes[i + 1] - delta)) {
      throw std::invalid_argument("blur: clusters " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                                  " overlap; delta too large");
    }
  }
  DistributionFunction<Real> out;
  for (std::size_t i = 0; i < m; ++i) {
    const int c = sizes[i];
    const Real w = base.weights[i] / Real(c);
    if (c == 1) {
      out.nodes.push_back(base.nodes[i]);
      out.weights.push_back(w);
      continue;
    }
    for (int j = 0; j < c; ++j) {
      out.nodes.push_back(base.nodes[i] - delta + Real(2) * delta * Real(j) / Real(c - 1));
      out.weights.push_back(w);
    }
  }
  return out;
}

template <class Real>
JacobiMatrix<Real> rkpw(const DistributionFunction<Real>& dist, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t n = dist.size();
  if (n == 0 || dist.weights.size() != n) throw std::invalid_argument("rkpw: invalid distribution");

  // Rational Rutishauser-Kahan-Pal-Walker update: adds one point at a time,
  // updating the diagonal (alpha) and squared couplings (beta^2, with
  // beta2[0] holding the total mass) by a chain of plane rotations.
  std::vector<Real> alpha = dist.nodes;
  std::vector<Real> beta2(n, Real(0));
  beta2[0] = dist.weights[0];
  for (std::size_t step = 0; step + 1 < n; ++step) {
    Real pn = dist.weights[step + 1];
    Real gam(1);
    Real sig(0);
    Real t(0);
    const Real lambda = dist.nodes[step + 1];
    for (std::size_t k = 0; k <= step + 1; ++k) {
      const Real rho = beta2[k] + pn;
      const Real tmp = gam * rho;
      Real tsig = sig;
      if (rho <= Real(0)) {
        gam = Real(1);
        sig = Real(0);
      } else {
        gam = beta2[k] / rho;
        sig = pn / rho;
      }
      const Real tk = sig * (alpha[k] - lambda) - gam * t;
      alpha[k] -= tk - t;
      t = tk;
      if (sig <= Real(0)) {
        pn = tsig * beta2[k];
      } else {
        pn = t * t / sig;
      }
      beta2[k] = tmp;
    }
  }

  std::vector<Real> betas;
  betas.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    if (!(beta2[j] > Real(0))) {
      throw Error("rkpw: nonpositive beta^2 at index " + std::to_string(j) +
                  " (numerical breakdown); increase the working precision");
    }
    using std::sqrt;
    betas.push_back(sqrt(beta2[j]));
  }
  return JacobiMatrix<Real>(std::move(alpha), std::move(betas));
}

template <class Real>
JacobiMatrix<Real> round_to_native(const JacobiMatrix<Real>& t) {
  std::vector<Real> alphas;
  std::vector<Real> betas;
  for (const auto& a : t.alphas()) alphas.emplace_back(to_double(a));
  for (const auto& b : t.betas()) betas.emplace_back(to_double(b));
  return JacobiMatrix<Real>(std::move(alphas), std::move(betas));
}

template <class Real>
ModelProblem<Real> build_model_problem(const ModelParameters& params, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const Real lam1 = parse_real<Real>(params.lambda_first);
  const Real lamm = parse_real<Real>(params.lambda_last);
  const Real rho = parse_real<Real>(params.rho);
  const Real delta = parse_real<Real>(params.delta);

  auto base = uniform_distribution(strakos_nodes(params.m, lam1, lamm, rho, ctx));
  ModelProblem<Real> problem;
  problem.distribution = params.p == 1 ? base : blur(base, delta, params.p, ctx);
  problem.distribution.validate(ctx.tolerance<Real>());
  problem.reference = rkpw(problem.distribution, ctx);
  problem.matrix = round_to_native(problem.reference);

  const std::size_t n = problem.matrix.size();
  problem.rhs.assign(n, Real(0));
  problem.rhs[0] = Real(1);
  problem.lambda_min = eig_tridiagonal(problem.matrix, ctx).thetas.front();
  if (!(problem.lambda_min > Real(0))) throw Error("model problem: smallest eigenvalue is not positive");
  problem.exact_solution = solve_shifted(problem.matrix, Real(0), std::span<const Real>(problem.rhs), ctx);
  return problem;
}

#define RADAU_INSTANTIATE(Real)                                                                            \
  template struct DistributionFunction<Real>;                                                             \
  template DistributionFunction<Real> uniform_distribution(std::vector<Real>);                            \
  template std::vector<Real> strakos_nodes(int, const Real&, const Real&, const Real&,                    \
                                           const PrecisionContext&);                                      \
  template DistributionFunction<Real> blur(const DistributionFunction<Real>&, const Real&, int,           \
                                           const PrecisionContext&);                                      \
  template JacobiMatrix<Real> rkpw(const DistributionFunction<Real>&, const PrecisionContext&);           \
  template JacobiMatrix<Real> round_to_native(const JacobiMatrix<Real>&);                                 \
  template ModelProblem<Real> build_model_problem(const ModelParameters&, const PrecisionContext&);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
