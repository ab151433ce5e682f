#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "radau/analysis.hpp"
#include "radau/errors.hpp"
#include "radau/spectrum.hpp"

namespace radau::cli {

namespace {

using Check = std::function<std::optional<std::string>()>;

std::optional<std::string> expect_close(const std::string& what, double got, double want, double tol) {
  if (std::abs(got - want) <= tol * std::max(1.0, std::abs(want))) return std::nullopt;
  return what + ": got " + format_real(got, 17) + ", expected " + format_real(want, 17);
}

JacobiMatrix<double> random_jacobi(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> a(2.0, 4.0);
  std::uniform_real_distribution<double> b(0.1, 0.9);
  std::vector<double> alphas(n);
  std::vector<double> betas(n - 1);
  for (auto& x : alphas) x = a(rng);
  for (auto& x : betas) x = b(rng);
  return {alphas, betas};
}

std::optional<std::string> check_eig() {
  const auto ctx = PrecisionContext::native();
  const auto e = eig_tridiagonal(JacobiMatrix<double>({2.0, 2.0}, {1.0}), ctx);
  if (auto f = expect_close("theta_1", e.thetas[0], 1.0, 1e-14)) return f;
  return expect_close("theta_2", e.thetas[1], 3.0, 1e-14);
}

std::optional<std::string> check_shifted_solve() {
  const auto ctx = PrecisionContext::native();
  const std::vector<double> rhs{0.0, 1.0};
  const auto y = solve_shifted(JacobiMatrix<double>({2.0, 2.0}, {1.0}), 0.0, std::span<const double>(rhs), ctx);
  if (auto f = expect_close("y_1", y[0], -1.0 / 3.0, 1e-14)) return f;
  return expect_close("y_2", y[1], 2.0 / 3.0, 1e-14);
}

std::optional<std::string> check_gamma_paths() {
  const double direct = update_gamma_mu(1.0, 0.5, 0.25, 1.0);
  if (auto f = expect_close("gamma_1^(mu)", direct, 2.0 / 3.0, 1e-15)) return f;
  const double alpha2 = update_alpha_mu(1.0, 2.0, 1.0, 1.0);
  if (auto f = expect_close("alpha_2^(mu)", alpha2, 2.0, 1e-15)) return f;
  return expect_close("gamma via alpha", gamma_from_alpha(alpha2, 0.25, 0.5), 2.0 / 3.0, 1e-15);
}

std::optional<std::string> check_identity_worked_case() {
  const auto ctx = PrecisionContext::native();
  const JacobiMatrix<double> t({2.0}, {});
  const auto eig = eig_tridiagonal(t, ctx);
  const double d = omega_identity_check(t, eig, 1.0, 1.0, 0.8, 2.0 / 3.0, ctx);
  if (d <= 1e-14) return std::nullopt;
  return "relative discrepancy " + format_real(d, 3);
}

std::optional<std::string> check_rkpw() {
  const auto ctx = PrecisionContext::digits(32);
  PrecisionScope scope(ctx);
  DistributionFunction<MpReal> dist;
  dist.nodes = {MpReal(-1), MpReal(1)};
  dist.weights = {MpReal("0.5"), MpReal("0.5")};
  const auto t = rkpw(dist, ctx);
  const double tol = 1e-28;
  if (auto f = expect_close("alpha_1", t.alpha(0).to_double(), 0.0, tol)) return f;
  if (auto f = expect_close("alpha_2", t.alpha(1).to_double(), 0.0, tol)) return f;
  return expect_close("beta_1", t.beta(0).to_double(), 1.0, tol);
}

std::optional<std::string> check_identity_matrix() {
  const auto ctx = PrecisionContext::native();
  const SparseSymmetricMatrix<double> a(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  const std::vector<double> b{1.0, 0.0, 0.0};
  CGOptions<double> opts;
  opts.exact_solution = b;
  const auto trace = run_cg(a, std::span<const double>(b), ctx, opts);
  if (trace.size() != 1) return "expected one iteration, got " + std::to_string(trace.size());
  const auto est = estimate(trace, 1.0, "one");
  const auto& r = est.history().front();
  if (auto f = expect_close("gauss_lower", r.gauss_lower, 1.0, 1e-15)) return f;
  if (auto f = expect_close("radau_upper", r.radau_upper, 1.0, 1e-15)) return f;
  if (auto f = expect_close("simple_upper", r.simple_upper, 1.0, 1e-15)) return f;
  const auto acc = adaptive_accept(trace, est.history(), 0.25);
  if (acc.size() != 1 || acc.front().ell != 0) return std::string("expected immediate acceptance of ell = 0");
  return expect_close("omega", acc.front().omega, 1.0, 1e-15);
}

std::optional<std::string> check_bound_chain() {
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  const ModelParameters params{6, "1e-3", "1", "0.8", "1e-5", 2};
  const auto prob = build_model_problem<MpReal>(params, ctx);
  CGOptions<MpReal> opts;
  opts.exact_solution = prob.exact_solution;
  const TridiagonalOperator<MpReal> op(prob.matrix);
  const auto trace = run_cg(op, std::span<const MpReal>(prob.rhs), ctx, opts);
  const MpReal mu = MpReal("0.5") * prob.lambda_min;
  const auto est = estimate(trace, mu, "half");
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const auto& b = est.history()[k];
    const MpReal& err = *trace[k].true_err2;
    const bool ok = b.gauss_lower <= err && err < b.radau_upper && (k == 0 || b.radau_upper < b.simple_upper);
    if (!ok) return "ordering violated at k = " + std::to_string(k);
  }
  return std::nullopt;
}

std::optional<std::string> check_random_consistency() {
  const auto ctx = PrecisionContext::native();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_jacobi(rng, 12);
    const double mu = 0.9 * eig_tridiagonal(t, ctx).thetas.front();
    const auto trace = cg_coefficients(t, ctx);
    const auto est = estimate(trace, mu, "mu");
    for (std::size_t k = 1; k + 1 < trace.size(); ++k) {
      const auto& r = est.history()[k];
      if (auto f = expect_close("gamma paths", r.gamma_mu_alpha, r.gamma_mu, 1e-10)) return f;
      auto alphas = t.leading(k + 1).alphas();
      alphas.back() = r.alpha_mu;
      const JacobiMatrix<double> tmu(alphas, t.leading(k + 1).betas());
      const auto thetas = eig_tridiagonal(tmu, ctx).thetas;
      if (auto f = expect_close("prescribed eigenvalue", thetas.front(), mu, 1e-10)) return f;
      const auto eta = eta_breakdown(t.leading(k), std::sqrt(lanczos_beta2(trace, k)), mu, ctx);
      if (auto f = expect_close("mu + zeta", eta.alpha_mu(), r.alpha_mu, 1e-10)) return f;
    }
  }
  return std::nullopt;
}

}  // namespace

int cmd_selftest(std::ostream& log) {
  const std::vector<std::pair<std::string, Check>> checks{
      {"eigenvalues of a 2x2 Jacobi matrix", check_eig},
      {"shifted tridiagonal solve", check_shifted_solve},
      {"gamma^(mu) direct and alpha paths", check_gamma_paths},
      {"gamma^(mu) spectral identity, one step", check_identity_worked_case},
      {"rkpw on a two-point measure", check_rkpw},
      {"identity matrix bounds and acceptance", check_identity_matrix},
      {"bound ordering on a small model problem", check_bound_chain},
      {"random Jacobi consistency", check_random_consistency},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    std::optional<std::string> failure;
    try {
      failure = check();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (failure) {
      ++failures;
      log << "FAIL " << name << ": " << *failure << '\n';
    } else {
      log << "PASS " << name << '\n';
    }
  }
  log << (failures == 0 ? "selftest passed" : "selftest failed: " + std::to_string(failures) + " check(s)") << '\n';
  return failures;
}

}  // namespace radau::cli
