// Acceptance suite: one PASS/FAIL line per criterion, exit status = number
// of failed criteria. Tolerances are pinned here and printed with each line.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "radau/analysis.hpp"
#include "radau/bounds.hpp"
#include "radau/krylov.hpp"
#include "radau/operator.hpp"
#include "radau/spectrum.hpp"

namespace radau::acceptance {
namespace {

using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class Real>
std::string sci(const Real& x) {
  return format_real(x, 3);
}

std::string opt_index(const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : "none"; }

/// The four shifts of the model experiment, derived from lambda_1 here
/// rather than through the CLI spec parser.
struct Shift {
  std::string name;
  MpReal mu;
};

std::vector<Shift> experiment_shifts(const MpReal& lambda1) {
  auto relative = [&](int d) { return (MpReal(1) - MpReal("1e-" + std::to_string(d))) * lambda1; };
  std::vector<Shift> out{{"mu3", relative(3)}, {"mu8", relative(8)}};
  double below = lambda1.to_double();
  if (MpReal(below) > lambda1) below = std::nextafter(below, 0.0);
  out.push_back({"mu16", MpReal(below)});
  out.push_back({"mu50", relative(50)});
  return out;
}

/// CG on the default model problem (N = 30) at D digits with true errors.
struct ModelRun {
  PrecisionContext ctx;
  ModelProblem<MpReal> problem;
  CGTrace<MpReal> trace;
  std::vector<Shift> shifts;
  std::vector<MuEstimator<MpReal>> estimators;

  explicit ModelRun(int digits)
      : ctx(PrecisionContext::digits(digits)), problem(make(ctx)), trace(run(ctx, problem)) {
    PrecisionScope scope(ctx);
    shifts = experiment_shifts(problem.lambda_min);
    for (const auto& s : shifts) estimators.push_back(estimate(trace, s.mu, s.name));
  }

  static ModelProblem<MpReal> make(const PrecisionContext& ctx) {
    PrecisionScope scope(ctx);
    return build_model_problem<MpReal>(ModelParameters{}, ctx);
  }

  static CGTrace<MpReal> run(const PrecisionContext& ctx, const ModelProblem<MpReal>& p) {
    PrecisionScope scope(ctx);
    CGOptions<MpReal> options;
    options.exact_solution = p.exact_solution;
    const TridiagonalOperator<MpReal> op(p.matrix);
    return run_cg<MpReal>(op, std::span<const MpReal>(p.rhs), ctx, options);
  }

  std::size_t n() const { return problem.matrix.size(); }

  std::vector<MpReal> theta1() const {
    PrecisionScope scope(ctx);
    RitzCache<MpReal> cache(trace, ctx);
    std::vector<MpReal> out;
    for (std::size_t k = 1; k <= cache.max_k(); ++k) out.push_back(cache.theta1(k));
    return out;
  }
};

const ModelRun& run128() {
  static const ModelRun run(128);
  return run;
}

// 1. gauss <= eps < radau < simple for k < n-1, every shift.
Outcome bound_chain() {
  const auto& r = run128();
  PrecisionScope scope(r.ctx);
  if (r.trace.size() != r.n()) return {false, "trace has " + std::to_string(r.trace.size()) + " records"};
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::size_t at_start = 0;
  std::ostringstream where;
  for (const auto& est : r.estimators) {
    for (std::size_t k = 0; k + 1 < r.n(); ++k) {
      const auto& b = est.history()[k];
      const MpReal& eps = *r.trace[k].true_err2;
      ++checks;
      const bool ok = b.gauss_lower <= eps && eps < b.radau_upper && b.radau_upper < b.simple_upper;
      if (ok) continue;
      ++violations;
      if (k == 0) ++at_start;
      const bool equal_at_start = k == 0 && b.radau_upper == b.simple_upper;
      if (violations <= 8) {
        where << " " << est.label() << "@k=" << k << (equal_at_start ? "(radau==simple)" : "");
      }
    }
  }
  std::ostringstream d;
  d << checks << " (k, mu) pairs, " << violations << " violations";
  if (violations) d << ", " << at_start << " at k=0:" << where.str();
  return {violations == 0, d.str()};
}

// 2. Oracle onset of phase 2.
Outcome onset() {
  const auto& r = run128();
  const ModelRun r64(64);
  auto onset_of = [](const ModelRun& run, std::size_t shift) {
    PrecisionScope scope(run.ctx);
    const auto theta1 = run.theta1();
    return phase2_onset_oracle(std::span<const MpReal>(theta1), run.problem.lambda_min, run.shifts[shift].mu);
  };
  const auto a3 = onset_of(r, 0);
  const auto a8 = onset_of(r, 1);
  const auto b3 = onset_of(r64, 0);
  const auto b8 = onset_of(r64, 1);
  auto near = [](const std::optional<std::size_t>& k, std::size_t want) {
    return k && (*k + 1 >= want) && (*k <= want + 1);
  };
  const bool pass = a3 == 13u && a8 == 15u && near(b3, 13) && near(b8, 15);
  return {pass, "D=128: mu3 " + opt_index(a3) + " (13), mu8 " + opt_index(a8) + " (15); D=64: mu3 " + opt_index(b3) +
                    ", mu8 " + opt_index(b8) + " (+-1)"};
}

// 3. Practical markers with threshold 0.5.
Outcome markers() {
  const auto& r = run128();
  PrecisionScope scope(r.ctx);
  const std::vector<std::optional<std::size_t>> want_ell2{15, 18, 25, std::nullopt};
  bool pass = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < r.estimators.size(); ++i) {
    const auto& est = r.estimators[i];
    std::vector<MpReal> reldist;
    for (const auto& b : est.history()) reldist.push_back(relative_distance(b.phi, est.mu(), b.gamma_mu));
    const auto m = phase2_markers_practical(std::span<const MpReal>(reldist), MpReal("0.5"));
    pass = pass && m.ell1 == 12u && m.ell2 == want_ell2[i];
    d << est.label() << " ell1=" << opt_index(m.ell1) << " ell2=" << opt_index(m.ell2) << " (12/"
      << opt_index(want_ell2[i]) << ")" << (i + 1 < r.estimators.size() ? ", " : "");
  }
  return {pass, d.str()};
}

// 4. The gamma^(mu) spectral identity.
Outcome omega_identity() {
  const auto& r = run128();
  std::ostringstream d;
  bool pass = true;
  {
    PrecisionScope scope(r.ctx);
    RitzCache<MpReal> cache(r.trace, r.ctx);
    const MpReal tol("1e-100");
    for (const auto& est : r.estimators) {
      MpReal worst(0);
      std::size_t worst_k = 0;
      for (std::size_t k = 1; k <= cache.max_beta_k(); ++k) {
        const auto& b = est.history()[k];
        const MpReal disc =
            omega_identity_check(cache.jacobi(k), cache.eig(k), cache.beta(k), est.mu(), b.phi, b.gamma_mu, r.ctx);
        if (disc > worst) {
          worst = disc;
          worst_k = k;
        }
      }
      pass = pass && worst <= tol;
      d << est.label() << " " << sci(worst) << "@k=" << worst_k << ", ";
    }
    d << "limit 1e-100 at D=128; ";
  }
  const auto native = PrecisionContext::native();
  Rng rng(4004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_spd_jacobi<double>(rng, 20);
    const double mu = 0.9 * eig_tridiagonal(t, native).thetas.front();
    const auto trace = cg_coefficients(t, native);
    const auto est = estimate(trace, mu, "mu");
    for (std::size_t k = 1; k < t.size(); ++k) {
      const auto tk = t.leading(k);
      const auto& b = est.history()[k];
      worst = std::max(worst, omega_identity_check(tk, eig_tridiagonal(tk, native), t.beta(k - 1), mu, b.phi,
                                                   b.gamma_mu, native));
    }
  }
  pass = pass && worst <= 1e-8;
  d << "native 100x(20x20) worst " << sci(worst) << " (limit 1e-8)";
  return {pass, d.str()};
}

/// Smallest |theta - mu| over the spectrum of T_{k+1}^(mu) for every k,
/// relative to ||T||; returns the worst ratio to the tolerance.
template <class Real>
Real prescribed_worst(Rng& rng, const PrecisionContext& ctx, std::size_t instances) {
  using std::abs;
  PrecisionScope scope(ctx);
  Real worst(0);
  for (std::size_t trial = 0; trial < instances; ++trial) {
    const auto t = testing::random_spd_jacobi<Real>(rng, testing::uniform_size(rng, 2, 20));
    const Real mu = Real(testing::uniform(rng, 0.1, 0.99)) * eig_tridiagonal(t, ctx).thetas.front();
    const auto est = estimate(cg_coefficients(t, ctx), mu, "mu");
    const Real scale = ctx.relative<Real>(10) * t.norm_inf();
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const auto lead = t.leading(k + 1);
      auto alphas = lead.alphas();
      alphas.back() = est.history()[k].alpha_mu;
      const auto thetas = eig_tridiagonal(JacobiMatrix<Real>(alphas, lead.betas()), ctx).thetas;
      Real nearest = abs(thetas.front() - mu);
      for (const auto& th : thetas) {
        if (abs(th - mu) < nearest) nearest = abs(th - mu);
      }
      if (nearest / scale > worst) worst = nearest / scale;
    }
  }
  return worst;
}

// 5. T^(mu) has mu as an eigenvalue.
Outcome prescribed_eigenvalue() {
  Rng rng(5005);
  const double native = prescribed_worst<double>(rng, PrecisionContext::native(), 100);
  const MpReal mp = prescribed_worst<MpReal>(rng, PrecisionContext::digits(128), 100);
  return {native <= 1.0 && mp <= MpReal(1),
          "worst |theta - mu| / (10^-(D-10) ||T||): native " + sci(native) + ", D=128 " + sci(mp) +
              " over 100 instances each"};
}

// 6. rkpw and the eigendecomposition invert each other.
Outcome rkpw_roundtrip() {
  const auto& r = run128();
  PrecisionScope scope(r.ctx);
  const auto& dist = r.problem.distribution;
  const auto eig = eig_tridiagonal(r.problem.reference, r.ctx);
  if (eig.size() != dist.size()) return {false, "size mismatch"};
  MpReal node_err(0);
  MpReal weight_err(0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const MpReal dn = abs(eig.thetas[i] - dist.nodes[i]) / abs(dist.nodes[i]);
    const MpReal w = eig.first_components[i] * eig.first_components[i];
    const MpReal dw = abs(w - dist.weights[i]);
    if (dn > node_err) node_err = dn;
    if (dw > weight_err) weight_err = dw;
  }
  const bool pass = node_err <= r.ctx.relative<MpReal>(10) && weight_err <= r.ctx.relative<MpReal>(12);
  return {pass, std::to_string(dist.size()) + " points: nodes rel " + sci(node_err) + " (1e-118), weights abs " +
                    sci(weight_err) + " (1e-116)"};
}

// 7. The adaptive acceptance guarantee with tau = 0.25.
Outcome adaptive_guarantee() {
  const auto& r = run128();
  PrecisionScope scope(r.ctx);
  const MpReal tau("0.25");
  std::size_t accepted = 0;
  std::size_t violations = 0;
  MpReal worst(0);
  for (const auto& est : r.estimators) {
    for (const auto& a : adaptive_accept(r.trace, est.history(), tau)) {
      ++accepted;
      const MpReal& eps = *r.trace[a.ell].true_err2;
      const MpReal over = (a.omega - eps) / eps;
      const MpReal under = (eps - a.delta_lk) / eps;
      if (over > tau || under > tau) ++violations;
      if (over > worst) worst = over;
      if (under > worst) worst = under;
    }
  }
  return {violations == 0 && accepted > 0, std::to_string(accepted) + " accepted bounds over 4 shifts, " +
                                               std::to_string(violations) + " violations, worst relative " +
                                               sci(worst) + " (tau 0.25)"};
}

template <class Real>
Real gamma_paths_worst(Rng& rng, const PrecisionContext& ctx, std::size_t instances) {
  using std::abs;
  PrecisionScope scope(ctx);
  Real worst(0);
  for (std::size_t trial = 0; trial < instances; ++trial) {
    const auto t = testing::random_spd_jacobi<Real>(rng, testing::uniform_size(rng, 2, 20));
    const Real mu = Real(testing::uniform(rng, 0.1, 0.99)) * eig_tridiagonal(t, ctx).thetas.front();
    const auto est = estimate(cg_coefficients(t, ctx), mu, "mu");
    for (const auto& b : est.history()) {
      const Real rel = abs(b.gamma_mu_alpha - b.gamma_mu) / abs(b.gamma_mu) / ctx.relative<Real>(10);
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

// 8. gamma^(mu) from its own recurrence and through alpha^(mu).
Outcome consistency_triple() {
  Rng rng(8008);
  const double native = gamma_paths_worst<double>(rng, PrecisionContext::native(), 100);
  const MpReal mp = gamma_paths_worst<MpReal>(rng, PrecisionContext::digits(128), 100);
  return {native <= 1.0 && mp <= MpReal(1), "worst relative gap / 10^-(D-10): native " + sci(native) + ", D=128 " +
                                                sci(mp) + " over 100 problems each"};
}

// 9. The last error equals the Gauss term.
Outcome final_step() {
  const auto& r = run128();
  PrecisionScope scope(r.ctx);
  const std::size_t last = r.trace.size() - 1;
  const MpReal& eps = *r.trace[last].true_err2;
  const MpReal gauss = r.estimators.front().history()[last].gauss_lower;
  const MpReal rel = abs(eps - gauss) / eps;
  return {last + 1 == r.n() && rel <= r.ctx.relative<MpReal>(12),
          "k=" + std::to_string(last) + ": relative " + sci(rel) + " (limit 1e-116)"};
}

// 10. Property suites over random instances at D=40.
Outcome property_suites() {
  using std::abs;
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  const MpReal tol = ctx.relative<MpReal>(10);
  Rng rng(1010);
  std::size_t monotone_bad = 0;
  std::size_t symmetry_bad = 0;
  std::size_t growth_bad = 0;
  std::size_t interlace_bad = 0;
  const std::size_t instances = 100;
  for (std::size_t trial = 0; trial < instances; ++trial) {
    const auto t = testing::random_spd_jacobi<MpReal>(rng, testing::uniform_size(rng, 3, 16));
    const MpReal theta_min = eig_tridiagonal(t, ctx).thetas.front();
    const double lo = testing::uniform(rng, 0.05, 0.5);
    const double hi = testing::uniform(rng, lo + 0.05, 0.98);
    const MpReal mu = MpReal(lo) * theta_min;
    const MpReal lambda = MpReal(hi) * theta_min;
    const auto trace = cg_coefficients(t, ctx);
    const auto est_mu = estimate(trace, mu, "mu");
    const auto est_lambda = estimate(trace, lambda, "lambda");
    for (std::size_t k = 0; k < t.size(); ++k) {
      const MpReal& a_mu = est_mu.history()[k].alpha_mu;
      const MpReal& a_lambda = est_lambda.history()[k].alpha_mu;
      if (!(a_mu < a_lambda && a_lambda < t.alpha(k))) ++monotone_bad;
    }
    for (std::size_t k = 1; k < t.size(); ++k) {
      const auto tk = t.leading(k);
      const auto eig = eig_tridiagonal(tk, ctx);
      const auto s = shift_sensitivity(tk, eig, t.beta(k - 1), mu, lambda, ctx);
      if (abs(s.e_lambda_mu - s.e_mu_lambda) > tol * abs(s.e_lambda_mu)) ++symmetry_bad;
      for (std::size_t i = 0; i < s.growth.size(); ++i) {
        if (abs(s.growth[i] - s.growth_predicted[i]) > tol * abs(s.growth_predicted[i])) ++growth_bad;
      }
    }
    const auto tj = testing::random_jacobi<MpReal>(rng, testing::uniform_size(rng, 2, 16));
    for (std::size_t k = 2; k <= tj.size(); ++k) {
      const auto outer = eig_tridiagonal(tj.leading(k), ctx).thetas;
      const auto inner = eig_tridiagonal(tj.leading(k - 1), ctx).thetas;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        if (!(outer[i] < inner[i] && inner[i] < outer[i + 1])) ++interlace_bad;
      }
    }
  }
  const bool pass = monotone_bad == 0 && symmetry_bad == 0 && growth_bad == 0 && interlace_bad == 0;
  std::ostringstream d;
  d << instances << " instances each at D=40, violations: monotonicity " << monotone_bad << ", E symmetry "
    << symmetry_bad << ", per-term sensitivity " << growth_bad << ", interlacing " << interlace_bad
    << " (relative tolerance 1e-30)";
  return {pass, d.str()};
}

}  // namespace
}  // namespace radau::acceptance

int main() {
  using namespace radau::acceptance;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bound chain on the model problem", bound_chain},
      {"oracle phase-2 onset", onset},
      {"practical phase markers", markers},
      {"gamma^(mu) spectral identity", omega_identity},
      {"prescribed eigenvalue of T^(mu)", prescribed_eigenvalue},
      {"rkpw round trip", rkpw_roundtrip},
      {"adaptive acceptance guarantee", adaptive_guarantee},
      {"gamma^(mu) consistency", consistency_triple},
      {"final-step identity", final_step},
      {"randomized property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " " << criteria[i].first << ": "
              << outcome.detail << " [" << radau::format_real(seconds, 3) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures;
}
