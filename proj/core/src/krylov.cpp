#include "radau/krylov.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "radau/errors.hpp"

namespace radau {

namespace {

template <class Real>
void axpy(const Real& a, std::span<const Real> x, std::span<Real> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

template <class Real>
Real cdot(const std::vector<Real>& x, const std::vector<Real>& y) {
  return dot(std::span<const Real>(x), std::span<const Real>(y));
}

template <class Real>
void orthogonalize(std::vector<Real>& w, const std::vector<std::vector<Real>>& against) {
  for (const auto& q : against) {
    const Real c = cdot(q, w) / cdot(q, q);
    axpy(-c, std::span<const Real>(q), std::span<Real>(w));
  }
}

}  // namespace

template <class Real>
JacobiMatrix<Real> LanczosState<Real>::jacobi() const {
  if (alphas.empty()) throw std::logic_error("Lanczos state has no steps");
  return JacobiMatrix<Real>(alphas, std::vector<Real>(betas.begin(), betas.end() - 1));
}

template <class Real>
LanczosState<Real> lanczos_start(std::span<const Real> start, const PrecisionContext& ctx, LanczosOptions options) {
  PrecisionScope scope(ctx);
  const Real nrm = norm2(start);
  if (!(nrm > Real(0))) throw std::invalid_argument("Lanczos starting vector is zero");
  LanczosState<Real> s;
  s.options = options;
  if (s.options.reorthogonalize) s.options.keep_basis = true;
  s.v.reserve(start.size());
  for (const auto& x : start) s.v.push_back(x / nrm);
  s.v_prev.assign(start.size(), Real(0));
  if (s.options.keep_basis) s.basis.push_back(s.v);
  return s;
}

template <class Real>
void lanczos_step(LanczosState<Real>& s, const LinearOperator<Real>& a, const PrecisionContext& ctx) {
  using std::sqrt;
  PrecisionScope scope(ctx);
  if (s.terminal) throw std::logic_error("lanczos_step called after the grade was reached");
  const std::size_t n = a.size();
  if (s.v.size() != n) throw std::invalid_argument("Lanczos vector does not match operator size");
  std::vector<Real> w(n);
  a.apply(s.v, w);
  if (!s.betas.empty()) axpy(-s.betas.back(), std::span<const Real>(s.v_prev), std::span<Real>(w));
  const Real alpha = cdot(s.v, w);
  axpy(-alpha, std::span<const Real>(s.v), std::span<Real>(w));
  if (s.options.reorthogonalize) {
    orthogonalize(w, s.basis);
    orthogonalize(w, s.basis);
  }
  const Real beta = sqrt(cdot(w, w));
  s.alphas.push_back(alpha);
  s.betas.push_back(beta);
  s.v_prev = std::move(s.v);
  if (beta <= ctx.breakdown_tolerance<Real>() * a.norm_inf()) {
    s.terminal = true;
    s.v.assign(n, Real(0));
    return;
  }
  for (auto& x : w) x /= beta;
  s.v = std::move(w);
  if (s.options.keep_basis) s.basis.push_back(s.v);
}

template <class Real>
CGState<Real> cg_start(std::span<const Real> b, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  CGState<Real> s;
  s.x.assign(b.size(), Real(0));
  s.r.assign(b.begin(), b.end());
  s.p = s.r;
  s.gamma_prev = Real(0);
  s.delta = Real(0);
  s.rnorm2 = cdot(s.r, s.r);
  return s;
}

template <class Real>
void cg_iterate(CGState<Real>& s, const LinearOperator<Real>& a, const std::vector<std::vector<Real>>& previous) {
  const std::size_t n = a.size();
  if (s.x.size() != n) throw std::invalid_argument("CG state does not match operator size");
  std::vector<Real> ap(n);
  a.apply(s.p, ap);
  const Real pap = cdot(s.p, ap);
  if (!(pap > Real(0))) {
    throw NotPositiveDefinite("matrix not SPD: p^T A p <= 0 at iteration " + std::to_string(s.k));
  }
  const Real gamma = s.rnorm2 / pap;
  axpy(gamma, std::span<const Real>(s.p), std::span<Real>(s.x));
  axpy(-gamma, std::span<const Real>(ap), std::span<Real>(s.r));
  if (!previous.empty()) {
    orthogonalize(s.r, previous);
    orthogonalize(s.r, previous);
  }
  const Real rnorm2 = cdot(s.r, s.r);
  const Real delta = rnorm2 / s.rnorm2;
  for (std::size_t i = 0; i < n; ++i) s.p[i] = s.r[i] + delta * s.p[i];
  ++s.k;
  s.gamma_prev = gamma;
  s.delta = delta;
  s.rnorm2 = rnorm2;
}

template <class Real>
void cg_step(CGState<Real>& s, const LinearOperator<Real>& a, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  cg_iterate(s, a, {});
}

template <class Real>
Real true_error2(std::span<const Real> x_k, std::span<const Real> exact, const LinearOperator<Real>& a,
                 const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (x_k.size() != exact.size() || exact.size() != a.size()) {
    throw std::invalid_argument("true_error2: size mismatch");
  }
  std::vector<Real> e(exact.begin(), exact.end());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= x_k[i];
  std::vector<Real> ae(e.size());
  a.apply(e, ae);
  return cdot(e, ae);
}

template <class Real>
CGTrace<Real> run_cg(const LinearOperator<Real>& a, std::span<const Real> b, const PrecisionContext& ctx,
                     const CGOptions<Real>& options, const CGObserver<Real>& observer) {
  using std::sqrt;
  PrecisionScope scope(ctx);
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("run_cg: right-hand side size mismatch");
  if (options.exact_solution && options.exact_solution->size() != n) {
    throw std::invalid_argument("run_cg: exact solution size mismatch");
  }
  const std::size_t max_iters = options.max_iterations > 0 ? options.max_iterations : 2 * n;
  const Real anorm = a.norm_inf();
  const Real bnorm = norm2(b);
  const Real tol = ctx.breakdown_tolerance<Real>();

  CGTrace<Real> trace;
  CGState<Real> s = cg_start(b, ctx);
  std::vector<std::vector<Real>> residuals;
  if (!(s.rnorm2 > Real(0))) {
    trace.stop = CGStop::grade_reached;
    trace.final_rnorm2 = s.rnorm2;
    return trace;
  }
  while (true) {
    CGRecord<Real> rec;
    rec.k = s.k;
    rec.delta = s.delta;
    rec.rnorm2 = s.rnorm2;
    if (options.exact_solution) {
      rec.true_err2 = true_error2(std::span<const Real>(s.x), std::span<const Real>(*options.exact_solution), a, ctx);
    }
    if (options.reorthogonalize) residuals.push_back(s.r);
    cg_iterate(s, a, residuals);
    rec.gamma = s.gamma_prev;
    trace.records.push_back(rec);
    trace.final_rnorm2 = s.rnorm2;

    if (observer && !observer(trace.records.back(), s)) {
      trace.stop = CGStop::observer;
      break;
    }
    const Real xnorm = norm2(std::span<const Real>(s.x));
    if (sqrt(s.rnorm2) <= tol * (anorm * xnorm + bnorm)) {
      trace.stop = CGStop::grade_reached;
      break;
    }
    if (options.stop_tolerance && sqrt(s.rnorm2) <= *options.stop_tolerance * bnorm) {
      trace.stop = CGStop::tolerance;
      break;
    }
    if (trace.records.size() >= max_iters) {
      trace.stop = CGStop::max_iterations;
      break;
    }
  }
  return trace;
}

template <class Real>
JacobiMatrix<Real> cg_to_lanczos(const CGTrace<Real>& trace, std::size_t k) {
  using std::sqrt;
  if (k == 0 || k > trace.size()) {
    throw Error("cg_to_lanczos: need 1 <= k <= " + std::to_string(trace.size()) + ", got " + std::to_string(k));
  }
  std::vector<Real> alphas;
  std::vector<Real> betas;
  alphas.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& rec = trace.records[j];
    if (!(rec.gamma > Real(0))) throw Error("cg_to_lanczos: nonpositive gamma_" + std::to_string(j));
    if (j == 0) {
      alphas.push_back(Real(1) / rec.gamma);
      continue;
    }
    if (!(rec.delta > Real(0))) throw Error("cg_to_lanczos: nonpositive delta_" + std::to_string(j));
    const Real& gprev = trace.records[j - 1].gamma;
    betas.push_back(sqrt(rec.delta) / gprev);
    alphas.push_back(Real(1) / rec.gamma + rec.delta / gprev);
  }
  return JacobiMatrix<Real>(std::move(alphas), std::move(betas));
}

template <class Real>
CGTrace<Real> cg_coefficients(const JacobiMatrix<Real>& t, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const auto f = ldl_tridiagonal(t, ctx);
  CGTrace<Real> trace;
  Real rnorm2(1);
  for (std::size_t j = 0; j < t.size(); ++j) {
    CGRecord<Real> rec;
    rec.k = j;
    rec.gamma = Real(1) / f.pivots[j];
    rec.delta = j == 0 ? Real(0) : f.subdiagonal[j - 1] * f.subdiagonal[j - 1];
    if (j > 0) rnorm2 *= rec.delta;
    rec.rnorm2 = rnorm2;
    trace.records.push_back(std::move(rec));
  }
  trace.stop = CGStop::grade_reached;
  trace.final_rnorm2 = Real(0);
  return trace;
}

std::string to_string(CGStop stop) {
  switch (stop) {
    case CGStop::grade_reached:
      return "grade_reached";
    case CGStop::tolerance:
      return "tolerance";
    case CGStop::max_iterations:
      return "max_iterations";
    case CGStop::observer:
      return "observer";
  }
  return "unknown";
}

template <class Real>
Real lanczos_beta2(const CGTrace<Real>& trace, std::size_t k) {
  if (k == 0 || k >= trace.size()) {
    throw Error("lanczos_beta2: need 1 <= k < " + std::to_string(trace.size()) + ", got " + std::to_string(k));
  }
  const Real& g = trace.records[k - 1].gamma;
  return trace.records[k].delta / (g * g);
}

template <class Real>
std::pair<Real, Real> extreme_eigenvalues(const LinearOperator<Real>& a, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("extreme_eigenvalues: empty operator");
  // A fixed pseudo-random start avoids accidental orthogonality to the
  // extreme eigenvectors of structured matrices while staying deterministic.
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::vector<Real> start;
  start.reserve(n);
  for (std::size_t i = 0; i < n; ++i) start.emplace_back(unif(gen));
  auto s = lanczos_start(std::span<const Real>(start), ctx, {.keep_basis = true, .reorthogonalize = true});
  while (!s.terminal && s.steps() < n) lanczos_step(s, a, ctx);
  const auto eig = eig_tridiagonal(s.jacobi(), ctx);
  return {eig.thetas.front(), eig.thetas.back()};
}

#define RADAU_INSTANTIATE(Real)                                                                                 \
  template struct LanczosState<Real>;                                                                           \
  template LanczosState<Real> lanczos_start(std::span<const Real>, const PrecisionContext&, LanczosOptions);    \
  template void lanczos_step(LanczosState<Real>&, const LinearOperator<Real>&, const PrecisionContext&);        \
  template CGState<Real> cg_start(std::span<const Real>, const PrecisionContext&);                              \
  template void cg_step(CGState<Real>&, const LinearOperator<Real>&, const PrecisionContext&);                  \
  template Real true_error2(std::span<const Real>, std::span<const Real>, const LinearOperator<Real>&,          \
                            const PrecisionContext&);                                                           \
  template CGTrace<Real> run_cg(const LinearOperator<Real>&, std::span<const Real>, const PrecisionContext&,    \
                                const CGOptions<Real>&, const CGObserver<Real>&);                               \
  template JacobiMatrix<Real> cg_to_lanczos(const CGTrace<Real>&, std::size_t);                                 \
  template CGTrace<Real> cg_coefficients(const JacobiMatrix<Real>&, const PrecisionContext&);                   \
  template Real lanczos_beta2(const CGTrace<Real>&, std::size_t);                                               \
  template std::pair<Real, Real> extreme_eigenvalues(const LinearOperator<Real>&, const PrecisionContext&);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
