#include <benchmark/benchmark.h>

#include "radau/bounds.hpp"
#include "radau/spectrum.hpp"

namespace {

using radau::MpReal;
using radau::PrecisionContext;

template <class Real>
PrecisionContext context_for() {
  return std::is_same_v<Real, double> ? PrecisionContext::native() : PrecisionContext::digits(128);
}

// The clustered N = 30 model problem at the benchmark's precision.
template <class Real>
const radau::ModelProblem<Real>& model() {
  static const auto problem = [] {
    const auto ctx = context_for<Real>();
    radau::PrecisionScope scope(ctx);
    // Native rkpw cannot resolve the clusters; build at 128 digits and round.
    const auto hp = radau::build_model_problem<MpReal>({}, PrecisionContext::digits(128));
    radau::ModelProblem<Real> out;
    std::vector<Real> alphas;
    std::vector<Real> betas;
    for (const auto& a : hp.matrix.alphas()) alphas.emplace_back(a.to_double());
    for (const auto& b : hp.matrix.betas()) betas.emplace_back(b.to_double());
    out.matrix = radau::JacobiMatrix<Real>(std::move(alphas), std::move(betas));
    out.rhs.assign(out.matrix.size(), Real(0));
    out.rhs[0] = Real(1);
    return out;
  }();
  return problem;
}

template <class Real>
void BM_EigTridiagonal(benchmark::State& state) {
  const auto ctx = context_for<Real>();
  radau::PrecisionScope scope(ctx);
  const auto& t = model<Real>().matrix;
  for (auto _ : state) benchmark::DoNotOptimize(radau::eig_tridiagonal(t, ctx));
}
BENCHMARK(BM_EigTridiagonal<double>);
BENCHMARK(BM_EigTridiagonal<MpReal>)->Unit(benchmark::kMillisecond);

void BM_RkpwModel(benchmark::State& state) {
  const auto ctx = PrecisionContext::digits(128);
  radau::PrecisionScope scope(ctx);
  const auto dist = radau::build_model_problem<MpReal>({}, ctx).distribution;
  for (auto _ : state) benchmark::DoNotOptimize(radau::rkpw(dist, ctx));
}
BENCHMARK(BM_RkpwModel)->Unit(benchmark::kMillisecond);

template <class Real>
void BM_CgWithBounds(benchmark::State& state) {
  const auto ctx = context_for<Real>();
  radau::PrecisionScope scope(ctx);
  const radau::TridiagonalOperator<Real> op(model<Real>().matrix);
  const auto& b = model<Real>().rhs;
  const Real mu = Real(0.999e-6);
  for (auto _ : state) {
    radau::MuEstimator<Real> est(mu, "mu");
    radau::AdaptiveAcceptor<Real> acc(Real(0.25));
    const auto trace = radau::run_cg<Real>(op, std::span<const Real>(b), ctx, {},
                                           [&](const radau::CGRecord<Real>& rec, const radau::CGState<Real>&) {
                                             acc.advance(rec, est.update(rec));
                                             return true;
                                           });
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_CgWithBounds<double>);
BENCHMARK(BM_CgWithBounds<MpReal>)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
