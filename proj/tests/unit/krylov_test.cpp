#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "radau/errors.hpp"
#include "radau/krylov.hpp"

namespace radau {
namespace {

using testing::Rng;

template <class Real>
std::vector<Real> random_vector(Rng& rng, std::size_t n) {
  std::vector<Real> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(testing::uniform(rng, -1.0, 1.0));
  return v;
}

template <class Real>
Real energy(const LinearOperator<Real>& a, const std::vector<Real>& e) {
  std::vector<Real> ae(e.size());
  a.apply(std::span<const Real>(e), std::span<Real>(ae));
  Real s(0);
  for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * ae[i];
  return s;
}

SparseSymmetricMatrix<double> diagonal(const std::vector<double>& d) {
  std::vector<Triplet<double>> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return SparseSymmetricMatrix<double>(d.size(), std::move(t));
}

TEST(Lanczos, DiagonalExample) {
  const auto ctx = PrecisionContext::native();
  const auto a = diagonal({1.0, 2.0, 3.0});
  const std::vector<double> ones{1.0, 1.0, 1.0};
  auto state = lanczos_start<double>(ones, ctx);
  lanczos_step(state, a, ctx);
  EXPECT_NEAR(state.alphas[0], 2.0, 1e-15);
  EXPECT_NEAR(state.betas[0], std::sqrt(2.0 / 3.0), 1e-15);
  lanczos_step(state, a, ctx);
  lanczos_step(state, a, ctx);
  EXPECT_TRUE(state.terminal);
  EXPECT_THROW(lanczos_step(state, a, ctx), std::logic_error);
  const auto thetas = eig_tridiagonal(state.jacobi(), ctx).thetas;
  EXPECT_NEAR(thetas[0], 1.0, 1e-14);
  EXPECT_NEAR(thetas[2], 3.0, 1e-14);
}

TEST(Lanczos, ReorthogonalizedBasisIsOrthonormalProperty) {
  Rng rng(401);
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testing::uniform_size(rng, 2, 14);
    const TridiagonalOperator<MpReal> a(testing::random_spd_jacobi<MpReal>(rng, n));
    const auto b = random_vector<MpReal>(rng, n);
    auto state = lanczos_start<MpReal>(b, ctx, {.keep_basis = true, .reorthogonalize = true});
    while (!state.terminal && state.steps() < n) lanczos_step(state, a, ctx);
    const std::size_t k = state.steps();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        MpReal g(0);
        for (std::size_t l = 0; l < n; ++l) g += state.basis[i][l] * state.basis[j][l];
        EXPECT_LE(abs(g - MpReal(i == j ? 1 : 0)), ctx.tolerance<MpReal>()) << "trial " << trial;
      }
    }
  }
}

TEST(ConjugateGradient, TwoByTwoExample) {
  const auto ctx = PrecisionContext::native();
  const JacobiMatrix<double> t({2.0, 2.0}, {1.0});
  const TridiagonalOperator<double> a(t);
  const std::vector<double> b{1.0, 0.0};
  CGOptions<double> options;
  options.exact_solution = std::vector<double>{2.0 / 3.0, -1.0 / 3.0};
  const auto trace = run_cg<double>(a, b, ctx, options);
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace.stop, CGStop::grade_reached);
  EXPECT_DOUBLE_EQ(trace[0].gamma, 0.5);
  EXPECT_EQ(trace[0].delta, 0.0);
  EXPECT_EQ(trace[0].rnorm2, 1.0);
  EXPECT_DOUBLE_EQ(trace[1].gamma, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(trace[1].delta, 0.25);
  EXPECT_DOUBLE_EQ(trace[1].rnorm2, 0.25);
  EXPECT_NEAR(*trace[0].true_err2, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(*trace[1].true_err2, 1.0 / 6.0, 1e-15);

  const auto back = cg_to_lanczos(trace, 2);
  EXPECT_DOUBLE_EQ(back.alpha(0), 2.0);
  EXPECT_DOUBLE_EQ(back.alpha(1), 2.0);
  EXPECT_DOUBLE_EQ(back.beta(0), 1.0);
  EXPECT_DOUBLE_EQ(lanczos_beta2(trace, 1), 1.0);
  EXPECT_THROW(cg_to_lanczos(trace, 3), Error);
}

TEST(ConjugateGradient, IdentityConvergesInOneStep) {
  const auto ctx = PrecisionContext::native();
  const auto a = diagonal({1.0, 1.0, 1.0, 1.0});
  const std::vector<double> b{0.5, 0.5, 0.5, 0.5};
  const auto trace = run_cg<double>(a, b, ctx);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].gamma, 1.0);
  EXPECT_EQ(trace.stop, CGStop::grade_reached);
}

TEST(ConjugateGradient, RejectsIndefiniteMatrix) {
  const auto ctx = PrecisionContext::native();
  const TridiagonalOperator<double> a(JacobiMatrix<double>({-1.0, 2.0}, {0.5}));
  const std::vector<double> b{1.0, 0.0};
  EXPECT_THROW(run_cg<double>(a, b, ctx), NotPositiveDefinite);
}

TEST(ConjugateGradient, StoppingRules) {
  const auto ctx = PrecisionContext::digits(30);
  PrecisionScope scope(ctx);
  Rng rng(402);
  const TridiagonalOperator<MpReal> a(testing::random_spd_jacobi<MpReal>(rng, 20));
  const auto b = random_vector<MpReal>(rng, 20);

  CGOptions<MpReal> capped;
  capped.max_iterations = 3;
  const auto t1 = run_cg<MpReal>(a, b, ctx, capped);
  EXPECT_EQ(t1.size(), 3u);
  EXPECT_EQ(t1.stop, CGStop::max_iterations);

  CGOptions<MpReal> loose;
  loose.stop_tolerance = MpReal("1e-3");
  const auto t2 = run_cg<MpReal>(a, b, ctx, loose);
  EXPECT_EQ(t2.stop, CGStop::tolerance);
  EXPECT_LE(sqrt(t2.final_rnorm2), MpReal("1e-3") * norm2<MpReal>(b));
  EXPECT_GT(sqrt(t2.records.back().rnorm2), MpReal("1e-3") * norm2<MpReal>(b));

  const auto t3 = run_cg<MpReal>(a, b, ctx, {}, [](const CGRecord<MpReal>& r, const CGState<MpReal>&) {
    return r.k < 4;
  });
  EXPECT_EQ(t3.size(), 5u);
  EXPECT_EQ(t3.stop, CGStop::observer);
  EXPECT_EQ(to_string(CGStop::observer), "observer");
  EXPECT_EQ(to_string(CGStop::grade_reached), "grade_reached");
}

TEST(ConjugateGradient, CoefficientsRebuildLanczosMatrixProperty) {
  Rng rng(403);
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  const MpReal tol = ctx.tolerance<MpReal>();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testing::uniform_size(rng, 1, 16);
    const TridiagonalOperator<MpReal> a(testing::random_spd_jacobi<MpReal>(rng, n));
    const auto b = random_vector<MpReal>(rng, n);
    const auto trace = run_cg<MpReal>(a, b, ctx);
    ASSERT_EQ(trace.size(), n) << "trial " << trial;
    EXPECT_EQ(trace.stop, CGStop::grade_reached);

    auto state = lanczos_start<MpReal>(b, ctx, {.keep_basis = true, .reorthogonalize = true});
    while (!state.terminal) lanczos_step(state, a, ctx);
    ASSERT_EQ(state.steps(), n);
    const auto t = cg_to_lanczos(trace, n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(testing::rel_diff(t.alpha(i), state.alphas[i]), tol) << "trial " << trial;
      if (i + 1 < n) {
        EXPECT_LE(testing::rel_diff(t.beta(i), state.betas[i]), tol) << "trial " << trial;
      }
    }
  }
}

TEST(ConjugateGradient, EnergyErrorTelescopesProperty) {
  Rng rng(404);
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  const MpReal tol = ctx.tolerance<MpReal>();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testing::uniform_size(rng, 1, 16);
    const auto t = testing::random_spd_jacobi<MpReal>(rng, n);
    const TridiagonalOperator<MpReal> a(t);
    const auto b = random_vector<MpReal>(rng, n);
    const auto x = testing::dense_solve(testing::to_dense(t), b);
    CGOptions<MpReal> options;
    options.exact_solution = x;
    const auto trace = run_cg<MpReal>(a, b, ctx, options);
    ASSERT_TRUE(trace.has_true_errors());
    // The energy norm of the initial error equals b^T A^{-1} b.
    MpReal btx(0);
    for (std::size_t i = 0; i < n; ++i) btx += b[i] * x[i];
    EXPECT_LE(testing::rel_diff(*trace[0].true_err2, btx), tol);
    // e_k = sum_{j >= k} gamma_j ||r_j||^2 once the grade is reached.
    MpReal tail(0);
    for (std::size_t k = trace.size(); k-- > 0;) {
      tail += trace[k].gamma * trace[k].rnorm2;
      EXPECT_LE(abs(*trace[k].true_err2 - tail), tol * btx) << "trial " << trial << " k " << k;
    }
  }
}

TEST(ConjugateGradient, TrueErrorMatchesDirectEvaluation) {
  const auto ctx = PrecisionContext::native();
  const TridiagonalOperator<double> a(JacobiMatrix<double>({2.0, 2.0}, {1.0}));
  const std::vector<double> xk{0.5, 0.0};
  const std::vector<double> x{2.0 / 3.0, -1.0 / 3.0};
  EXPECT_NEAR(true_error2<double>(xk, x, a, ctx), 1.0 / 6.0, 1e-16);
  const std::vector<double> diff{1.0 / 6.0, -1.0 / 3.0};
  EXPECT_NEAR(true_error2<double>(xk, x, a, ctx), energy<double>(a, diff), 1e-16);
}

TEST(CgCoefficients, MatchRunningCgOnFirstUnitVectorProperty) {
  Rng rng(405);
  for (int digits : {0, 40}) {
    const PrecisionContext ctx(digits);
    with_scalar(ctx, [&](auto tag) {
      using Real = typename decltype(tag)::type;
      PrecisionScope scope(ctx);
      const Real tol = ctx.template tolerance<Real>();
      for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = testing::uniform_size(rng, 1, 16);
        const auto t = testing::random_spd_jacobi<Real>(rng, n);
        const auto coeffs = cg_coefficients(t, ctx);
        std::vector<Real> e1(n, Real(0));
        e1[0] = Real(1);
        const auto trace = run_cg<Real>(TridiagonalOperator<Real>(t), e1, ctx);
        ASSERT_EQ(coeffs.size(), n);
        // In binary64 the residual can reach the breakdown threshold early.
        ASSERT_LE(trace.size(), n);
        if (digits > 0) {
          ASSERT_EQ(trace.size(), n) << "trial " << trial;
        }
        const auto ldl = ldl_tridiagonal(t, ctx);
        for (std::size_t k = 0; k < trace.size(); ++k) {
          EXPECT_LE(testing::rel_diff(coeffs[k].gamma, trace[k].gamma), tol);
          EXPECT_LE(testing::rel_diff(coeffs[k].rnorm2, trace[k].rnorm2), tol);
          EXPECT_LE(testing::rel_diff(coeffs[k].gamma * ldl.pivots[k], Real(1)), tol);
          if (k > 0) {
            EXPECT_LE(testing::rel_diff(coeffs[k].delta, trace[k].delta), tol);
          }
        }
        const auto back = cg_to_lanczos(coeffs, n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_LE(testing::rel_diff(back.alpha(i), t.alpha(i)), tol);
      }
    });
  }
}

TEST(CgCoefficients, RejectIndefiniteMatrix) {
  EXPECT_THROW(cg_coefficients(JacobiMatrix<double>({1.0, 1.0}, {2.0}), PrecisionContext::native()),
               NotPositiveDefinite);
}

TEST(ExtremeEigenvalues, MatchBisectionProperty) {
  Rng rng(406);
  const auto ctx = PrecisionContext::digits(40);
  PrecisionScope scope(ctx);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_spd_jacobi<MpReal>(rng, testing::uniform_size(rng, 1, 14));
    const auto [lo, hi] = extreme_eigenvalues(TridiagonalOperator<MpReal>(t), ctx);
    const auto want = testing::bisection_eigenvalues(t, 200);
    EXPECT_LE(abs(lo - want.front()), ctx.tolerance<MpReal>()) << "trial " << trial;
    EXPECT_LE(abs(hi - want.back()), ctx.tolerance<MpReal>()) << "trial " << trial;
  }
}

}  // namespace
}  // namespace radau
