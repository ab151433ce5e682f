#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "radau/errors.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {
namespace {

using testing::Rng;

struct Native {
  using Real = double;
  static PrecisionContext ctx() { return PrecisionContext::native(); }
};

struct Digits40 {
  using Real = MpReal;
  static PrecisionContext ctx() { return PrecisionContext::digits(40); }
};

template <class P>
class TridiagonalProperty : public ::testing::Test {
 protected:
  void SetUp() override { scope_.emplace(P::ctx()); }
  std::optional<PrecisionScope> scope_;
};

using Precisions = ::testing::Types<Native, Digits40>;
TYPED_TEST_SUITE(TridiagonalProperty, Precisions);

// ---- MpReal and PrecisionContext ------------------------------------------

TEST(MpReal, ArithmeticOnExactValues) {
  PrecisionScope scope(PrecisionContext::digits(32));
  const MpReal a(3);
  const MpReal b("0.5");
  EXPECT_EQ(a + b, MpReal("3.5"));
  EXPECT_EQ(a - b, MpReal("2.5"));
  EXPECT_EQ(a * b, MpReal("1.5"));
  EXPECT_EQ(a / b, MpReal(6));
  EXPECT_EQ(sqrt(MpReal(16)), MpReal(4));
  EXPECT_EQ(-a, MpReal(-3));
  EXPECT_LT(b, a);
}

TEST(MpReal, ResultsCarryTheLargerPrecision) {
  MpReal lo;
  MpReal hi;
  {
    PrecisionScope scope(PrecisionContext::digits(20));
    lo = MpReal(1) / MpReal(3);
  }
  {
    PrecisionScope scope(PrecisionContext::digits(60));
    hi = MpReal(1) / MpReal(7);
  }
  EXPECT_EQ((lo + hi).precision(), hi.precision());
  EXPECT_EQ(lo.rounded_to(300).precision(), 300);
  EXPECT_EQ(lo.rounded_to(300), lo);
}

TEST(MpReal, ParseRejectsMalformedText) {
  EXPECT_THROW(MpReal("1.2.3"), std::invalid_argument);
  EXPECT_THROW(MpReal(""), std::invalid_argument);
  EXPECT_THROW(MpReal("abc"), std::invalid_argument);
}

TEST(MpReal, FormatsSignificantDigits) {
  PrecisionScope scope(PrecisionContext::digits(32));
  EXPECT_EQ(MpReal("0.8").str(5), "8.0000e-01");
  EXPECT_EQ(format_real(0.8, 5), "8.0000e-01");
  EXPECT_EQ(format_real(MpReal("-1e-6"), 3), "-1.00e-06");
}

TEST(MpReal, AgreesWithDoublePrecisionReferenceToDMinus4Digits) {
  Rng rng(11);
  for (int d : {16, 40, 128}) {
    const PrecisionContext ctx(d);
    const PrecisionContext ref(2 * d);
    for (int i = 0; i < 200; ++i) {
      const double x = testing::uniform(rng, 0.1, 10.0);
      const double y = testing::uniform(rng, 0.1, 10.0);
      MpReal got[5];
      {
        PrecisionScope scope(ctx);
        const MpReal a = MpReal(x) / MpReal(3);
        const MpReal b = MpReal(y) / MpReal(7);
        got[0] = a + b;
        got[1] = a - b;
        got[2] = a * b;
        got[3] = a / b;
        got[4] = sqrt(a);
      }
      PrecisionScope scope(ref);
      const MpReal a = MpReal(x) / MpReal(3);
      const MpReal b = MpReal(y) / MpReal(7);
      const MpReal want[5] = {a + b, a - b, a * b, a / b, sqrt(a)};
      const MpReal tol = ctx.relative<MpReal>(4);
      for (int op = 0; op < 5; ++op) {
        // Subtraction is judged against the operand scale.
        const MpReal scale = op == 1 ? abs(a) + abs(b) : abs(want[op]);
        EXPECT_LE(abs(got[op] - want[op]) / scale, tol) << "D=" << d << " op=" << op;
      }
    }
  }
}

TEST(PrecisionContext, ValidatesDigitRange) {
  EXPECT_NO_THROW(PrecisionContext(0));
  EXPECT_NO_THROW(PrecisionContext(16));
  EXPECT_NO_THROW(PrecisionContext(4096));
  EXPECT_THROW(PrecisionContext(15), std::invalid_argument);
  EXPECT_THROW(PrecisionContext(4097), std::invalid_argument);
  EXPECT_THROW(PrecisionContext(-1), std::invalid_argument);
}

TEST(PrecisionContext, Tolerances) {
  EXPECT_EQ(PrecisionContext::native().tolerance<double>(), 1e-12);
  EXPECT_EQ(PrecisionContext::native().output_digits(), 17);
  const auto ctx = PrecisionContext::digits(128);
  PrecisionScope scope(ctx);
  EXPECT_EQ(ctx.tolerance<MpReal>(), MpReal("1e-120"));
  EXPECT_EQ(ctx.breakdown_tolerance<MpReal>(), MpReal("1e-124"));
  EXPECT_GE(ctx.binary_precision(), 426);
}

TEST(PrecisionContext, RoundtripDigitsRecoverEveryBit) {
  Rng rng(12);
  EXPECT_EQ(PrecisionContext::native().roundtrip_digits(), 17);
  for (int d : {16, 40, 128, 300}) {
    const PrecisionContext ctx(d);
    PrecisionScope scope(ctx);
    for (int i = 0; i < 200; ++i) {
      const MpReal x = MpReal(testing::uniform(rng, 0.1, 10.0)) / MpReal(7) *
                       MpReal(std::pow(10.0, static_cast<double>(testing::uniform_size(rng, 0, 20)) - 10));
      EXPECT_EQ(parse_real<MpReal>(format_real(x, ctx.roundtrip_digits())), x) << "D=" << d;
    }
    const double native = testing::uniform(rng, 0.1, 10.0) / 3.0;
    EXPECT_EQ(parse_real<MpReal>(format_real(MpReal(native), ctx.roundtrip_digits())), MpReal(native));
  }
}

TEST(PrecisionContext, ScopeRestoresWorkingPrecision) {
  const auto before = working_precision();
  {
    PrecisionScope outer(PrecisionContext::digits(100));
    {
      PrecisionScope inner(PrecisionContext::digits(20));
      EXPECT_EQ(MpReal(1).precision(), PrecisionContext::digits(20).binary_precision());
    }
    EXPECT_EQ(MpReal(1).precision(), PrecisionContext::digits(100).binary_precision());
  }
  EXPECT_EQ(working_precision(), before);
}

TEST(PrecisionContext, WithScalarSelectsTheScalarType) {
  EXPECT_TRUE(with_scalar(PrecisionContext::native(), [](auto t) {
    return std::is_same_v<typename decltype(t)::type, double>;
  }));
  EXPECT_TRUE(with_scalar(PrecisionContext::digits(50), [](auto t) {
    return std::is_same_v<typename decltype(t)::type, MpReal>;
  }));
}

// ---- JacobiMatrix and the eigensolver -------------------------------------

TEST(JacobiMatrix, RejectsInvalidShapes) {
  EXPECT_THROW(JacobiMatrix<double>({1.0, 2.0}, {}), std::invalid_argument);
  EXPECT_THROW(JacobiMatrix<double>({1.0, 2.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(JacobiMatrix<double>({1.0, 2.0}, {-1.0}), std::invalid_argument);
  const JacobiMatrix<double> t({1.0, 2.0, 3.0}, {0.5, 0.25});
  EXPECT_EQ(t.leading(2).size(), 2u);
  EXPECT_EQ(t.leading(2).beta(0), 0.5);
  EXPECT_DOUBLE_EQ(t.norm_inf(), 3.25);
}

TEST(EigTridiagonal, OneByOne) {
  const auto e = eig_tridiagonal(JacobiMatrix<double>({5.0}, {}), PrecisionContext::native());
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.thetas[0], 5.0);
  EXPECT_EQ(e.first_components[0], 1.0);
  EXPECT_EQ(std::abs(e.last_components[0]), 1.0);
}

TEST(EigTridiagonal, SymmetricTwoByTwo) {
  const auto e = eig_tridiagonal(JacobiMatrix<double>({0.0, 0.0}, {1.0}), PrecisionContext::native());
  EXPECT_NEAR(e.thetas[0], -1.0, 1e-15);
  EXPECT_NEAR(e.thetas[1], 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.last_components[0]), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(e.last_components[1]), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(EigTridiagonal, ShiftedTwoByTwo) {
  const auto e = eig_tridiagonal(JacobiMatrix<double>({2.0, 2.0}, {1.0}), PrecisionContext::native());
  EXPECT_NEAR(e.thetas[0], 1.0, 1e-15);
  EXPECT_NEAR(e.thetas[1], 3.0, 1e-15);
}

TYPED_TEST(TridiagonalProperty, EigenDecompositionInvariants) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  const Real tol = ctx.template tolerance<Real>();
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 1, 24));
    const auto e = eig_tridiagonal(t, ctx, EigenVectors::full);
    const Real norm = t.norm_inf();
    Real first(0);
    Real last(0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i > 0) {
        EXPECT_LT(e.thetas[i - 1], e.thetas[i]);
      }
      first += e.first_components[i] * e.first_components[i];
      last += e.last_components[i] * e.last_components[i];
      EXPECT_GE(e.first_components[i], Real(0));
      std::vector<Real> y(t.size());
      t.apply(std::span<const Real>(e.vectors[i]), std::span<Real>(y));
      Real res(0);
      for (std::size_t j = 0; j < t.size(); ++j) res += square(y[j] - e.thetas[i] * e.vectors[i][j]);
      EXPECT_LE(sqrt(res), tol * norm);
    }
    EXPECT_LE(abs(first - Real(1)), tol);
    EXPECT_LE(abs(last - Real(1)), tol);
  }
}

TYPED_TEST(TridiagonalProperty, EigenvaluesMatchBisection) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  const int bits = static_cast<int>(ctx.binary_precision()) + 8;
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 1, 16));
    const auto got = eig_tridiagonal(t, ctx).thetas;
    const auto want = testing::bisection_eigenvalues(t, bits);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_LE(abs(got[i] - want[i]), ctx.template tolerance<Real>() * t.norm_inf()) << "trial " << trial;
    }
  }
}

TYPED_TEST(TridiagonalProperty, RitzValuesInterlace) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 2, 20));
    const auto big = eig_tridiagonal(t, ctx).thetas;
    const auto small = eig_tridiagonal(t.leading(t.size() - 1), ctx).thetas;
    // Strict in exact arithmetic; extreme Ritz values may converge to
    // working accuracy, so allow one rounding-level slack.
    const Real slack = ctx.template tolerance<Real>() * t.norm_inf();
    for (std::size_t i = 0; i < small.size(); ++i) {
      EXPECT_LE(big[i], small[i] + slack) << "trial " << trial << " i " << i;
      EXPECT_LE(small[i], big[i + 1] + slack) << "trial " << trial << " i " << i;
    }
  }
}

TYPED_TEST(TridiagonalProperty, LastComponentProductFormula) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  Rng rng(104);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 2, 14));
    const std::size_t k = t.size();
    const auto now = eig_tridiagonal(t, ctx);
    const auto before = eig_tridiagonal(t.leading(k - 1), ctx).thetas;
    Real product(1);
    Real min_gap = now.thetas[1] - now.thetas[0];
    for (std::size_t j = 0; j + 1 < k; ++j) {
      product *= (before[j] - now.thetas[0]) / (now.thetas[j + 1] - now.thetas[0]);
      if (before[j] - now.thetas[0] < min_gap) min_gap = before[j] - now.thetas[0];
    }
    const Real s1 = square(now.last_components[0]);
    // Both sides are perturbed by roughly eps * ||T|| / gap.
    const Real norm = t.norm_inf();
    const Real bound = ctx.template tolerance<Real>() * norm *
                       (Real(1) / (now.thetas[1] - now.thetas[0]) + Real(static_cast<long>(k)) * product / min_gap);
    EXPECT_LE(abs(s1 - product), bound) << "trial " << trial;
  }
}

// ---- Shifted solves and LDL^T ----------------------------------------------

TEST(SolveShifted, Examples) {
  const auto ctx = PrecisionContext::native();
  const std::vector<double> one{1.0};
  EXPECT_EQ(solve_shifted(JacobiMatrix<double>({2.0}, {}), 1.0, std::span<const double>(one), ctx)[0], 1.0);
  const std::vector<double> rhs{0.0, 1.0};
  const auto y = solve_shifted(JacobiMatrix<double>({2.0, 2.0}, {1.0}), 0.0, std::span<const double>(rhs), ctx);
  EXPECT_NEAR(y[0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(y[1], 2.0 / 3.0, 1e-15);
}

TEST(SolveShifted, ShiftAtOrAboveSpectrumFails) {
  const auto ctx = PrecisionContext::native();
  const JacobiMatrix<double> t({2.0, 2.0}, {1.0});
  const std::vector<double> rhs{0.0, 1.0};
  EXPECT_THROW(solve_shifted(t, 1.0, std::span<const double>(rhs), ctx), ShiftNotBelowSpectrum);
  EXPECT_THROW(solve_shifted(t, 1.5, std::span<const double>(rhs), ctx), ShiftNotBelowSpectrum);
}

TYPED_TEST(TridiagonalProperty, SolveShiftedMatchesSpectralExpansionAndElimination) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  Rng rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 1, 18));
    const std::size_t n = t.size();
    const auto e = eig_tridiagonal(t, ctx, EigenVectors::full);
    const Real mu = e.thetas[0] - Real(testing::uniform(rng, 0.05, 2.0));
    std::vector<Real> rhs;
    for (std::size_t i = 0; i < n; ++i) rhs.emplace_back(testing::uniform(rng, -1.0, 1.0));
    const auto y = solve_shifted(t, mu, std::span<const Real>(rhs), ctx);

    auto shifted = testing::to_dense(t);
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= mu;
    const auto direct = testing::dense_solve(shifted, rhs);
    Real ynorm(0);
    for (const auto& v : direct) ynorm += v * v;
    ynorm = sqrt(ynorm);
    for (std::size_t i = 0; i < n; ++i) {
      Real spectral(0);
      for (std::size_t j = 0; j < n; ++j) {
        Real c(0);
        for (std::size_t l = 0; l < n; ++l) c += e.vectors[j][l] * rhs[l];
        spectral += e.vectors[j][i] * c / (e.thetas[j] - mu);
      }
      EXPECT_LE(abs(y[i] - spectral), ctx.template relative<Real>(8) * ynorm) << "trial " << trial;
      EXPECT_LE(abs(y[i] - direct[i]), ctx.template relative<Real>(8) * ynorm) << "trial " << trial;
    }
  }
}

TEST(LdlTridiagonal, Examples) {
  const auto ctx = PrecisionContext::native();
  const auto one = ldl_tridiagonal(JacobiMatrix<double>({4.0}, {}), ctx);
  EXPECT_EQ(one.pivots, std::vector<double>{4.0});
  EXPECT_TRUE(one.subdiagonal.empty());
  const auto two = ldl_tridiagonal(JacobiMatrix<double>({2.0, 2.0}, {1.0}), ctx);
  EXPECT_EQ(two.pivots, (std::vector<double>{2.0, 1.5}));
  EXPECT_EQ(two.subdiagonal, std::vector<double>{0.5});
  EXPECT_THROW(ldl_tridiagonal(JacobiMatrix<double>({1.0, 1.0}, {2.0}), ctx), NotPositiveDefinite);
}

TYPED_TEST(TridiagonalProperty, LdlReassemblesTheMatrix) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  const Real tol = ctx.template tolerance<Real>();
  Rng rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_spd_jacobi<Real>(rng, testing::uniform_size(rng, 1, 30));
    const auto f = ldl_tridiagonal(t, ctx);
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_GT(f.pivots[i], Real(0));
      Real diag = f.pivots[i];
      if (i > 0) diag += square(f.subdiagonal[i - 1]) * f.pivots[i - 1];
      EXPECT_LE(testing::rel_diff(diag, t.alpha(i)), tol);
      if (i + 1 < t.size()) {
        EXPECT_LE(testing::rel_diff(f.subdiagonal[i] * f.pivots[i], t.beta(i)), tol);
      }
    }
  }
}

TYPED_TEST(TridiagonalProperty, SturmCountMatchesEigenvalues) {
  using Real = typename TypeParam::Real;
  const auto ctx = TypeParam::ctx();
  Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_jacobi<Real>(rng, testing::uniform_size(rng, 1, 20));
    const auto thetas = eig_tridiagonal(t, ctx).thetas;
    for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
      const Real mid = (thetas[i] + thetas[i + 1]) / Real(2);
      EXPECT_EQ(count_eigenvalues_below(t, mid), i + 1);
    }
    EXPECT_EQ(count_eigenvalues_below(t, thetas.front() - Real(1)), 0u);
  }
}

}  // namespace
}  // namespace radau
