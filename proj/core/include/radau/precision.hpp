#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include "radau/mp_real.hpp"

namespace radau {

/// Arithmetic environment for a computation: native binary64, or MPFR with a
/// given number of significant decimal digits.
///
/// Contexts are passed explicitly to every operation that creates scalars.
/// The tolerances below are the module-wide conventions:
///   tolerance()            10^-(D-8)  (1e-12 native)
///   breakdown_tolerance()  10^-(D-4)  (1e-12 native)
class PrecisionContext {
 public:
  static constexpr int kMinDigits = 16;
  static constexpr int kMaxDigits = 4096;
  /// Digit count used in tolerance formulas for native binary64.
  static constexpr int kNativeDigits = 16;

  PrecisionContext() = default;
  /// `decimal_digits == 0` selects native binary64; anything else must lie
  /// in [kMinDigits, kMaxDigits].
  explicit PrecisionContext(int decimal_digits);

  static PrecisionContext native() { return PrecisionContext{}; }
  static PrecisionContext digits(int d) { return PrecisionContext{d}; }

  bool is_native() const noexcept { return digits_ == 0; }
  int decimal_digits() const noexcept { return digits_; }
  /// D in the tolerance formulas.
  int effective_digits() const noexcept { return is_native() ? kNativeDigits : digits_; }
  /// Significant digits used when printing values (17 round-trips binary64).
  int output_digits() const noexcept { return is_native() ? 17 : digits_; }
  /// Significant digits that read back to the identical value at this
  /// precision (1 + ceil(bits log10 2)).
  int roundtrip_digits() const noexcept;
  mpfr_prec_t binary_precision() const noexcept;

  /// 10^-(D - guard_digits); for native contexts D is kNativeDigits.
  template <class Real>
  Real relative(int guard_digits) const;
  template <class Real>
  Real tolerance() const;
  template <class Real>
  Real breakdown_tolerance() const;

  std::string describe() const;

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  int digits_ = 0;
};

/// Sets the thread's MPFR working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(const PrecisionContext& ctx);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

template <class Real>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double unit_roundoff() noexcept { return 0x1p-53; }
  static double parse(std::string_view text);
  static std::string format(double x, int significant_digits);
  static double to_double(double x) noexcept { return x; }
  /// Rounds to the nearest binary64 value toward -infinity.
  static double round_down_to_double(double x) noexcept { return x; }
};

template <>
struct ScalarTraits<MpReal> {
  /// Unit roundoff at the current working precision.
  static MpReal unit_roundoff();
  static MpReal parse(std::string_view text) { return MpReal(text); }
  static std::string format(const MpReal& x, int significant_digits) {
    return x.str(significant_digits);
  }
  static double to_double(const MpReal& x) noexcept { return x.to_double(); }
  static double round_down_to_double(const MpReal& x) noexcept { return x.to_double(MPFR_RNDD); }
};

template <class Real>
Real parse_real(std::string_view text) {
  return ScalarTraits<Real>::parse(text);
}

template <class Real>
std::string format_real(const Real& x, int significant_digits) {
  return ScalarTraits<Real>::format(x, significant_digits);
}

template <class Real>
double to_double(const Real& x) {
  return ScalarTraits<Real>::to_double(x);
}

/// 10^exponent at the working precision.
template <class Real>
Real ten_to(int exponent) {
  return parse_real<Real>("1e" + std::to_string(exponent));
}

template <class Real>
Real square(const Real& x) {
  return x * x;
}

/// Invokes `fn(std::type_identity<Real>{})` inside a PrecisionScope, with
/// Real = double for native contexts and MpReal otherwise.
template <class Fn>
decltype(auto) with_scalar(const PrecisionContext& ctx, Fn&& fn) {
  PrecisionScope scope(ctx);
  if (ctx.is_native()) return fn(std::type_identity<double>{});
  return fn(std::type_identity<MpReal>{});
}

template <class Real>
Real PrecisionContext::relative(int guard_digits) const {
  return ten_to<Real>(-(effective_digits() - guard_digits));
}

template <class Real>
Real PrecisionContext::tolerance() const {
  if (is_native()) return Real(1e-12);
  return relative<Real>(8);
}

template <class Real>
Real PrecisionContext::breakdown_tolerance() const {
  if (is_native()) return Real(1e-12);
  return relative<Real>(4);
}

}  // namespace radau
