#pragma once

// Value-semantic wrapper around an MPFR floating point number.
//
// Every MpReal carries its own binary precision. Newly created values
// (default constructed, or converted from double/integers/strings) use the
// calling thread's working precision, which is managed by PrecisionScope
// (see precision.hpp). Arithmetic results take the larger precision of
// the two operands, so values created under different scopes can be mixed
// without silently losing digits.

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

namespace radau {

/// Working precision (bits) for newly created MpReal values on this thread.
mpfr_prec_t working_precision() noexcept;
void set_working_precision(mpfr_prec_t bits) noexcept;

class MpReal {
 public:
  MpReal();
  /// Doubles are stored exactly (at least 53 bits); integers are rounded to
  /// the working precision.
  MpReal(double value);  // NOLINT(google-explicit-constructor)
  template <std::signed_integral I>
  MpReal(I value) : MpReal(static_cast<long>(value), SignedTag{}) {}  // NOLINT
  template <std::unsigned_integral U>
  MpReal(U value) : MpReal(static_cast<unsigned long>(value), UnsignedTag{}) {}  // NOLINT

  /// Parses a decimal string ("1e-6", "0.8", "-3.25") rounded to nearest at
  /// the working precision. Throws std::invalid_argument on malformed input.
  explicit MpReal(std::string_view text);

  MpReal(const MpReal& other);
  MpReal(MpReal&& other) noexcept;
  MpReal& operator=(const MpReal& other);
  MpReal& operator=(MpReal&& other) noexcept;
  ~MpReal();

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  /// Copy carrying exactly `bits` of precision, rounded to nearest.
  MpReal rounded_to(mpfr_prec_t bits) const;

  /// Rounds to nearest unless another MPFR rounding mode is given.
  double to_double(mpfr_rnd_t mode = MPFR_RNDN) const noexcept;
  explicit operator double() const noexcept { return to_double(); }

  /// Scientific notation with `significant_digits` significant digits.
  std::string str(int significant_digits) const;

  mpfr_srcptr raw() const noexcept { return value_; }
  mpfr_ptr raw() noexcept { return value_; }

  MpReal& operator+=(const MpReal& rhs);
  MpReal& operator-=(const MpReal& rhs);
  MpReal& operator*=(const MpReal& rhs);
  MpReal& operator/=(const MpReal& rhs);

  friend MpReal operator+(const MpReal& a, const MpReal& b);
  friend MpReal operator-(const MpReal& a, const MpReal& b);
  friend MpReal operator*(const MpReal& a, const MpReal& b);
  friend MpReal operator/(const MpReal& a, const MpReal& b);
  friend MpReal operator-(const MpReal& a);

  friend bool operator==(const MpReal& a, const MpReal& b) noexcept {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const MpReal& a, const MpReal& b) noexcept {
    if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.value_, b.value_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  friend MpReal sqrt(const MpReal& x);
  friend MpReal abs(const MpReal& x);
  friend MpReal fabs(const MpReal& x) { return abs(x); }
  friend MpReal hypot(const MpReal& x, const MpReal& y);
  friend MpReal pow(const MpReal& x, const MpReal& y);
  friend MpReal log10(const MpReal& x);
  friend MpReal floor(const MpReal& x);
  friend MpReal round(const MpReal& x);
  friend bool isfinite(const MpReal& x) noexcept { return mpfr_number_p(x.value_) != 0; }
  friend bool isnan(const MpReal& x) noexcept { return mpfr_nan_p(x.value_) != 0; }
  friend bool signbit(const MpReal& x) noexcept { return mpfr_signbit(x.value_) != 0; }

  friend std::ostream& operator<<(std::ostream& os, const MpReal& x);

 private:
  struct SignedTag {};
  struct UnsignedTag {};
  struct RawTag {};
  MpReal(long value, SignedTag);
  MpReal(unsigned long value, UnsignedTag);
  MpReal(mpfr_prec_t bits, RawTag);

  static MpReal with_precision_of(const MpReal& a, const MpReal& b);

  mpfr_t value_;
};

}  // namespace radau
