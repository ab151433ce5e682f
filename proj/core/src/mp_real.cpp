#include "radau/mp_real.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace radau {

namespace {

thread_local mpfr_prec_t g_working_precision = 53;

mpfr_prec_t at_least_double(mpfr_prec_t bits) { return std::max<mpfr_prec_t>(bits, 53); }

}  // namespace

mpfr_prec_t working_precision() noexcept { return g_working_precision; }

void set_working_precision(mpfr_prec_t bits) noexcept {
  g_working_precision = std::clamp<mpfr_prec_t>(bits, MPFR_PREC_MIN, MPFR_PREC_MAX);
}

MpReal::MpReal() {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_zero(value_, 1);
}

MpReal::MpReal(double value) {
  // Doubles are always represented exactly.
  mpfr_init2(value_, at_least_double(g_working_precision));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

// Integers are rounded to the working precision like any other literal, so
// that small contexts do not silently compute with extra bits.
MpReal::MpReal(long value, SignedTag) {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

MpReal::MpReal(unsigned long value, UnsignedTag) {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_ui(value_, value, MPFR_RNDN);
}

MpReal::MpReal(mpfr_prec_t bits, RawTag) { mpfr_init2(value_, bits); }

MpReal::MpReal(std::string_view text) {
  mpfr_init2(value_, g_working_precision);
  const std::string buffer(text);
  char* end = nullptr;
  if (!buffer.empty()) mpfr_strtofr(value_, buffer.c_str(), &end, 10, MPFR_RNDN);
  if (buffer.empty() || end != buffer.c_str() + buffer.size()) {
    mpfr_clear(value_);
    throw std::invalid_argument("not a decimal number: '" + buffer + "'");
  }
}

MpReal::MpReal(const MpReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpReal::MpReal(MpReal&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

MpReal MpReal::rounded_to(mpfr_prec_t bits) const {
  MpReal out(bits, RawTag{});
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

MpReal& MpReal::operator=(const MpReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

MpReal& MpReal::operator=(MpReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

MpReal::~MpReal() { mpfr_clear(value_); }

double MpReal::to_double(mpfr_rnd_t mode) const noexcept { return mpfr_get_d(value_, mode); }

std::string MpReal::str(int significant_digits) const {
  significant_digits = std::max(significant_digits, 1);
  const int needed = mpfr_snprintf(nullptr, 0, "%.*Re", significant_digits - 1, value_);
  std::vector<char> buffer(static_cast<std::size_t>(needed) + 1);
  mpfr_snprintf(buffer.data(), buffer.size(), "%.*Re", significant_digits - 1, value_);
  return std::string(buffer.data(), static_cast<std::size_t>(needed));
}

MpReal MpReal::with_precision_of(const MpReal& a, const MpReal& b) {
  return MpReal(std::max(a.precision(), b.precision()), RawTag{});
}

MpReal& MpReal::operator+=(const MpReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

MpReal& MpReal::operator-=(const MpReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

MpReal& MpReal::operator*=(const MpReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

MpReal& MpReal::operator/=(const MpReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

MpReal operator+(const MpReal& a, const MpReal& b) {
  MpReal r = MpReal::with_precision_of(a, b);
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

MpReal operator-(const MpReal& a, const MpReal& b) {
  MpReal r = MpReal::with_precision_of(a, b);
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

MpReal operator*(const MpReal& a, const MpReal& b) {
  MpReal r = MpReal::with_precision_of(a, b);
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

MpReal operator/(const MpReal& a, const MpReal& b) {
  MpReal r = MpReal::with_precision_of(a, b);
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

MpReal operator-(const MpReal& a) {
  MpReal r(a.precision(), MpReal::RawTag{});
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

MpReal sqrt(const MpReal& x) {
  MpReal r(x.precision(), MpReal::RawTag{});
  mpfr_sqrt(r.value_, x.value_, MPFR_RNDN);
  return r;
}

MpReal abs(const MpReal& x) {
  MpReal r(x.precision(), MpReal::RawTag{});
  mpfr_abs(r.value_, x.value_, MPFR_RNDN);
  return r;
}

MpReal hypot(const MpReal& x, const MpReal& y) {
  MpReal r = MpReal::with_precision_of(x, y);
  mpfr_hypot(r.value_, x.value_, y.value_, MPFR_RNDN);
  return r;
}

MpReal pow(const MpReal& x, const MpReal& y) {
  MpReal r = MpReal::with_precision_of(x, y);
  mpfr_pow(r.value_, x.value_, y.value_, MPFR_RNDN);
  return r;
}

MpReal log10(const MpReal& x) {
  MpReal r(x.precision(), MpReal::RawTag{});
  mpfr_log10(r.value_, x.value_, MPFR_RNDN);
  return r;
}

MpReal floor(const MpReal& x) {
  MpReal r(x.precision(), MpReal::RawTag{});
  mpfr_floor(r.value_, x.value_);
  return r;
}

MpReal round(const MpReal& x) {
  MpReal r(x.precision(), MpReal::RawTag{});
  mpfr_round(r.value_, x.value_);
  return r;
}

std::ostream& operator<<(std::ostream& os, const MpReal& x) {
  return os << x.str(static_cast<int>(os.precision()) > 6 ? static_cast<int>(os.precision()) : 20);
}

}  // namespace radau
