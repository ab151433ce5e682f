#include "radau/precision.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace radau {

PrecisionContext::PrecisionContext(int decimal_digits) : digits_(decimal_digits) {
  if (decimal_digits != 0 && (decimal_digits < kMinDigits || decimal_digits > kMaxDigits)) {
    throw std::invalid_argument("decimal digits must be 0 (native) or in [16, 4096], got " +
                                std::to_string(decimal_digits));
  }
}

mpfr_prec_t PrecisionContext::binary_precision() const noexcept {
  if (is_native()) return 53;
  // ceil(D * log2(10))
  return static_cast<mpfr_prec_t>(std::ceil(digits_ * 3.321928094887362));
}

int PrecisionContext::roundtrip_digits() const noexcept {
  if (is_native()) return 17;
  return 1 + static_cast<int>(std::ceil(static_cast<double>(binary_precision()) * 0.30102999566398120));
}

std::string PrecisionContext::describe() const {
  return is_native() ? std::string("binary64") : std::to_string(digits_) + " digits";
}

PrecisionScope::PrecisionScope(const PrecisionContext& ctx) : saved_(working_precision()) {
  set_working_precision(ctx.binary_precision());
}

PrecisionScope::~PrecisionScope() { set_working_precision(saved_); }

double ScalarTraits<double>::parse(std::string_view text) {
  const std::string buffer(text);
  char* end = nullptr;
  errno = 0;
  const double value = buffer.empty() ? 0.0 : std::strtod(buffer.c_str(), &end);
  if (buffer.empty() || end != buffer.c_str() + buffer.size()) {
    throw std::invalid_argument("not a decimal number: '" + buffer + "'");
  }
  return value;
}

std::string ScalarTraits<double>::format(double x, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*e", significant_digits > 0 ? significant_digits - 1 : 0, x);
  return buffer;
}

MpReal ScalarTraits<MpReal>::unit_roundoff() {
  MpReal u(1);
  mpfr_set_prec(u.raw(), working_precision());
  mpfr_set_ui_2exp(u.raw(), 1, -working_precision(), MPFR_RNDN);
  return u;
}

}  // namespace radau
