#pragma once

// Plain-text persistence: Jacobi matrices, distributions, key = value
// files and CSV rows.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radau/bounds.hpp"
#include "radau/krylov.hpp"
#include "radau/precision.hpp"
#include "radau/spectrum.hpp"
#include "radau/tridiagonal.hpp"

namespace radau {

/// `jacobi <N> <digits>`, then N alphas and N-1 betas, one per line, with
/// `digits` significant digits. digits = 0 marks binary64 data written with
/// 17 digits; such files are read back through binary64 so values stay exact.
template <class Real>
void write_jacobi(std::ostream& out, const JacobiMatrix<Real>& t, int digits);

template <class Real>
JacobiMatrix<Real> read_jacobi(std::istream& in, const PrecisionContext& ctx);

/// One `node weight` line per point, ascending.
template <class Real>
void write_distribution(std::ostream& out, const DistributionFunction<Real>& dist, int digits);

template <class Real>
DistributionFunction<Real> read_distribution(std::istream& in, const PrecisionContext& ctx);

/// Ordered `key = value` pairs. Blank lines and lines starting with '#' are
/// skipped; duplicate keys keep the last value.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in);
  static KeyValueFile load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return index_.count(key) != 0; }
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

/// Joins fields with commas and terminates the line.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Splits one CSV line (no quoting).
std::vector<std::string> split_csv_row(const std::string& line);

template <class Real>
std::string format_optional(const std::optional<Real>& x, int digits) {
  return x ? format_real(*x, digits) : std::string();
}

/// `k,gamma,delta,rnorm2,true_err2`, one row per record (true_err2 empty
/// when unknown).
template <class Real>
void write_trace_csv(std::ostream& out, const CGTrace<Real>& trace, int digits);

/// Inverse of write_trace_csv; throws ParseError on a wrong header or
/// malformed rows. The stop reason is not stored and reads back as
/// CGStop::grade_reached.
template <class Real>
CGTrace<Real> read_trace_csv(std::istream& in, const PrecisionContext& ctx);

/// `k,mu_label,gauss_lower,radau_upper,simple_upper`; the header is written
/// only when `header` is set so several estimators can share one file.
template <class Real>
void write_bounds_csv(std::ostream& out, const std::string& label, const std::vector<BoundRecord<Real>>& series,
                      int digits, bool header);

/// `ell,k,omega,delta_lk,criterion_value`.
template <class Real>
void write_acceptance_csv(std::ostream& out, const std::vector<Acceptance<Real>>& accepted, int digits);

/// Opens a file for writing, throwing Error on failure.
std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace radau
