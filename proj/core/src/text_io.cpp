#include "radau/text_io.hpp"

#include <fstream>
#include <sstream>

#include "radau/errors.hpp"

namespace radau {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Next non-blank line, or nullopt at end of input.
std::optional<std::string> next_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (!line.empty()) return line;
  }
  return std::nullopt;
}

template <class Real>
Real parse_field(const std::string& text, bool via_double, int lineno) {
  try {
    if (via_double) return Real(ScalarTraits<double>::parse(text));
    return parse_real<Real>(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno);
  }
}

}  // namespace

template <class Real>
void write_jacobi(std::ostream& out, const JacobiMatrix<Real>& t, int digits) {
  const int significant = digits == 0 ? 17 : digits;
  out << "jacobi " << t.size() << ' ' << digits << '\n';
  for (const auto& a : t.alphas()) out << format_real(a, significant) << '\n';
  for (const auto& b : t.betas()) out << format_real(b, significant) << '\n';
}

template <class Real>
JacobiMatrix<Real> read_jacobi(std::istream& in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  int lineno = 0;
  const auto header = next_line(in, lineno);
  if (!header) throw ParseError("empty Jacobi file", 1);
  std::istringstream hs(*header);
  std::string tag;
  long n = 0;
  int digits = -1;
  if (!(hs >> tag >> n >> digits) || tag != "jacobi" || n < 1 || digits < 0) {
    throw ParseError("expected header 'jacobi <N> <digits>'", lineno);
  }
  const bool via_double = digits == 0;
  std::vector<Real> alphas;
  std::vector<Real> betas;
  for (long i = 0; i < 2 * n - 1; ++i) {
    const auto line = next_line(in, lineno);
    if (!line) throw ParseError("expected " + std::to_string(2 * n - 1) + " values, found " + std::to_string(i), lineno);
    auto value = parse_field<Real>(*line, via_double, lineno);
    (i < n ? alphas : betas).push_back(std::move(value));
  }
  if (const auto extra = next_line(in, lineno)) throw ParseError("unexpected trailing data", lineno);
  try {
    return JacobiMatrix<Real>(std::move(alphas), std::move(betas));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

template <class Real>
void write_distribution(std::ostream& out, const DistributionFunction<Real>& dist, int digits) {
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out << format_real(dist.nodes[i], digits) << ' ' << format_real(dist.weights[i], digits) << '\n';
  }
}

template <class Real>
DistributionFunction<Real> read_distribution(std::istream& in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  DistributionFunction<Real> dist;
  int lineno = 0;
  while (const auto line = next_line(in, lineno)) {
    std::istringstream ls(*line);
    std::string node, weight, extra;
    if (!(ls >> node >> weight) || (ls >> extra)) throw ParseError("expected 'node weight'", lineno);
    dist.nodes.push_back(parse_field<Real>(node, false, lineno));
    dist.weights.push_back(parse_field<Real>(weight, false, lineno));
  }
  try {
    dist.validate(ctx.tolerance<Real>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  return dist;
}

KeyValueFile KeyValueFile::parse(std::istream& in) {
  KeyValueFile kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    kv.set(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void KeyValueFile::set(const std::string& key, std::string value) {
  if (const auto it = index_.find(key); it != index_.end()) {
    entries_[it->second].second = std::move(value);
    return;
  }
  index_[key] = entries_.size();
  entries_.emplace_back(key, std::move(value));
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

void KeyValueFile::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ls(trim(line));
  while (std::getline(ls, field, ',')) out.push_back(field);
  if (!line.empty() && trim(line).back() == ',') out.emplace_back();
  return out;
}

template <class Real>
void write_trace_csv(std::ostream& out, const CGTrace<Real>& trace, int digits) {
  out << "k,gamma,delta,rnorm2,true_err2\n";
  for (const auto& r : trace.records) {
    write_csv_row(out, {std::to_string(r.k), format_real(r.gamma, digits), format_real(r.delta, digits),
                        format_real(r.rnorm2, digits), format_optional(r.true_err2, digits)});
  }
}

template <class Real>
CGTrace<Real> read_trace_csv(std::istream& in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || trim(line) != "k,gamma,delta,rnorm2,true_err2") {
    throw ParseError("expected header 'k,gamma,delta,rnorm2,true_err2'", 1);
  }
  CGTrace<Real> trace;
  trace.stop = CGStop::grade_reached;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_row(line);
    if (f.size() != 5) throw ParseError("expected 5 fields, found " + std::to_string(f.size()), lineno);
    CGRecord<Real> rec;
    if (f[0] != std::to_string(trace.records.size())) {
      throw ParseError("expected k = " + std::to_string(trace.records.size()), lineno);
    }
    rec.k = trace.records.size();
    rec.gamma = parse_field<Real>(f[1], false, lineno);
    rec.delta = parse_field<Real>(f[2], false, lineno);
    rec.rnorm2 = parse_field<Real>(f[3], false, lineno);
    if (!f[4].empty()) rec.true_err2 = parse_field<Real>(f[4], false, lineno);
    trace.records.push_back(std::move(rec));
  }
  trace.final_rnorm2 = Real(0);
  return trace;
}

template <class Real>
void write_bounds_csv(std::ostream& out, const std::string& label, const std::vector<BoundRecord<Real>>& series,
                      int digits, bool header) {
  if (header) out << "k,mu_label,gauss_lower,radau_upper,simple_upper\n";
  for (const auto& b : series) {
    write_csv_row(out, {std::to_string(b.k), label, format_real(b.gauss_lower, digits),
                        format_real(b.radau_upper, digits), format_real(b.simple_upper, digits)});
  }
}

template <class Real>
void write_acceptance_csv(std::ostream& out, const std::vector<Acceptance<Real>>& accepted, int digits) {
  out << "ell,k,omega,delta_lk,criterion_value\n";
  for (const auto& a : accepted) {
    write_csv_row(out, {std::to_string(a.ell), std::to_string(a.k), format_real(a.omega, digits),
                        format_real(a.delta_lk, digits), format_real(a.criterion, digits)});
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

#define RADAU_INSTANTIATE(Real)                                                                        \
  template void write_jacobi(std::ostream&, const JacobiMatrix<Real>&, int);                           \
  template JacobiMatrix<Real> read_jacobi(std::istream&, const PrecisionContext&);                     \
  template void write_distribution(std::ostream&, const DistributionFunction<Real>&, int);             \
  template DistributionFunction<Real> read_distribution(std::istream&, const PrecisionContext&);       \
  template void write_trace_csv(std::ostream&, const CGTrace<Real>&, int);                             \
  template CGTrace<Real> read_trace_csv(std::istream&, const PrecisionContext&);                       \
  template void write_bounds_csv(std::ostream&, const std::string&, const std::vector<BoundRecord<Real>>&, \
                                 int, bool);                                                           \
  template void write_acceptance_csv(std::ostream&, const std::vector<Acceptance<Real>>&, int);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
