#include "radau/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radau/errors.hpp"

namespace radau {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '%';
}

}  // namespace

template <class Real>
SparseSymmetricMatrix<Real> read_matrix_market(std::istream& in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file", 1);
  ++lineno;
  {
    std::istringstream header(lowercase(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket") throw ParseError("missing %%MatrixMarket banner", lineno);
    if (object != "matrix" || format != "coordinate") {
      throw ParseError("only 'matrix coordinate' files are supported", lineno);
    }
    if (field == "pattern") throw ParseError("pattern matrices carry no values", lineno);
    if (field != "real") throw ParseError("field must be 'real', got '" + field + "'", lineno);
    if (symmetry != "symmetric") throw ParseError("symmetry must be 'symmetric', got '" + symmetry + "'", lineno);
  }

  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_size = false;
  std::vector<Triplet<Real>> triplets;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream fields(line);
    if (!have_size) {
      if (!(fields >> rows >> cols >> entries)) throw ParseError("bad size line", lineno);
      if (rows != cols) throw ParseError("symmetric matrix must be square", lineno);
      have_size = true;
      triplets.reserve(entries);
      continue;
    }
    long i = 0, j = 0;
    std::string value;
    if (!(fields >> i >> j >> value)) throw ParseError("expected 'row col value'", lineno);
    std::string extra;
    if (fields >> extra) throw ParseError("unexpected trailing field '" + extra + "'", lineno);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols) {
      throw ParseError("index out of range", lineno);
    }
    try {
      triplets.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), parse_real<Real>(value)});
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!have_size) throw ParseError("missing size line", lineno);
  if (triplets.size() != entries) {
    throw ParseError("expected " + std::to_string(entries) + " entries, found " + std::to_string(triplets.size()),
                     lineno);
  }
  return SparseSymmetricMatrix<Real>(rows, std::move(triplets));
}

template <class Real>
SparseSymmetricMatrix<Real> read_matrix_market(const std::filesystem::path& path, const PrecisionContext& ctx) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market<Real>(in, ctx);
}

template <class Real>
void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix<Real>& a, int digits) {
  std::size_t lower = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) lower += a.columns()[k] <= i;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.size() << ' ' << a.size() << ' ' << lower << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      if (a.columns()[k] > i) continue;
      out << i + 1 << ' ' << a.columns()[k] + 1 << ' ' << format_real(a.values()[k], digits) << '\n';
    }
  }
}

#define RADAU_INSTANTIATE(Real)                                                                                  \
  template SparseSymmetricMatrix<Real> read_matrix_market(std::istream&, const PrecisionContext&);              \
  template SparseSymmetricMatrix<Real> read_matrix_market(const std::filesystem::path&, const PrecisionContext&); \
  template void write_matrix_market(std::ostream&, const SparseSymmetricMatrix<Real>&, int);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau
