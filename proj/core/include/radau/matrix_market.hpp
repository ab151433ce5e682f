#pragma once

#include <filesystem>
#include <iosfwd>

#include "radau/operator.hpp"

namespace radau {

/// Reads a `%%MatrixMarket matrix coordinate real symmetric` file. Values are
/// parsed as decimal strings at the working precision of `ctx`.
/// Throws ParseError (with the line number) on malformed input, pattern or
/// non-symmetric headers, or out-of-range indices.
template <class Real>
SparseSymmetricMatrix<Real> read_matrix_market(std::istream& in, const PrecisionContext& ctx);

template <class Real>
SparseSymmetricMatrix<Real> read_matrix_market(const std::filesystem::path& path, const PrecisionContext& ctx);

/// Writes the lower triangle with `digits` significant digits.
template <class Real>
void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix<Real>& a, int digits);

}  // namespace radau
