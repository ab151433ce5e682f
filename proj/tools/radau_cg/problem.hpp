#pragma once

// Builds the linear system an experiment runs on.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "radau/operator.hpp"
#include "radau/spectrum.hpp"

namespace radau::cli {

template <class Real>
struct LoadedProblem {
  std::shared_ptr<const LinearOperator<Real>> op;
  std::vector<Real> rhs;
  /// Oracle quantities (filled only in oracle mode).
  std::optional<std::vector<Real>> exact_solution;
  std::optional<Real> lambda1;
  /// Source label for metadata: "model" or the matrix path.
  std::string source;
};

/// Reads one value per line; the count must equal n.
template <class Real>
std::vector<Real> read_vector(std::istream& in, std::size_t n, const PrecisionContext& ctx);

/// The right-hand side selected by `choice` for an n-dimensional problem.
template <class Real>
std::vector<Real> make_rhs(const RhsChoice& choice, std::size_t n, const PrecisionContext& ctx);

/// Loads a Matrix Market file and rejects matrices that cannot be SPD
/// (nonpositive diagonal entries).
template <class Real>
SparseSymmetricMatrix<Real> load_spd_candidate(const std::filesystem::path& path, const PrecisionContext& ctx);

template <class Real>
LoadedProblem<Real> load_problem(const ExperimentConfig& config, const PrecisionContext& ctx);

}  // namespace radau::cli
