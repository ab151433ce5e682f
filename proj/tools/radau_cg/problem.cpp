#include "problem.hpp"

#include <fstream>

#include "radau/errors.hpp"
#include "radau/krylov.hpp"
#include "radau/matrix_market.hpp"
#include "radau/text_io.hpp"

namespace radau::cli {

template <class Real>
std::vector<Real> read_vector(std::istream& in, std::size_t n, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  std::vector<Real> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%' || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      out.push_back(parse_real<Real>(line.substr(first, last - first + 1)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (out.size() != n) {
    throw ParseError("expected " + std::to_string(n) + " vector entries, found " + std::to_string(out.size()), 0);
  }
  return out;
}

template <class Real>
std::vector<Real> make_rhs(const RhsChoice& choice, std::size_t n, const PrecisionContext& ctx) {
  using std::sqrt;
  PrecisionScope scope(ctx);
  switch (choice.kind) {
    case RhsKind::e1: {
      std::vector<Real> b(n, Real(0));
      b[0] = Real(1);
      return b;
    }
    case RhsKind::ones:
      return std::vector<Real>(n, Real(1) / sqrt(Real(static_cast<long>(n))));
    case RhsKind::file: {
      auto in = open_input(choice.path);
      try {
        return read_vector<Real>(in, n, ctx);
      } catch (const ParseError& e) {
        throw ParseError(choice.path.string() + ": " + e.what(), 0);
      }
    }
  }
  throw Error("unknown right-hand side");
}

template <class Real>
SparseSymmetricMatrix<Real> load_spd_candidate(const std::filesystem::path& path, const PrecisionContext& ctx) {
  auto a = read_matrix_market<Real>(path, ctx);
  std::vector<bool> seen(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = a.row_offsets()[i]; j < a.row_offsets()[i + 1]; ++j) {
      if (a.columns()[j] != i) continue;
      seen[i] = true;
      if (!(a.values()[j] > Real(0))) {
        throw NotPositiveDefinite(path.string() + ": diagonal entry " + std::to_string(i + 1) +
                                  " is not positive; matrix is not SPD");
      }
    }
    if (!seen[i]) {
      throw NotPositiveDefinite(path.string() + ": diagonal entry " + std::to_string(i + 1) +
                                " is missing; matrix is not SPD");
    }
  }
  return a;
}

template <class Real>
LoadedProblem<Real> load_problem(const ExperimentConfig& config, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  LoadedProblem<Real> out;
  const auto rhs = config.rhs_or_default();
  if (config.source == ProblemSource::model) {
    auto prob = build_model_problem<Real>(config.model, ctx);
    out.source = "model";
    out.rhs = make_rhs<Real>(rhs, prob.matrix.size(), ctx);
    if (config.oracle) {
      out.lambda1 = prob.lambda_min;
      out.exact_solution = rhs.kind == RhsKind::e1
                               ? prob.exact_solution
                               : solve_shifted(prob.matrix, Real(0), std::span<const Real>(out.rhs), ctx);
    }
    out.op = std::make_shared<TridiagonalOperator<Real>>(std::move(prob.matrix));
    return out;
  }
  if (config.matrix.empty()) throw Error("problem = matrix needs a 'matrix' path");
  auto a = std::make_shared<SparseSymmetricMatrix<Real>>(load_spd_candidate<Real>(config.matrix, ctx));
  out.source = config.matrix.string();
  out.rhs = make_rhs<Real>(rhs, a->size(), ctx);
  if (config.oracle) {
    out.exact_solution = dense_spd_solve(*a, std::span<const Real>(out.rhs), ctx);
    out.lambda1 = extreme_eigenvalues(*a, ctx).first;
  }
  out.op = std::move(a);
  return out;
}

#define RADAU_INSTANTIATE(Real)                                                                                 \
  template std::vector<Real> read_vector(std::istream&, std::size_t, const PrecisionContext&);                   \
  template std::vector<Real> make_rhs(const RhsChoice&, std::size_t, const PrecisionContext&);                  \
  template SparseSymmetricMatrix<Real> load_spd_candidate(const std::filesystem::path&, const PrecisionContext&); \
  template LoadedProblem<Real> load_problem(const ExperimentConfig&, const PrecisionContext&);

RADAU_INSTANTIATE(double)
RADAU_INSTANTIATE(MpReal)

}  // namespace radau::cli
