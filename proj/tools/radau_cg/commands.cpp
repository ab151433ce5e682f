#include "commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "mu_spec.hpp"
#include "problem.hpp"
#include "radau/analysis.hpp"
#include "radau/errors.hpp"
#include "radau/matrix_market.hpp"
#include "radau/text_io.hpp"

namespace radau::cli {

namespace {

namespace fs = std::filesystem;

fs::path prepare_output(const ExperimentConfig& config) {
  fs::create_directories(config.out);
  return config.out;
}

std::string index_or_none(const std::optional<std::size_t>& i) { return i ? std::to_string(*i) : "none"; }

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string require(const KeyValueFile& kv, const std::string& key, const fs::path& file) {
  auto v = kv.get(key);
  if (!v) throw Error(file.string() + ": missing '" + key + "'");
  return *v;
}

template <class Real>
int model_impl(const ExperimentConfig& config, const PrecisionContext& ctx, std::ostream& log) {
  const auto dir = prepare_output(config);
  const auto prob = build_model_problem<Real>(config.model, ctx);
  const int digits = ctx.output_digits();
  {
    auto out = open_output(dir / "reference_T.jacobi");
    write_jacobi(out, prob.reference, ctx.decimal_digits());
  }
  {
    auto out = open_output(dir / "distribution.txt");
    write_distribution(out, prob.distribution, digits);
  }
  {
    auto out = open_output(dir / "problem.jacobi");
    write_jacobi(out, prob.matrix, 0);
  }
  {
    // Round-trip digits so that re-ingesting gives the same operator.
    auto out = open_output(dir / "problem.mtx");
    write_matrix_market(out, SparseSymmetricMatrix<Real>::from_jacobi(prob.matrix), ctx.roundtrip_digits());
  }
  KeyValueFile meta;
  meta.set("m", std::to_string(config.model.m));
  meta.set("lambda_first", config.model.lambda_first);
  meta.set("lambda_last", config.model.lambda_last);
  meta.set("rho", config.model.rho);
  meta.set("delta", config.model.delta);
  meta.set("p", std::to_string(config.model.p));
  meta.set("digits", std::to_string(ctx.decimal_digits()));
  meta.set("n", std::to_string(prob.matrix.size()));
  meta.set("lambda1", format_real(prob.lambda_min, digits));
  {
    auto out = open_output(dir / "model.meta");
    meta.write(out);
  }
  log << "model: N=" << prob.matrix.size() << " lambda1=" << format_real(prob.lambda_min, 20) << " ("
      << ctx.describe() << ") -> " << dir.string() << '\n';
  return 0;
}

template <class Real>
int solve_impl(const ExperimentConfig& config, const PrecisionContext& ctx, std::ostream& log) {
  const auto specs = parse_mu_specs(config.mu_specs);
  if (specs.empty()) throw Error("solve needs at least one mu spec (mu = ... or --mu)");
  const auto dir = prepare_output(config);
  const auto problem = load_problem<Real>(config, ctx);
  PrecisionScope scope(ctx);
  const int digits = ctx.output_digits();

  std::vector<MuEstimator<Real>> estimators;
  std::vector<AdaptiveAcceptor<Real>> acceptors;
  const Real tau = parse_real<Real>(config.tau);
  for (const auto& spec : specs) {
    estimators.emplace_back(resolve_mu<Real>(spec, problem.lambda1), spec.label());
    acceptors.emplace_back(tau);
  }

  CGOptions<Real> options;
  options.max_iterations = config.max_iters;
  options.exact_solution = problem.exact_solution;
  options.reorthogonalize = config.reorthogonalize;
  if (config.stop_tolerance) options.stop_tolerance = parse_real<Real>(*config.stop_tolerance);
  const auto observer = [&](const CGRecord<Real>& rec, const CGState<Real>&) {
    for (std::size_t i = 0; i < estimators.size(); ++i) acceptors[i].advance(rec, estimators[i].update(rec));
    return true;
  };
  const auto trace = run_cg<Real>(*problem.op, std::span<const Real>(problem.rhs), ctx, options, observer);

  {
    auto out = open_output(dir / "trace.csv");
    write_trace_csv(out, trace, ctx.roundtrip_digits());
  }
  {
    auto out = open_output(dir / "bounds.csv");
    for (std::size_t i = 0; i < estimators.size(); ++i) {
      write_bounds_csv(out, estimators[i].label(), estimators[i].history(), digits, i == 0);
    }
  }
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    auto out = open_output(dir / ("acceptance_" + estimators[i].label() + ".csv"));
    write_acceptance_csv(out, acceptors[i].accepted(), digits);
  }
  {
    auto out = open_output(dir / "status.csv");
    out << "mu_label,mu,status,accepted\n";
    for (std::size_t i = 0; i < estimators.size(); ++i) {
      write_csv_row(out, {estimators[i].label(), format_real(estimators[i].mu(), digits), estimators[i].status(),
                          std::to_string(acceptors[i].accepted().size())});
    }
  }
  if (problem.lambda1) {
    RitzCache<Real> cache(trace, ctx);
    auto out = open_output(dir / "ritz.csv");
    out << "k,theta1,theta1_minus_lambda1\n";
    for (std::size_t k = 1; k <= cache.max_k(); ++k) {
      write_csv_row(out, {std::to_string(k), format_real(cache.theta1(k), digits),
                          format_real(cache.theta1(k) - *problem.lambda1, digits)});
    }
  }

  KeyValueFile meta;
  meta.set("source", problem.source);
  meta.set("digits", std::to_string(ctx.decimal_digits()));
  meta.set("n", std::to_string(problem.op->size()));
  meta.set("iterations", std::to_string(trace.size()));
  meta.set("stop", to_string(trace.stop));
  meta.set("oracle", problem.lambda1 ? "true" : "false");
  if (problem.lambda1) meta.set("lambda1", format_real(*problem.lambda1, ctx.roundtrip_digits()));
  meta.set("tau", config.tau);
  meta.set("threshold", config.marker_threshold);
  std::string labels;
  for (const auto& e : estimators) labels += (labels.empty() ? "" : ",") + e.label();
  meta.set("mu_labels", labels);
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    meta.set("mu." + estimators[i].label(), format_real(estimators[i].mu(), ctx.roundtrip_digits()));
    meta.set("mu_spec." + estimators[i].label(), specs[i].text);
  }
  {
    auto out = open_output(dir / "solve.meta");
    meta.write(out);
  }

  log << "solve: " << trace.size() << " iterations (" << to_string(trace.stop) << "), " << ctx.describe() << '\n';
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    log << "  " << estimators[i].label() << ": " << estimators[i].status() << ", "
        << acceptors[i].accepted().size() << " accepted improved bounds\n";
  }
  return 0;
}

template <class Real>
int analyze_impl(const fs::path& dir, const KeyValueFile& meta, const PrecisionContext& ctx, std::ostream& log) {
  PrecisionScope scope(ctx);
  const int digits = ctx.output_digits();
  const auto meta_path = dir / "solve.meta";
  CGTrace<Real> trace;
  {
    auto in = open_input(dir / "trace.csv");
    try {
      trace = read_trace_csv<Real>(in, ctx);
    } catch (const ParseError& e) {
      throw ParseError((dir / "trace.csv").string() + ": " + e.what(), 0);
    }
  }
  if (trace.size() == 0) throw Error("trace.csv has no iterations");
  std::optional<Real> lambda1;
  if (const auto l = meta.get("lambda1")) lambda1 = parse_real<Real>(*l);
  const Real threshold = parse_real<Real>(meta.get("threshold").value_or("0.5"));
  const auto labels = split_labels(require(meta, "mu_labels", meta_path));

  RitzCache<Real> cache(trace, ctx);
  const auto full = cg_to_lanczos(trace, trace.size());
  std::vector<MuEstimator<Real>> estimators;
  for (const auto& label : labels) {
    estimators.push_back(estimate(trace, parse_real<Real>(require(meta, "mu." + label, meta_path)), label));
  }
  std::optional<MuEstimator<Real>> at_lambda1;
  if (lambda1) at_lambda1 = estimate(trace, *lambda1, "lambda1");

  auto markers = open_output(dir / "markers.csv");
  markers << "mu_label,ell1,ell2,onset\n";
  auto delays = open_output(dir / "delay.csv");
  delays << "mu_label,ell,delay\n";
  for (const auto& est : estimators) {
    const auto& series = est.history();
    const auto rows = analyze_mu(cache, series, est.mu(), lambda1);
    {
      auto out = open_output(dir / ("analysis_" + est.label() + ".csv"));
      out << "k,theta1,theta1_minus_lambda1,eta1,eta_max_index,eta_max,zeta,h_k,rho_k,reldist,phase\n";
      for (const auto& r : rows) {
        write_csv_row(out, {std::to_string(r.k), format_real(r.theta1, digits),
                            format_optional(r.theta1_minus_lambda1, digits), format_optional(r.eta1, digits),
                            r.eta_max_index ? std::to_string(*r.eta_max_index) : "",
                            format_optional(r.eta_max, digits), format_optional(r.zeta, digits),
                            format_optional(r.h, digits), format_optional(r.rho, digits),
                            format_real(r.reldist, digits), r.phase ? std::to_string(*r.phase) : ""});
      }
    }
    {
      auto out = open_output(dir / ("terms_" + est.label() + ".csv"));
      out << "k,omega_identity,eta1_over_mu,first_term,rest_terms,first_upper,rest_upper\n";
      for (const auto& r : rows) {
        if (!r.negligible) continue;
        const auto& n = *r.negligible;
        write_csv_row(out, {std::to_string(r.k), format_optional(r.omega_discrepancy, digits),
                            format_real(n.eta1_over_mu, digits), format_real(n.first, digits),
                            format_real(n.rest, digits), format_optional(n.first_upper, digits),
                            format_optional(n.rest_upper, digits)});
      }
    }
    std::vector<Real> reldist;
    for (const auto& b : series) reldist.push_back(relative_distance(b.phi, est.mu(), b.gamma_mu));
    const auto m = phase2_markers_practical(std::span<const Real>(reldist), threshold);
    std::optional<std::size_t> onset;
    for (const auto& r : rows) {
      if (r.phase && *r.phase == 2) {
        onset = r.k;
        break;
      }
    }
    write_csv_row(markers, {est.label(), index_or_none(m.ell1), index_or_none(m.ell2),
                            lambda1 ? index_or_none(onset) : ""});
    for (std::size_t ell = 0; ell + 1 < trace.size(); ++ell) {
      const auto d = delay_estimate(series, trace, ell);
      write_csv_row(delays, {est.label(), std::to_string(ell), d ? std::to_string(*d) : ""});
    }
    log << "  " << est.label() << ": ell1=" << index_or_none(m.ell1) << " ell2=" << index_or_none(m.ell2);
    if (lambda1) log << " onset=" << index_or_none(onset);
    log << '\n';
  }

  auto alpha = open_output(dir / "alpha.csv");
  std::vector<std::string> header{"k", "alpha"};
  for (const auto& est : estimators) header.push_back("alpha_" + est.label());
  if (at_lambda1) header.emplace_back("alpha_lambda1");
  write_csv_row(alpha, header);
  for (std::size_t k = 1; k <= trace.size(); ++k) {
    std::vector<std::string> row{std::to_string(k), format_real(full.alpha(k - 1), digits)};
    for (const auto& est : estimators) row.push_back(format_real(est.history()[k - 1].alpha_mu, digits));
    if (at_lambda1) row.push_back(format_real(at_lambda1->history()[k - 1].alpha_mu, digits));
    write_csv_row(alpha, row);
  }
  log << "analyze: " << trace.size() << " iterations, " << estimators.size() << " shifts -> " << dir.string()
      << '\n';
  return 0;
}

template <class Real>
int ingest_impl(const ExperimentConfig& config, const PrecisionContext& ctx, std::ostream& log) {
  if (config.matrix.empty()) throw Error("ingest needs a 'matrix' path in the config");
  const auto a = load_spd_candidate<Real>(config.matrix, ctx);
  PrecisionScope scope(ctx);
  const int digits = ctx.output_digits();
  const auto choice = config.rhs ? *config.rhs : RhsChoice{RhsKind::ones, {}};
  const auto b = make_rhs<Real>(choice, a.size(), ctx);
  const auto dir = prepare_output(config);
  {
    auto out = open_output(dir / "problem.mtx");
    write_matrix_market(out, a, ctx.roundtrip_digits());
  }
  {
    auto out = open_output(dir / "rhs.txt");
    for (const auto& v : b) out << format_real(v, ctx.roundtrip_digits()) << '\n';
  }
  KeyValueFile meta;
  meta.set("source", config.matrix.string());
  meta.set("digits", std::to_string(ctx.decimal_digits()));
  meta.set("n", std::to_string(a.size()));
  meta.set("nonzeros", std::to_string(a.nonzeros()));
  meta.set("rhs", to_string(choice));
  meta.set("norm_inf", format_real(a.norm_inf(), digits));
  if (config.oracle) {
    const auto [lo, hi] = extreme_eigenvalues(a, ctx);
    if (!(lo > Real(0))) throw NotPositiveDefinite(config.matrix.string() + ": smallest eigenvalue is not positive");
    meta.set("lambda_min", format_real(lo, digits));
    meta.set("lambda_max", format_real(hi, digits));
  }
  {
    auto out = open_output(dir / "ingest.meta");
    meta.write(out);
  }
  ExperimentConfig next = config;
  next.source = ProblemSource::matrix;
  next.matrix = fs::absolute(dir / "problem.mtx");
  next.rhs = RhsChoice{RhsKind::file, fs::absolute(dir / "rhs.txt")};
  {
    auto out = open_output(dir / "problem.conf");
    to_key_values(next).write(out);
  }
  log << "ingest: N=" << a.size() << " nnz=" << a.nonzeros() << " rhs=" << to_string(choice) << " -> "
      << dir.string() << '\n';
  return 0;
}

}  // namespace

int cmd_model(const ExperimentConfig& config, std::ostream& log) {
  const auto ctx = config.context();
  return with_scalar(ctx, [&](auto tag) {
    using Real = typename decltype(tag)::type;
    return model_impl<Real>(config, ctx, log);
  });
}

int cmd_solve(const ExperimentConfig& config, std::ostream& log) {
  const auto ctx = config.context();
  return with_scalar(ctx, [&](auto tag) {
    using Real = typename decltype(tag)::type;
    return solve_impl<Real>(config, ctx, log);
  });
}

int cmd_analyze(const ExperimentConfig& config, std::ostream& log) {
  const auto meta_path = config.out / "solve.meta";
  if (!fs::exists(meta_path)) throw Error(meta_path.string() + " not found; run 'solve' first");
  const auto meta = KeyValueFile::load(meta_path);
  int digits = 0;
  try {
    digits = std::stoi(require(meta, "digits", meta_path));
  } catch (const std::logic_error&) {
    throw Error(meta_path.string() + ": malformed 'digits'");
  }
  const PrecisionContext ctx(digits);
  return with_scalar(ctx, [&](auto tag) {
    using Real = typename decltype(tag)::type;
    return analyze_impl<Real>(config.out, meta, ctx, log);
  });
}

int cmd_ingest(const ExperimentConfig& config, std::ostream& log) {
  const auto ctx = config.context();
  return with_scalar(ctx, [&](auto tag) {
    using Real = typename decltype(tag)::type;
    return ingest_impl<Real>(config, ctx, log);
  });
}

}  // namespace radau::cli
