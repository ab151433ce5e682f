#include "config.hpp"

#include <charconv>
#include <sstream>

#include "mu_spec.hpp"
#include "radau/errors.hpp"

namespace radau::cli {

namespace {

template <class Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("'" + key + "' expects an integer, got '" + text + "'", 0);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParseError("'" + key + "' expects true or false, got '" + text + "'", 0);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

// Checks that a decimal setting parses as a number.
std::string checked_decimal(const std::string& key, const std::string& text) {
  try {
    (void)ScalarTraits<double>::parse(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("'" + key + "' expects a decimal number, got '" + text + "'", 0);
  }
  return text;
}

// Settings whose validity does not depend on the key order.
void validate(const ExperimentConfig& c) {
  if (c.model.m < 1) throw ParseError("'m' must be at least 1, got " + std::to_string(c.model.m), 0);
  if (c.model.p < 1) throw ParseError("'p' must be at least 1, got " + std::to_string(c.model.p), 0);
  try {
    (void)PrecisionContext(c.digits);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("'digits': ") + e.what(), 0);
  }
  (void)parse_mu_specs(c.mu_specs);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  const std::filesystem::path p(text);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

RhsChoice parse_rhs(const std::string& text) {
  if (text == "ones") return {RhsKind::ones, {}};
  if (text == "e1") return {RhsKind::e1, {}};
  if (text.rfind("file:", 0) == 0 && text.size() > 5) return {RhsKind::file, text.substr(5)};
  throw ParseError("'rhs' expects ones, e1 or file:<path>, got '" + text + "'", 0);
}

std::string to_string(const RhsChoice& rhs) {
  switch (rhs.kind) {
    case RhsKind::ones:
      return "ones";
    case RhsKind::e1:
      return "e1";
    case RhsKind::file:
      return "file:" + rhs.path.string();
  }
  return "ones";
}

RhsChoice ExperimentConfig::rhs_or_default() const {
  if (rhs) return *rhs;
  return source == ProblemSource::model ? RhsChoice{RhsKind::e1, {}} : RhsChoice{RhsKind::ones, {}};
}

ExperimentConfig parse_config(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "problem") {
      if (value == "model") {
        c.source = ProblemSource::model;
      } else if (value == "matrix") {
        c.source = ProblemSource::matrix;
      } else {
        throw ParseError("'problem' expects model or matrix, got '" + value + "'", 0);
      }
    } else if (key == "m") {
      c.model.m = parse_integer<int>(key, value);
    } else if (key == "p") {
      c.model.p = parse_integer<int>(key, value);
    } else if (key == "lambda_first") {
      c.model.lambda_first = checked_decimal(key, value);
    } else if (key == "lambda_last") {
      c.model.lambda_last = checked_decimal(key, value);
    } else if (key == "rho") {
      c.model.rho = checked_decimal(key, value);
    } else if (key == "delta") {
      c.model.delta = checked_decimal(key, value);
    } else if (key == "matrix") {
      c.matrix = resolve(base_dir, value);
    } else if (key == "rhs") {
      auto rhs = parse_rhs(value);
      if (rhs.kind == RhsKind::file) rhs.path = resolve(base_dir, rhs.path.string());
      c.rhs = rhs;
    } else if (key == "digits") {
      c.digits = parse_integer<int>(key, value);
    } else if (key == "mu") {
      c.mu_specs = split_list(value);
    } else if (key == "tau") {
      c.tau = checked_decimal(key, value);
    } else if (key == "max_iters") {
      c.max_iters = parse_integer<std::size_t>(key, value);
    } else if (key == "stop_tolerance") {
      c.stop_tolerance = checked_decimal(key, value);
    } else if (key == "out") {
      c.out = resolve(base_dir, value);
    } else if (key == "oracle") {
      c.oracle = parse_bool(key, value);
    } else if (key == "reorthogonalize") {
      c.reorthogonalize = parse_bool(key, value);
    } else if (key == "threshold") {
      c.marker_threshold = checked_decimal(key, value);
    } else {
      throw ParseError("unknown setting '" + key + "'", 0);
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto kv = KeyValueFile::load(path);
  try {
    return parse_config(kv, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.digits) config.digits = *o.digits;
  if (!o.mu_specs.empty()) config.mu_specs = o.mu_specs;
  if (o.tau) config.tau = checked_decimal("tau", *o.tau);
  if (o.out) config.out = *o.out;
  if (o.max_iters) config.max_iters = *o.max_iters;
  if (o.oracle) config.oracle = true;
  validate(config);
}

KeyValueFile to_key_values(const ExperimentConfig& c) {
  KeyValueFile kv;
  kv.set("problem", c.source == ProblemSource::model ? "model" : "matrix");
  if (c.source == ProblemSource::model) {
    kv.set("m", std::to_string(c.model.m));
    kv.set("lambda_first", c.model.lambda_first);
    kv.set("lambda_last", c.model.lambda_last);
    kv.set("rho", c.model.rho);
    kv.set("delta", c.model.delta);
    kv.set("p", std::to_string(c.model.p));
  } else {
    kv.set("matrix", c.matrix.string());
  }
  kv.set("rhs", to_string(c.rhs_or_default()));
  kv.set("digits", std::to_string(c.digits));
  std::string mus;
  for (const auto& m : c.mu_specs) mus += (mus.empty() ? "" : ",") + m;
  kv.set("mu", mus);
  kv.set("tau", c.tau);
  kv.set("max_iters", std::to_string(c.max_iters));
  if (c.stop_tolerance) kv.set("stop_tolerance", *c.stop_tolerance);
  kv.set("oracle", c.oracle ? "true" : "false");
  kv.set("reorthogonalize", c.reorthogonalize ? "true" : "false");
  kv.set("threshold", c.marker_threshold);
  return kv;
}

}  // namespace radau::cli
