#include "mink/commands.hpp"

#include "mink/combinatorics.hpp"
#include "mink/errors.hpp"
#include "mink/random_models.hpp"
#include "mink/spec_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

namespace mink {

namespace {

constexpr double kAbsoluteFloor = 1e-10;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string &s) { return nlohmann::json(s).dump(); }

ExecutionConfig exec_config(const CommandOptions &opts) {
  ExecutionConfig exec;
  exec.term_cap = opts.term_cap;
  exec.workers = opts.workers;
  return exec;
}

OracleConfig oracle_config(const Family &fam, const CommandOptions &opts) {
  OracleConfig cfg;
  cfg.method = opts.oracle.value_or(default_oracle_method(fam));
  cfg.samples = opts.samples;
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  if (opts.rel_tol)
    cfg.rel_tol = std::min(cfg.rel_tol, *opts.rel_tol);
  return cfg;
}

unsigned integer_alpha(double alpha, const char *what) {
  if (!(alpha >= 1.0) || alpha != std::floor(alpha) || alpha > 1e6)
    throw UnsupportedExponentError(std::string(what) + " closed form requires an integer alpha; use --oracle");
  return static_cast<unsigned>(alpha);
}

ResultRecord from_estimate(std::string kind, double alpha, const OracleEstimate &e, OracleMethod method) {
  ResultRecord r;
  r.kind = std::move(kind);
  r.alpha = alpha;
  r.value = e.value;
  r.method = std::string(to_string(method));
  if (method == OracleMethod::MonteCarlo)
    r.std_error = e.std_error;
  return r;
}

bool within(const ValidationRow &row, OracleMethod method, double rel_tol) {
  if (row.abs_diff <= kAbsoluteFloor)
    return true;
  if (method == OracleMethod::MonteCarlo)
    return row.abs_diff <= 3.0 * row.std_error;
  return row.abs_diff <= rel_tol * std::max(std::abs(row.closed_form), std::abs(row.oracle));
}

std::vector<unsigned> parse_range(const std::string &text, const char *what) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    try {
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(static_cast<unsigned>(std::stoul(part, &used)));
        if (used != part.size())
          throw std::invalid_argument(part);
      } else {
        const unsigned lo = static_cast<unsigned>(std::stoul(part.substr(0, dash)));
        const unsigned hi = static_cast<unsigned>(std::stoul(part.substr(dash + 1)));
        if (lo > hi)
          throw std::invalid_argument(part);
        for (unsigned v = lo; v <= hi; ++v)
          out.push_back(v);
      }
    } catch (const std::logic_error &) {
      throw SpecError(what, "expected integers or ranges like 2-4,6, got '" + text + "'");
    }
  }
  if (out.empty())
    throw SpecError(what, "empty range");
  return out;
}

Family family_from_name(const std::string &name, int dim) {
  if (name == "bernoulli")
    return Family::bernoulli();
  if (name == "laplacian")
    return Family::laplacian();
  Family fam{};
  if (name == "multinoulli")
    fam = Family::multinoulli(dim);
  else if (name == "gaussian")
    fam = Family::gaussian(dim);
  else if (name == "wishart")
    fam = Family::wishart(dim);
  else
    throw SpecError("--family", "unknown family '" + name + "'");
  fam.validate();
  return fam;
}

} // namespace

int exit_code_for(const std::exception &e) noexcept {
  if (dynamic_cast<const UnsupportedExponentError *>(&e))
    return kExitUnsupportedExponent;
  if (dynamic_cast<const BudgetError *>(&e) || dynamic_cast<const CancellationError *>(&e) ||
      dynamic_cast<const OracleError *>(&e) || dynamic_cast<const InternalInvariantError *>(&e))
    return kExitNumericFailure;
  return kExitSpecError;
}

std::string format_record(const ResultRecord &r, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::Structured) {
    os << "{\"kind\": " << quoted(r.kind) << ", \"alpha\": " << num(r.alpha) << ", \"value\": " << num(r.value)
       << ", \"method\": " << quoted(r.method);
    if (r.std_error)
      os << ", \"stderr\": " << num(*r.std_error);
    if (r.term_count)
      os << ", \"term_count\": " << *r.term_count;
    os << ", \"wall_time_ms\": " << num(r.wall_time_ms) << ", \"warnings\": [";
    for (std::size_t i = 0; i < r.warnings.size(); ++i)
      os << (i ? ", " : "") << quoted(r.warnings[i]);
    os << "]}";
    return os.str();
  }
  os << r.kind << " alpha=" << num(r.alpha) << " value=" << num(r.value) << " method=" << r.method;
  if (r.std_error)
    os << " stderr=" << num(*r.std_error);
  if (r.term_count)
    os << " terms=" << *r.term_count;
  os << " time_ms=" << num(r.wall_time_ms);
  for (const auto &w : r.warnings)
    os << "\nwarning: " << w;
  return os.str();
}

ResultRecord cmd_dist(Metric metric, double alpha, const MixtureModel &a, const MixtureModel &b,
                      const CommandOptions &opts) {
  const auto start = Clock::now();
  ResultRecord r;
  if (opts.oracle) {
    const OracleConfig cfg = oracle_config(a.family(), opts);
    r = from_estimate(std::string(to_string(metric)), alpha, oracle_distance(metric, alpha, a, b, cfg), cfg.method);
  } else {
    const std::string name(to_string(metric));
    const auto d = closed_form_distance(metric, integer_alpha(alpha, name.c_str()), a, b, exec_config(opts));
    r.kind = name;
    r.alpha = alpha;
    r.value = d.value;
    r.method = "closed-form";
    r.term_count = d.terms;
    r.warnings = d.warnings;
  }
  r.wall_time_ms = elapsed_ms(start);
  return r;
}

ResultRecord cmd_norm(const MixtureModel &m, double alpha, const CommandOptions &opts) {
  const auto start = Clock::now();
  ResultRecord r;
  if (opts.oracle) {
    const OracleConfig cfg = oracle_config(m.family(), opts);
    r = from_estimate("norm", alpha, oracle_norm(m, alpha, cfg), cfg.method);
  } else {
    const auto n = mixture_log_lp_norm(m, integer_alpha(alpha, "norm"), exec_config(opts));
    r.kind = "norm";
    r.alpha = alpha;
    r.value = n.value();
    r.method = "closed-form";
    r.term_count = n.terms;
  }
  r.wall_time_ms = elapsed_ms(start);
  return r;
}

ResultRecord cmd_diversity(const MixtureModel &m, double alpha, const CommandOptions &opts) {
  const auto start = Clock::now();
  const auto d = minkowski_diversity(m, integer_alpha(alpha, "diversity"), exec_config(opts));
  ResultRecord r;
  r.kind = "diversity";
  r.alpha = alpha;
  r.value = d.value;
  r.method = "closed-form";
  r.term_count = d.terms;
  r.warnings = d.warnings;
  r.wall_time_ms = elapsed_ms(start);
  return r;
}

bool ValidationReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow &r) { return r.pass; });
}

ValidationReport cmd_validate(const MixtureModel &a, const MixtureModel &b, const std::vector<unsigned> &alphas,
                              const std::vector<Metric> &metrics, const CommandOptions &opts) {
  const OracleConfig cfg = oracle_config(a.family(), opts);
  ValidationReport report;
  report.method = cfg.method;
  report.rel_tol = opts.rel_tol.value_or(cfg.method == OracleMethod::Quadrature ? 1e-8 : 1e-10);
  std::optional<MonteCarloBank> bank;
  if (cfg.method == OracleMethod::MonteCarlo)
    bank.emplace(a, b, cfg);
  for (Metric metric : metrics) {
    if (metric == Metric::TV)
      throw UnsupportedExponentError("TV has no closed form to validate");
    for (unsigned alpha : alphas) {
      if ((metric == Metric::M && alpha % 2 != 0) || (metric == Metric::CS && alpha != 2) || alpha < 2)
        continue;
      ValidationRow row;
      row.metric = metric;
      row.alpha = alpha;
      row.closed_form = closed_form_distance(metric, alpha, a, b, exec_config(opts)).value;
      const OracleEstimate est = bank ? bank->distance(metric, alpha) : oracle_distance(metric, alpha, a, b, cfg);
      row.oracle = est.value;
      row.std_error = est.std_error;
      row.abs_diff = std::abs(row.closed_form - row.oracle);
      if (bank && est.std_error > 0.0)
        row.sigmas = row.abs_diff / est.std_error;
      row.pass = within(row, cfg.method, report.rel_tol);
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string format_report(const ValidationReport &r, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::Structured) {
    os << "{\"oracle\": " << quoted(std::string(to_string(r.method))) << ", \"rel_tol\": " << num(r.rel_tol)
       << ", \"pass\": " << (r.all_pass() ? "true" : "false") << ", \"rows\": [";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto &row = r.rows[i];
      os << (i ? ", " : "") << "{\"metric\": " << quoted(std::string(to_string(row.metric)))
         << ", \"alpha\": " << row.alpha << ", \"closed_form\": " << num(row.closed_form)
         << ", \"oracle\": " << num(row.oracle) << ", \"stderr\": " << num(row.std_error)
         << ", \"abs_diff\": " << num(row.abs_diff);
      if (row.sigmas)
        os << ", \"sigmas\": " << num(*row.sigmas);
      os << ", \"pass\": " << (row.pass ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %5s %24s %24s %12s %10s  %s\n", "metric", "alpha", "closed-form",
                std::string(to_string(r.method)).c_str(), "|diff|", "sigmas", "result");
  os << line;
  for (const auto &row : r.rows) {
    const std::string sig = row.sigmas ? num(*row.sigmas).substr(0, 8) : "-";
    std::snprintf(line, sizeof line, "%-6s %5u %24.17g %24.17g %12.3e %10s  %s\n",
                  std::string(to_string(row.metric)).c_str(), row.alpha, row.closed_form, row.oracle, row.abs_diff,
                  sig.c_str(), row.pass ? "PASS" : "FAIL");
    os << line;
  }
  os << (r.all_pass() ? "all rows PASS" : "some rows FAIL");
  return os.str();
}

std::vector<BenchRow> cmd_bench(const Family &family, unsigned k_min, unsigned k_max, unsigned alpha_min,
                                unsigned alpha_max, const CommandOptions &opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<BenchRow> rows;
  for (unsigned k = k_min; k <= k_max; ++k) {
    const auto m = random_mixture(family, static_cast<int>(k), rng);
    for (unsigned alpha = alpha_min; alpha <= alpha_max; ++alpha) {
      BenchRow row;
      row.k = k;
      row.alpha = alpha;
      const BigInt expected = composition_count(alpha, k);
      if (expected > opts.term_cap)
        throw BudgetError(expected.str(), opts.term_cap);
      row.expected = static_cast<std::uint64_t>(expected);
      const auto start = Clock::now();
      row.terms = mixture_log_lp_norm(m, alpha, exec_config(opts)).terms;
      row.wall_time_ms = elapsed_ms(start);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_bench(const std::vector<BenchRow> &rows, const Family &family, OutputFormat format) {
  std::ostringstream os;
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const BenchRow &r) { return r.pass(); });
  if (format == OutputFormat::Structured) {
    os << "{\"family\": " << quoted(std::string(to_string(family.kind))) << ", \"dim\": " << family.dim
       << ", \"pass\": " << (ok ? "true" : "false") << ", \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto &r = rows[i];
      os << (i ? ", " : "") << "{\"k\": " << r.k << ", \"alpha\": " << r.alpha << ", \"terms\": " << r.terms
         << ", \"expected\": " << r.expected << ", \"wall_time_ms\": " << num(r.wall_time_ms)
         << ", \"pass\": " << (r.pass() ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
  }
  char line[160];
  std::snprintf(line, sizeof line, "%4s %6s %14s %14s %12s  %s\n", "k", "alpha", "terms", "C(k+a-1,a)", "time_ms",
                "result");
  os << line;
  for (const auto &r : rows) {
    std::snprintf(line, sizeof line, "%4u %6u %14llu %14llu %12.3f  %s\n", r.k, r.alpha,
                  static_cast<unsigned long long>(r.terms), static_cast<unsigned long long>(r.expected),
                  r.wall_time_ms, r.pass() ? "PASS" : "FAIL");
    os << line;
  }
  os << (ok ? "all term counts match" : "term count mismatch");
  return os.str();
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Closed-form Minkowski distances between exponential-family mixtures"};
  app.require_subcommand(1);

  std::string metric_name;
  std::optional<double> alpha;
  std::string oracle_name;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  std::optional<double> rel_tol;
  std::uint64_t term_cap = 100'000'000;
  unsigned workers = 1;
  std::string output = "text";
  std::string spec_a;
  std::string spec_b;
  std::string alphas_text = "2-4";
  std::string metrics_text = "M,D,L,CS";
  std::string k_text = "1-5";
  std::string family_name = "gaussian";
  int dim = 1;

  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--term-cap", term_cap, "Maximum number of expansion terms")->capture_default_str();
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    cmd->add_option("--output", output, "Output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
  };
  auto oracle_flags = [&](CLI::App *cmd) {
    cmd->add_option("--oracle", oracle_name, "Use an oracle instead of the closed form")
        ->check(CLI::IsMember({"exact", "quad", "mc"}));
    cmd->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
    cmd->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
    cmd->add_option("--rel-tol", rel_tol, "Relative tolerance");
  };

  auto *dist = app.add_subcommand("dist", "Distance between two mixtures");
  dist->add_option("--metric", metric_name, "M, D, L, CS or TV")
      ->required()
      ->check(CLI::IsMember({"M", "D", "L", "CS", "TV"}));
  dist->add_option("--alpha", alpha, "Exponent (CS: 2, TV: 1 by default)");
  dist->add_option("a", spec_a, "First mixture spec")->required();
  dist->add_option("b", spec_b, "Second mixture spec")->required();
  oracle_flags(dist);
  common(dist);

  auto *norm = app.add_subcommand("norm", "L_alpha norm of a mixture");
  norm->add_option("--alpha", alpha, "Exponent")->required();
  norm->add_option("spec", spec_a, "Mixture spec")->required();
  oracle_flags(norm);
  common(norm);

  auto *diversity = app.add_subcommand("diversity", "Minkowski diversity index of the mixture components");
  diversity->add_option("--alpha", alpha, "Exponent")->required();
  diversity->add_option("spec", spec_a, "Mixture spec")->required();
  common(diversity);

  auto *validate = app.add_subcommand("validate", "Closed form against the oracle");
  validate->add_option("a", spec_a, "First mixture spec")->required();
  validate->add_option("b", spec_b, "Second mixture spec")->required();
  validate->add_option("--alpha", alphas_text, "Exponents, e.g. 2-4 or 2,4")->capture_default_str();
  validate->add_option("--metric", metrics_text, "Comma-separated metrics")->capture_default_str();
  oracle_flags(validate);
  common(validate);

  auto *bench = app.add_subcommand("bench", "Term counts and timings of mixture norms");
  bench->add_option("--k", k_text, "Component counts, e.g. 1-5")->capture_default_str();
  bench->add_option("--alpha", alphas_text, "Exponents, e.g. 2-8")->capture_default_str();
  bench->add_option("--family", family_name, "Family of the random mixtures")
      ->check(CLI::IsMember({"bernoulli", "multinoulli", "laplacian", "gaussian", "wishart"}))
      ->capture_default_str();
  bench->add_option("--dim", dim, "Family dimension")->capture_default_str();
  bench->add_option("--seed", seed, "Seed of the random mixtures")->capture_default_str();
  common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  CommandOptions opts;
  if (!oracle_name.empty())
    opts.oracle = parse_oracle_method(oracle_name);
  opts.samples = samples;
  opts.seed = seed;
  opts.rel_tol = rel_tol;
  opts.term_cap = term_cap;
  opts.workers = workers;
  opts.output = output == "structured" ? OutputFormat::Structured : OutputFormat::Text;

  try {
    if (dist->parsed()) {
      const Metric metric = *parse_metric(metric_name);
      const double a_value = alpha.value_or(metric == Metric::TV ? 1.0 : 2.0);
      if (!alpha && metric != Metric::TV && metric != Metric::CS)
        throw SpecError("--alpha", "required for metric " + metric_name);
      if (metric == Metric::TV && !opts.oracle)
        throw UnsupportedExponentError("TV has no closed form; pass --oracle");
      const auto ma = load_mixture_spec(spec_a);
      const auto mb = load_mixture_spec(spec_b);
      out << format_record(cmd_dist(metric, a_value, ma, mb, opts), opts.output) << "\n";
    } else if (norm->parsed()) {
      out << format_record(cmd_norm(load_mixture_spec(spec_a), *alpha, opts), opts.output) << "\n";
    } else if (diversity->parsed()) {
      out << format_record(cmd_diversity(load_mixture_spec(spec_a), *alpha, opts), opts.output) << "\n";
    } else if (validate->parsed()) {
      std::vector<Metric> metrics;
      std::stringstream ss(metrics_text);
      std::string part;
      while (std::getline(ss, part, ',')) {
        const auto metric = parse_metric(part);
        if (!metric)
          throw SpecError("--metric", "unknown metric '" + part + "'");
        metrics.push_back(*metric);
      }
      const auto ma = load_mixture_spec(spec_a);
      const auto mb = load_mixture_spec(spec_b);
      const auto report = cmd_validate(ma, mb, parse_range(alphas_text, "--alpha"), metrics, opts);
      out << format_report(report, opts.output) << "\n";
      return report.all_pass() ? kExitOk : kExitCheckFailed;
    } else if (bench->parsed()) {
      const Family fam = family_from_name(family_name, dim);
      const auto ks = parse_range(k_text, "--k");
      const auto as = parse_range(alphas_text, "--alpha");
      const auto [k_lo, k_hi] = std::minmax_element(ks.begin(), ks.end());
      const auto [a_lo, a_hi] = std::minmax_element(as.begin(), as.end());
      if (*k_lo < 1)
        throw SpecError("--k", "component counts start at 1");
      if (*a_lo < 1)
        throw SpecError("--alpha", "exponents start at 1");
      const auto rows = cmd_bench(fam, *k_lo, *k_hi, *a_lo, *a_hi, opts);
      out << format_bench(rows, fam, opts.output) << "\n";
      const bool ok = std::all_of(rows.begin(), rows.end(), [](const BenchRow &r) { return r.pass(); });
      return ok ? kExitOk : kExitCheckFailed;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}

} // namespace mink
