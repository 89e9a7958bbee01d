#pragma once

#include "mink/minkdist.hpp"
#include "mink/oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mink {

enum class OutputFormat { Text, Structured };

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitSpecError = 2,
  kExitUnsupportedExponent = 3,
  kExitNumericFailure = 4,
};

/// Exit code for an exception escaping a command.
[[nodiscard]] int exit_code_for(const std::exception &e) noexcept;

struct CommandOptions {
  std::optional<OracleMethod> oracle;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  /// Comparison tolerance for `validate`; unset picks 1e-10 (exact) or 1e-8
  /// (quadrature). Also tightens quadrature when below 1e-10.
  std::optional<double> rel_tol;
  std::uint64_t term_cap = 100'000'000;
  unsigned workers = 1;
  OutputFormat output = OutputFormat::Text;
};

struct ResultRecord {
  std::string kind;
  double alpha = 0.0;
  double value = 0.0;
  /// "closed-form" or an oracle method name.
  std::string method;
  std::optional<double> std_error;
  std::optional<std::uint64_t> term_count;
  double wall_time_ms = 0.0;
  std::vector<std::string> warnings;
};

/// One line of text, or one JSON object with numbers at 17 significant digits.
[[nodiscard]] std::string format_record(const ResultRecord &r, OutputFormat format);

/// Closed form, or the oracle when `opts.oracle` is set. Non-integer α is
/// accepted on the oracle path only.
[[nodiscard]] ResultRecord cmd_dist(Metric metric, double alpha, const MixtureModel &a, const MixtureModel &b,
                                    const CommandOptions &opts);
[[nodiscard]] ResultRecord cmd_norm(const MixtureModel &m, double alpha, const CommandOptions &opts);
[[nodiscard]] ResultRecord cmd_diversity(const MixtureModel &m, double alpha, const CommandOptions &opts);

struct ValidationRow {
  Metric metric = Metric::M;
  unsigned alpha = 2;
  double closed_form = 0.0;
  double oracle = 0.0;
  double std_error = 0.0;
  double abs_diff = 0.0;
  /// |Δ| / stderr, or nullopt for deterministic oracles.
  std::optional<double> sigmas;
  bool pass = false;
};

struct ValidationReport {
  OracleMethod method = OracleMethod::ExactEnum;
  double rel_tol = 0.0;
  std::vector<ValidationRow> rows;
  [[nodiscard]] bool all_pass() const noexcept;
};

/// Closed form against the oracle for each metric and α (M: even α only; CS:
/// α = 2 only). Deterministic oracles pass within rel_tol relative or 1e-10
/// absolute; Monte Carlo within 3 standard errors or 1e-10 absolute.
[[nodiscard]] ValidationReport cmd_validate(const MixtureModel &a, const MixtureModel &b,
                                            const std::vector<unsigned> &alphas, const std::vector<Metric> &metrics,
                                            const CommandOptions &opts);
[[nodiscard]] std::string format_report(const ValidationReport &r, OutputFormat format);

struct BenchRow {
  unsigned k = 1;
  unsigned alpha = 1;
  std::uint64_t terms = 0;
  std::uint64_t expected = 0;
  double wall_time_ms = 0.0;
  [[nodiscard]] bool pass() const noexcept { return terms == expected; }
};

/// Norm term counts and timings on random mixtures of `family` for every
/// (k, α) in the ranges.
[[nodiscard]] std::vector<BenchRow> cmd_bench(const Family &family, unsigned k_min, unsigned k_max,
                                              unsigned alpha_min, unsigned alpha_max, const CommandOptions &opts);
[[nodiscard]] std::string format_bench(const std::vector<BenchRow> &rows, const Family &family, OutputFormat format);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace mink
