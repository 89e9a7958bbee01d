#pragma once

#include "mink/expfam.hpp"
#include "mink/minkdist.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace mink {

enum class OracleMethod { ExactEnum, Quadrature, MonteCarlo };

[[nodiscard]] std::string_view to_string(OracleMethod method) noexcept;
[[nodiscard]] std::optional<OracleMethod> parse_oracle_method(std::string_view text) noexcept;

/// ExactEnum for discrete families, Quadrature for 1-D continuous ones,
/// MonteCarlo otherwise.
[[nodiscard]] OracleMethod default_oracle_method(const Family &fam) noexcept;

struct OracleConfig {
  OracleMethod method = OracleMethod::ExactEnum;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  unsigned workers = 1;
  /// Monte Carlo draws per RNG sub-stream; fixes the chunking.
  std::uint64_t chunk_size = 1u << 15;

  /// Throws OracleError on non-positive tolerances or fewer than 1000 MC samples.
  void validate() const;
};

struct OracleEstimate {
  double value = 0.0;
  /// Zero for exact enumeration and quadrature.
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
};

using Rng = std::mt19937_64;

/// Seed of the RNG sub-stream for `chunk` (SplitMix64 of seed and index).
[[nodiscard]] std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t chunk) noexcept;

/// Draws from one density of a family, with per-parameter setup done once.
class ComponentSampler {
public:
  /// Throws ParameterDomainError when θ is outside the cone.
  ComponentSampler(const Family &fam, const NaturalParameter &theta);
  [[nodiscard]] SupportPoint draw(Rng &rng) const;

private:
  Family fam_;
  double scalar_ = 0.0;      // λ, σ or n
  Eigen::VectorXd vec_;      // cumulative probabilities or mean
  Eigen::MatrixXd factor_;   // Cholesky factor of Σ or S
};

/// A single draw from p_θ.
[[nodiscard]] SupportPoint sample(const Family &fam, const NaturalParameter &theta, Rng &rng);

/// Draws from a mixture (component by inverse CDF on normalized weights).
class MixtureSampler {
public:
  explicit MixtureSampler(const MixtureModel &m);
  [[nodiscard]] SupportPoint draw(Rng &rng) const;

private:
  std::vector<double> cumulative_;
  std::vector<ComponentSampler> components_;
};

/// Importance-sampling draws from the normalized proposal (m + m') / (W + W')
/// (or m / W when built from one mixture), with log m, log m' and log q stored
/// per sample. Every integral of the pair can then be estimated from one
/// shared sample, jointly, with its covariance.
class MonteCarloBank {
public:
  MonteCarloBank(const MixtureModel &m, const MixtureModel &mp, const OracleConfig &cfg);
  MonteCarloBank(const MixtureModel &m, const OracleConfig &cfg);

  [[nodiscard]] std::uint64_t size() const noexcept { return log_m_.size(); }

  /// ∫ m^α dμ, or ∫ m'^α when `second` is set.
  [[nodiscard]] OracleEstimate power(double alpha, bool second = false) const;
  /// ∫ |m - m'|^α dμ.
  [[nodiscard]] OracleEstimate abs_power(double alpha) const;
  /// ∫ m m' dμ.
  [[nodiscard]] OracleEstimate inner_product() const;
  /// ‖m‖_α (or ‖m'‖_α) with propagated standard error.
  [[nodiscard]] OracleEstimate norm(double alpha, bool second = false) const;
  [[nodiscard]] OracleEstimate distance(Metric metric, double alpha) const;

private:
  std::vector<double> log_m_;
  std::vector<double> log_mp_;
  std::vector<double> log_q_;
  std::uint64_t chunk_size_;
  bool paired_;

  struct Joint {
    std::vector<double> mean;
    Eigen::MatrixXd cov_of_mean;
  };
  template <typename Fn> Joint estimate(std::size_t count, Fn &&per_sample) const;
};

/// ∫ |m - m'|^α dμ for real α >= 1.
[[nodiscard]] OracleEstimate integrate_abs_power(const MixtureModel &m, const MixtureModel &mp, double alpha,
                                                 const OracleConfig &cfg);

/// ∫ m^α dμ for real α >= 1.
[[nodiscard]] OracleEstimate integrate_power(const MixtureModel &m, double alpha, const OracleConfig &cfg);

/// M, D, L, CS or TV assembled from numerically integrated constituents, with
/// first-order error propagation of the standard error.
[[nodiscard]] OracleEstimate oracle_distance(Metric metric, double alpha, const MixtureModel &m,
                                             const MixtureModel &mp, const OracleConfig &cfg);

/// ‖m‖_α from the oracle.
[[nodiscard]] OracleEstimate oracle_norm(const MixtureModel &m, double alpha, const OracleConfig &cfg);

/// ∫ m m' dμ from the oracle.
[[nodiscard]] OracleEstimate oracle_inner_product(const MixtureModel &m, const MixtureModel &mp,
                                                  const OracleConfig &cfg);

} // namespace mink
