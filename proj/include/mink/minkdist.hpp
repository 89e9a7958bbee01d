#pragma once

#include "mink/expfam.hpp"
#include "mink/parallel.hpp"
#include "mink/signed_log.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mink {

struct Component {
  double weight = 1.0;
  NaturalParameter theta;
};

/// Finite positive mixture sum_i w_i p_{θ_i} over one conic exponential family.
/// Weights need not sum to one.
class MixtureModel {
public:
  /// Validates: at least one component, finite positive weights, every θ in
  /// the cone. Throws ParameterDomainError otherwise.
  MixtureModel(Family family, std::vector<Component> components);

  [[nodiscard]] static MixtureModel single(Family family, NaturalParameter theta, double weight = 1.0);

  [[nodiscard]] const Family &family() const noexcept { return family_; }
  [[nodiscard]] std::span<const Component> components() const noexcept { return components_; }
  [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
  /// F(θ_i) for each component, computed once at construction.
  [[nodiscard]] std::span<const double> log_partitions() const noexcept { return log_partitions_; }
  [[nodiscard]] double total_weight() const noexcept;
  /// True iff the weights sum to 1 within 1e-12.
  [[nodiscard]] bool normalized() const noexcept;

  /// λ·m (all weights multiplied by λ > 0).
  [[nodiscard]] MixtureModel scaled(double lambda) const;
  /// m + m' as one mixture with the components of both, m's first.
  [[nodiscard]] static MixtureModel sum(const MixtureModel &a, const MixtureModel &b);

  /// log m(x) by log-sum-exp over components.
  [[nodiscard]] double log_density(const SupportPoint &x) const;
  /// log m(x) for a precomputed sufficient statistic t(x).
  [[nodiscard]] double log_density_from_stat(const NaturalParameter &stat) const noexcept;

private:
  Family family_;
  std::vector<Component> components_;
  std::vector<double> log_partitions_;
};

enum class Metric { M, D, L, CS, TV };

[[nodiscard]] std::string_view to_string(Metric metric) noexcept;
[[nodiscard]] std::optional<Metric> parse_metric(std::string_view text) noexcept;

/// log ∫ Π p_{θ_i}^{α_i} dμ = F(Σ α_i θ_i) - Σ α_i F(θ_i).
[[nodiscard]] double log_geometric_integral(const Family &fam, std::span<const NaturalParameter> thetas,
                                            std::span<const double> alphas);

/// Σ α_i F(θ_i) - F(Σ α_i θ_i); negative values are possible off the simplex.
[[nodiscard]] double jensen_diversity(const Family &fam, std::span<const NaturalParameter> thetas,
                                      std::span<const double> alphas);

struct NormResult {
  double log_norm = 0.0;
  std::uint64_t terms = 0;
  [[nodiscard]] double value() const noexcept;
};

/// log ‖m‖_α for integer α >= 1 by the multinomial expansion of m^α.
[[nodiscard]] NormResult mixture_log_lp_norm(const MixtureModel &m, unsigned alpha,
                                             const ExecutionConfig &exec = {});
[[nodiscard]] double mixture_lp_norm(const MixtureModel &m, unsigned alpha, const ExecutionConfig &exec = {});

/// One term c · p_φ of the expansion of (m - m')², kept in extended
/// precision because the terms cancel heavily when m and m' are close.
struct ProductComponent {
  WideSignedLogValue coeff;
  WideParameter phi;
};

/// (m - m')² as Σ_l c_l p_{φ_l} over all ordered pairs of the signed
/// concatenation (+w_i for m, -w'_j for m'). With `merge_equal`, terms whose
/// φ are bitwise equal are folded together and exact zeros dropped.
[[nodiscard]] std::vector<ProductComponent> product_expand(const MixtureModel &m, const MixtureModel &mp,
                                                           bool merge_equal = false);

struct ExpansionResult {
  WideSignedSum sum;
  std::uint64_t terms = 0;
};

/// ∫ (Σ_l c_l p_{φ_l})^β dμ for integer β >= 1, by composition enumeration
/// with signed log-domain accumulation. A result of either sign below
/// kWideResidueTolerance of the positive pool is zeroed; a negative result is
/// left for the caller to judge.
[[nodiscard]] ExpansionResult signed_power_integral(const Family &fam, std::span<const ProductComponent> comps,
                                                    unsigned beta, const ExecutionConfig &exec = {});

/// log ⟨m, m'⟩ = log ∫ m m' dμ.
[[nodiscard]] double log_inner_product(const MixtureModel &m, const MixtureModel &mp);

struct DistanceResult {
  double value = 0.0;
  /// Value before clamping tiny negatives to zero.
  double raw = 0.0;
  std::uint64_t terms = 0;
  std::vector<std::string> warnings;
};

/// Closed-form M_α (even α), D_α and L_α (α >= 2), CS (α = 2).
/// TV, odd-α M and out-of-range exponents raise UnsupportedExponentError.
[[nodiscard]] DistanceResult closed_form_distance(Metric metric, unsigned alpha, const MixtureModel &m,
                                                  const MixtureModel &mp, const ExecutionConfig &exec = {});

/// Σ w_i ‖p_i‖_α - ‖Σ w_i p_i‖_α for integer α >= 2.
[[nodiscard]] DistanceResult minkowski_diversity(std::span<const MixtureModel> densities,
                                                 std::span<const double> weights, unsigned alpha,
                                                 const ExecutionConfig &exec = {});

/// Diversity of the components of `m`, weighted by their mixture weights.
[[nodiscard]] DistanceResult minkowski_diversity(const MixtureModel &m, unsigned alpha,
                                                 const ExecutionConfig &exec = {});

} // namespace mink
