#pragma once

#include "mink/precision.hpp"

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <variant>

namespace mink {

enum class FamilyKind { Bernoulli, Multinoulli, Laplacian, Gaussian, Wishart };

[[nodiscard]] std::string_view to_string(FamilyKind kind) noexcept;

/// Which conic exponential family, and its dimension.
///
/// Bernoulli and Laplacian are one-dimensional. For Multinoulli `dim` is the
/// number of categories (>= 2), for Gaussian the ambient dimension and for
/// Wishart the matrix side.
struct Family {
  FamilyKind kind = FamilyKind::Gaussian;
  int dim = 1;

  static Family bernoulli() { return {FamilyKind::Bernoulli, 1}; }
  static Family multinoulli(int categories) { return {FamilyKind::Multinoulli, categories}; }
  static Family laplacian() { return {FamilyKind::Laplacian, 1}; }
  static Family gaussian(int d) { return {FamilyKind::Gaussian, d}; }
  static Family wishart(int d) { return {FamilyKind::Wishart, d}; }

  /// Throws ParameterDomainError when `dim` is inconsistent with `kind`.
  void validate() const;
  [[nodiscard]] bool is_discrete() const noexcept {
    return kind == FamilyKind::Bernoulli || kind == FamilyKind::Multinoulli;
  }
  /// Length of the vector part of the natural parameter (0 when unused).
  [[nodiscard]] int vector_size() const noexcept;
  /// Side of the matrix part (0 when unused).
  [[nodiscard]] int matrix_side() const noexcept;
  [[nodiscard]] bool has_scalar() const noexcept { return kind == FamilyKind::Wishart; }

  friend bool operator==(const Family &, const Family &) = default;
};

/// Natural parameter with scalar, vector and symmetric-matrix parts. Parts a
/// family does not use are left empty (scalar stays 0).
template <typename T> struct BasicNaturalParameter {
  using Scalar = T;
  T scalar = 0;
  Eigen::Matrix<T, Eigen::Dynamic, 1> vec;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> mat;
};

using NaturalParameter = BasicNaturalParameter<double>;
/// Wider copies used inside the closed-form expansions, where sums of many
/// signed terms cancel.
using WideParameter = BasicNaturalParameter<WideReal>;
using QuadParameter = BasicNaturalParameter<QuadReal>;

template <typename T> [[nodiscard]] BasicNaturalParameter<T> cast_parameter(const NaturalParameter &theta) {
  return {T(theta.scalar), theta.vec.template cast<T>(), theta.mat.template cast<T>()};
}
[[nodiscard]] inline WideParameter widen(const NaturalParameter &theta) { return cast_parameter<WideReal>(theta); }


struct BernoulliSource {
  double lambda;
};
struct MultinoulliSource {
  Eigen::VectorXd probs;
};
struct LaplacianSource {
  double sigma;
};
struct GaussianSource {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};
struct WishartSource {
  double dof;
  Eigen::MatrixXd scale;
};

using SourceParameter =
    std::variant<BernoulliSource, MultinoulliSource, LaplacianSource, GaussianSource, WishartSource>;

/// A support point: a scalar (Bernoulli, Laplacian), a vector (Multinoulli
/// one-hot, Gaussian) or a symmetric matrix (Wishart).
using SupportPoint = std::variant<double, Eigen::VectorXd, Eigen::MatrixXd>;

/// Throws ParameterDomainError if the parts of `theta` do not have the sizes
/// `fam` expects.
void check_shape(const Family &fam, const NaturalParameter &theta);

[[nodiscard]] NaturalParameter to_natural(const Family &fam, const SourceParameter &src);
[[nodiscard]] SourceParameter from_natural(const Family &fam, const NaturalParameter &theta);

/// Log-partition function F. Throws ConeViolationError outside the cone.
/// Instantiated for double, WideReal and QuadReal.
template <typename T> [[nodiscard]] T log_partition(const Family &fam, const BasicNaturalParameter<T> &theta);

/// True iff `theta` lies in the conic natural parameter space. Total.
[[nodiscard]] bool in_cone(const Family &fam, const NaturalParameter &theta) noexcept;

/// Componentwise sum of weights[i] * thetas[i]. The result always lies in the
/// cone for non-negative weights; a failure raises InternalInvariantError.
[[nodiscard]] NaturalParameter linear_combination(const Family &fam,
                                                  std::span<const NaturalParameter> thetas,
                                                  std::span<const double> weights);

/// Sufficient statistic t(x), stored in the same layout as a natural
/// parameter so that t(x)ᵀθ is a plain inner product of matching parts.
/// The Gaussian and Wishart matrix parts carry the -1/2 factor.
[[nodiscard]] NaturalParameter sufficient_statistic(const Family &fam, const SupportPoint &x);

/// t(x)ᵀθ for a precomputed statistic.
[[nodiscard]] double pair(const NaturalParameter &stat, const NaturalParameter &theta) noexcept;

/// log p_θ(x) = t(x)ᵀθ - F(θ). Throws SupportError outside the support.
[[nodiscard]] double log_density(const Family &fam, const NaturalParameter &theta,
                                 const SupportPoint &x);

/// log Γ_d(a), the multivariate Gamma function.
[[nodiscard]] double log_multivariate_gamma(int d, double a);

} // namespace mink
