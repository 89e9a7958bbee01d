#include "mink/expfam.hpp"

#include "mink/errors.hpp"

#include <Eigen/Cholesky>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

namespace mink {

namespace {

template <typename T> using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T> using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T> bool is_symmetric(const Mat<T> &m) {
  if (m.rows() != m.cols())
    return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (m(i, j) != m(j, i))
        return false;
  return true;
}

// Strict S++ membership: symmetric, finite, and a Cholesky factorization with
// strictly positive pivots.
template <typename T> bool positive_definite(const Mat<T> &m, Eigen::LLT<Mat<T>> &llt) {
  if (!is_symmetric<T>(m) || !m.allFinite())
    return false;
  llt.compute(m);
  if (llt.info() != Eigen::Success)
    return false;
  const auto diag = llt.matrixLLT().diagonal();
  return (diag.array() > T(0)).all() && diag.allFinite();
}

template <typename T> T log_det_from_llt(const Eigen::LLT<Mat<T>> &llt) {
  using std::log;
  T acc = 0;
  for (Eigen::Index i = 0; i < llt.matrixLLT().rows(); ++i)
    acc += log(T(llt.matrixLLT()(i, i)));
  return 2 * acc;
}

Eigen::MatrixXd spd_inverse(const Eigen::LLT<Eigen::MatrixXd> &llt, Eigen::Index n) {
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (inv + inv.transpose());
}

Eigen::LLT<Eigen::MatrixXd> require_pd(const Eigen::MatrixXd &m, const std::string &field) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!positive_definite(m, llt))
    throw ParameterDomainError(field, "matrix is not symmetric positive definite");
  return llt;
}

// log(1 + sum exp(v_i)) without overflow.
template <typename T> T log1p_sum_exp(const Vec<T> &v) {
  using std::exp;
  using std::log;
  T mx = 0;
  for (T x : v)
    mx = std::max(mx, x);
  T s = exp(-mx);
  for (T x : v)
    s += exp(T(x - mx));
  return mx + log(s);
}

template <typename T> T log_multivariate_gamma_impl(int d, T a) {
  using std::log;
  T acc = T(d * (d - 1)) / 4 * log(boost::math::constants::pi<T>());
  for (int j = 1; j <= d; ++j)
    acc += boost::math::lgamma(a + T(1 - j) / 2);
  return acc;
}

template <typename T> T log_partition_impl(const Family &fam, const BasicNaturalParameter<T> &theta) {
  using std::exp;
  using std::log;
  using std::log1p;
  const T ln2 = boost::math::constants::ln_two<T>();
  switch (fam.kind) {
  case FamilyKind::Bernoulli: {
    const T t = theta.vec[0];
    return t > 0 ? T(t + log1p(exp(-t))) : T(log1p(exp(t)));
  }
  case FamilyKind::Multinoulli:
    return log1p_sum_exp<T>(theta.vec);
  case FamilyKind::Laplacian:
    if (!(theta.vec[0] < 0))
      throw ConeViolationError("laplacian natural parameter must be negative");
    return ln2 - log(T(-theta.vec[0]));
  case FamilyKind::Gaussian: {
    Eigen::LLT<Mat<T>> llt;
    if (!positive_definite<T>(theta.mat, llt))
      throw ConeViolationError("gaussian precision matrix is not positive definite");
    const Vec<T> solved = llt.solve(theta.vec);
    return theta.vec.dot(solved) / 2 - log_det_from_llt<T>(llt) / 2 +
           T(fam.dim) / 2 * log(boost::math::constants::two_pi<T>());
  }
  case FamilyKind::Wishart: {
    if (!(theta.scalar > 0))
      throw ConeViolationError("wishart scalar natural parameter must be positive");
    Eigen::LLT<Mat<T>> llt;
    if (!positive_definite<T>(theta.mat, llt))
      throw ConeViolationError("wishart matrix natural parameter is not positive definite");
    const T d = fam.dim;
    const T half_dof = theta.scalar + (d + 1) / 2;
    return half_dof * d * ln2 - half_dof * log_det_from_llt<T>(llt) +
           log_multivariate_gamma_impl<T>(fam.dim, half_dof);
  }
  }
  throw InternalInvariantError("unknown family");
}

} // namespace

std::string_view to_string(FamilyKind kind) noexcept {
  switch (kind) {
  case FamilyKind::Bernoulli:
    return "bernoulli";
  case FamilyKind::Multinoulli:
    return "multinoulli";
  case FamilyKind::Laplacian:
    return "laplacian";
  case FamilyKind::Gaussian:
    return "gaussian";
  case FamilyKind::Wishart:
    return "wishart";
  }
  return "unknown";
}

void Family::validate() const {
  switch (kind) {
  case FamilyKind::Bernoulli:
  case FamilyKind::Laplacian:
    if (dim != 1)
      throw ParameterDomainError("family.dim", std::string(to_string(kind)) + " requires dim = 1");
    break;
  case FamilyKind::Multinoulli:
    if (dim < 2)
      throw ParameterDomainError("family.dim", "multinoulli requires at least 2 categories");
    break;
  case FamilyKind::Gaussian:
  case FamilyKind::Wishart:
    if (dim < 1)
      throw ParameterDomainError("family.dim", "dimension must be positive");
    break;
  }
}

int Family::vector_size() const noexcept {
  switch (kind) {
  case FamilyKind::Bernoulli:
  case FamilyKind::Laplacian:
    return 1;
  case FamilyKind::Multinoulli:
    return dim - 1;
  case FamilyKind::Gaussian:
    return dim;
  case FamilyKind::Wishart:
    return 0;
  }
  return 0;
}

int Family::matrix_side() const noexcept {
  return (kind == FamilyKind::Gaussian || kind == FamilyKind::Wishart) ? dim : 0;
}

void check_shape(const Family &fam, const NaturalParameter &theta) {
  if (theta.vec.size() != fam.vector_size())
    throw ParameterDomainError("theta_v", "expected length " + std::to_string(fam.vector_size()) +
                                              ", got " + std::to_string(theta.vec.size()));
  const int side = fam.matrix_side();
  if (theta.mat.rows() != side || theta.mat.cols() != side)
    throw ParameterDomainError("theta_M", "expected a " + std::to_string(side) + "x" +
                                              std::to_string(side) + " matrix");
}

NaturalParameter to_natural(const Family &fam, const SourceParameter &src) {
  fam.validate();
  NaturalParameter theta;
  switch (fam.kind) {
  case FamilyKind::Bernoulli: {
    const auto *s = std::get_if<BernoulliSource>(&src);
    if (s == nullptr)
      throw ParameterDomainError("params", "expected Bernoulli source parameters");
    if (!(s->lambda > 0.0 && s->lambda < 1.0))
      throw ParameterDomainError("lambda", "must lie in (0, 1)");
    theta.vec = Eigen::VectorXd::Constant(1, std::log(s->lambda) - std::log1p(-s->lambda));
    break;
  }
  case FamilyKind::Multinoulli: {
    const auto *s = std::get_if<MultinoulliSource>(&src);
    if (s == nullptr)
      throw ParameterDomainError("params", "expected Multinoulli source parameters");
    if (s->probs.size() != fam.dim)
      throw ParameterDomainError("lambda", "expected " + std::to_string(fam.dim) + " probabilities");
    if (!((s->probs.array() > 0.0).all() && (s->probs.array() < 1.0).all()))
      throw ParameterDomainError("lambda", "probabilities must lie in (0, 1)");
    if (std::abs(s->probs.sum() - 1.0) > 1e-10)
      throw ParameterDomainError("lambda", "probabilities must sum to 1");
    const double last = std::log(s->probs[fam.dim - 1]);
    theta.vec = s->probs.head(fam.dim - 1).array().log() - last;
    break;
  }
  case FamilyKind::Laplacian: {
    const auto *s = std::get_if<LaplacianSource>(&src);
    if (s == nullptr)
      throw ParameterDomainError("params", "expected Laplacian source parameters");
    if (!(s->sigma > 0.0 && std::isfinite(s->sigma)))
      throw ParameterDomainError("sigma", "must be positive and finite");
    theta.vec = Eigen::VectorXd::Constant(1, -1.0 / s->sigma);
    break;
  }
  case FamilyKind::Gaussian: {
    const auto *s = std::get_if<GaussianSource>(&src);
    if (s == nullptr)
      throw ParameterDomainError("params", "expected Gaussian source parameters");
    if (s->mean.size() != fam.dim || !s->mean.allFinite())
      throw ParameterDomainError("mu", "expected a finite vector of length " + std::to_string(fam.dim));
    if (s->cov.rows() != fam.dim || s->cov.cols() != fam.dim)
      throw ParameterDomainError("sigma", "expected a " + std::to_string(fam.dim) + "x" +
                                              std::to_string(fam.dim) + " matrix");
    const auto llt = require_pd(s->cov, "sigma");
    theta.mat = spd_inverse(llt, fam.dim);
    theta.vec = llt.solve(s->mean);
    break;
  }
  case FamilyKind::Wishart: {
    const auto *s = std::get_if<WishartSource>(&src);
    if (s == nullptr)
      throw ParameterDomainError("params", "expected Wishart source parameters");
    if (s->scale.rows() != fam.dim || s->scale.cols() != fam.dim)
      throw ParameterDomainError("S", "expected a " + std::to_string(fam.dim) + "x" +
                                          std::to_string(fam.dim) + " matrix");
    if (!(s->dof > fam.dim - 1) || !std::isfinite(s->dof))
      throw ParameterDomainError("n", "degrees of freedom must exceed d - 1");
    theta.scalar = (s->dof - fam.dim - 1) / 2.0;
    if (!(theta.scalar > 0.0))
      throw ParameterDomainError("n", "degrees of freedom must exceed d + 1 for the conic parameter space");
    const auto llt = require_pd(s->scale, "S");
    theta.mat = spd_inverse(llt, fam.dim);
    break;
  }
  }
  return theta;
}

SourceParameter from_natural(const Family &fam, const NaturalParameter &theta) {
  fam.validate();
  check_shape(fam, theta);
  if (!in_cone(fam, theta))
    throw ParameterDomainError("theta", "natural parameter lies outside the cone");
  switch (fam.kind) {
  case FamilyKind::Bernoulli: {
    const double t = theta.vec[0];
    // logistic, written to stay accurate for large |t|
    const double lambda = t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
    return BernoulliSource{lambda};
  }
  case FamilyKind::Multinoulli: {
    const double lse = log1p_sum_exp(theta.vec);
    Eigen::VectorXd probs(fam.dim);
    for (int i = 0; i + 1 < fam.dim; ++i)
      probs[i] = std::exp(theta.vec[i] - lse);
    probs[fam.dim - 1] = std::exp(-lse);
    return MultinoulliSource{probs};
  }
  case FamilyKind::Laplacian:
    return LaplacianSource{-1.0 / theta.vec[0]};
  case FamilyKind::Gaussian: {
    Eigen::LLT<Eigen::MatrixXd> llt(theta.mat);
    return GaussianSource{llt.solve(theta.vec), spd_inverse(llt, fam.dim)};
  }
  case FamilyKind::Wishart: {
    Eigen::LLT<Eigen::MatrixXd> llt(theta.mat);
    return WishartSource{2.0 * theta.scalar + fam.dim + 1, spd_inverse(llt, fam.dim)};
  }
  }
  throw InternalInvariantError("unknown family");
}

bool in_cone(const Family &fam, const NaturalParameter &theta) noexcept {
  if (theta.vec.size() != fam.vector_size())
    return false;
  const int side = fam.matrix_side();
  if (theta.mat.rows() != side || theta.mat.cols() != side)
    return false;
  if (!theta.vec.allFinite())
    return false;
  switch (fam.kind) {
  case FamilyKind::Bernoulli:
  case FamilyKind::Multinoulli:
    return true;
  case FamilyKind::Laplacian:
    return theta.vec[0] < 0.0;
  case FamilyKind::Gaussian: {
    Eigen::LLT<Eigen::MatrixXd> llt;
    return positive_definite(theta.mat, llt);
  }
  case FamilyKind::Wishart: {
    if (!(theta.scalar > 0.0) || !std::isfinite(theta.scalar))
      return false;
    Eigen::LLT<Eigen::MatrixXd> llt;
    return positive_definite(theta.mat, llt);
  }
  }
  return false;
}

double log_multivariate_gamma(int d, double a) { return log_multivariate_gamma_impl<double>(d, a); }

template <typename T> T log_partition(const Family &fam, const BasicNaturalParameter<T> &theta) {
  return log_partition_impl<T>(fam, theta);
}

template double log_partition<double>(const Family &, const NaturalParameter &);
template WideReal log_partition<WideReal>(const Family &, const WideParameter &);
template QuadReal log_partition<QuadReal>(const Family &, const QuadParameter &);

NaturalParameter linear_combination(const Family &fam, std::span<const NaturalParameter> thetas,
                                    std::span<const double> weights) {
  if (thetas.empty() || thetas.size() != weights.size())
    throw InternalInvariantError("linear_combination needs equal-length, non-empty inputs");
  NaturalParameter out;
  out.vec = Eigen::VectorXd::Zero(fam.vector_size());
  out.mat = Eigen::MatrixXd::Zero(fam.matrix_side(), fam.matrix_side());
  bool any_positive = false;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InternalInvariantError("linear_combination weights must be finite and non-negative");
    if (w == 0.0)
      continue;
    any_positive = true;
    out.scalar += w * thetas[i].scalar;
    out.vec += w * thetas[i].vec;
    out.mat += w * thetas[i].mat;
  }
  if (!any_positive)
    throw InternalInvariantError("linear_combination weights are all zero");
  if (!in_cone(fam, out))
    throw InternalInvariantError("non-negative combination left the cone; family misconfigured");
  return out;
}

NaturalParameter sufficient_statistic(const Family &fam, const SupportPoint &x) {
  NaturalParameter t;
  t.vec = Eigen::VectorXd::Zero(fam.vector_size());
  t.mat = Eigen::MatrixXd::Zero(fam.matrix_side(), fam.matrix_side());
  switch (fam.kind) {
  case FamilyKind::Bernoulli: {
    const auto *v = std::get_if<double>(&x);
    if (v == nullptr || !(*v == 0.0 || *v == 1.0))
      throw SupportError("bernoulli support is {0, 1}");
    t.vec[0] = *v;
    break;
  }
  case FamilyKind::Multinoulli: {
    const auto *v = std::get_if<Eigen::VectorXd>(&x);
    if (v == nullptr || v->size() != fam.dim)
      throw SupportError("multinoulli support is one-hot vectors of length d");
    int ones = 0;
    for (double e : *v) {
      if (e == 1.0)
        ++ones;
      else if (e != 0.0)
        throw SupportError("multinoulli support is one-hot vectors of length d");
    }
    if (ones != 1)
      throw SupportError("multinoulli support is one-hot vectors of length d");
    t.vec = v->head(fam.dim - 1);
    break;
  }
  case FamilyKind::Laplacian: {
    const auto *v = std::get_if<double>(&x);
    if (v == nullptr || !std::isfinite(*v))
      throw SupportError("laplacian support is the real line");
    t.vec[0] = std::abs(*v);
    break;
  }
  case FamilyKind::Gaussian: {
    Eigen::VectorXd point;
    if (const auto *s = std::get_if<double>(&x); s != nullptr && fam.dim == 1)
      point = Eigen::VectorXd::Constant(1, *s);
    else if (const auto *v = std::get_if<Eigen::VectorXd>(&x); v != nullptr && v->size() == fam.dim)
      point = *v;
    else
      throw SupportError("gaussian support is R^d");
    if (!point.allFinite())
      throw SupportError("gaussian support is R^d");
    t.vec = point;
    t.mat = -0.5 * point * point.transpose();
    break;
  }
  case FamilyKind::Wishart: {
    const auto *m = std::get_if<Eigen::MatrixXd>(&x);
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (m == nullptr || m->rows() != fam.dim || !positive_definite(*m, llt))
      throw SupportError("wishart support is the symmetric positive definite cone");
    t.scalar = log_det_from_llt(llt);
    t.mat = -0.5 * *m;
    break;
  }
  }
  return t;
}

double pair(const NaturalParameter &stat, const NaturalParameter &theta) noexcept {
  double acc = stat.scalar * theta.scalar;
  if (stat.vec.size() > 0)
    acc += stat.vec.dot(theta.vec);
  if (stat.mat.size() > 0)
    acc += stat.mat.cwiseProduct(theta.mat).sum();
  return acc;
}

double log_density(const Family &fam, const NaturalParameter &theta, const SupportPoint &x) {
  return pair(sufficient_statistic(fam, x), theta) - log_partition(fam, theta);
}

} // namespace mink
