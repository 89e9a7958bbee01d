#include "mink/oracle.hpp"

#include "mink/errors.hpp"
#include "mink/quadrature.hpp"
#include "mink/signed_log.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mink {

namespace {


// log |e^a - e^b|
template <typename T> T log_abs_diff(T a, T b) {
  constexpr T neg_inf = -std::numeric_limits<T>::infinity();
  const T hi = std::max(a, b);
  const T lo = std::min(a, b);
  if (hi == neg_inf || lo == hi)
    return neg_inf;
  return hi + std::log(-std::expm1(lo - hi));
}

void check_alpha(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw OracleError("oracle exponents must be finite and >= 1");
}

void check_method(const Family &fam, OracleMethod method) {
  switch (method) {
  case OracleMethod::ExactEnum:
    if (!fam.is_discrete())
      throw OracleError("exact enumeration needs a finite-support family (bernoulli, multinoulli)");
    return;
  case OracleMethod::Quadrature:
    if (!(fam.kind == FamilyKind::Laplacian || (fam.kind == FamilyKind::Gaussian && fam.dim == 1)))
      throw OracleError("quadrature needs a one-dimensional continuous family (laplacian, gaussian d=1)");
    return;
  case OracleMethod::MonteCarlo:
    return;
  }
}

// Constituent integrals of one quantity, in the order `assemble` expects.
enum class Integrand { PowerA, PowerB, PowerSum, AbsDiff, Product };

std::vector<Integrand> constituents(Metric metric) {
  switch (metric) {
  case Metric::TV:
  case Metric::M:
    return {Integrand::AbsDiff};
  case Metric::D:
  case Metric::L:
    return {Integrand::PowerA, Integrand::PowerB, Integrand::PowerSum};
  case Metric::CS:
    return {Integrand::PowerA, Integrand::PowerB, Integrand::Product};
  }
  return {};
}

double effective_alpha(Metric metric, double alpha) {
  if (metric == Metric::TV)
    return 1.0;
  if (metric == Metric::CS)
    return 2.0;
  return alpha;
}

// Integrand value in log domain from log m(x), log m'(x).
template <typename T> T log_integrand(Integrand kind, T alpha, T la, T lb) {
  constexpr T neg_inf = -std::numeric_limits<T>::infinity();
  switch (kind) {
  case Integrand::PowerA:
    return alpha * la;
  case Integrand::PowerB:
    return alpha * lb;
  case Integrand::PowerSum: {
    const T hi = std::max(la, lb);
    if (hi == neg_inf)
      return neg_inf;
    return alpha * (hi + std::log1p(std::exp(std::min(la, lb) - hi)));
  }
  case Integrand::AbsDiff: {
    const T l = log_abs_diff(la, lb);
    return l == neg_inf ? neg_inf : alpha * l;
  }
  case Integrand::Product:
    return la + lb;
  }
  return neg_inf;
}

template <typename T> T exp_or_zero(T l) { return l == -std::numeric_limits<T>::infinity() ? T(0) : std::exp(l); }

// Value and gradient of a quantity as a function of its constituent integrals.
struct Assembled {
  double value;
  std::vector<double> gradient;
};

template <typename T> T root(T v, T alpha) { return v > 0 ? std::pow(v, 1 / alpha) : T(0); }
double root_slope(double v, double alpha) { return v > 0 ? std::pow(v, 1.0 / alpha - 1.0) / alpha : 0.0; }

// The quantity itself; the deterministic oracles evaluate it in extended
// precision because D and L subtract nearly equal norms.
template <typename T> T assemble_value(Metric metric, T alpha, const std::vector<T> &I) {
  switch (metric) {
  case Metric::TV:
    return I[0] / 2;
  case Metric::M:
    return root(I[0], alpha);
  case Metric::D:
    return root(I[0], alpha) + root(I[1], alpha) - root(I[2], alpha);
  case Metric::L:
    return std::log(root(I[0], alpha) + root(I[1], alpha)) - std::log(I[2]) / alpha;
  case Metric::CS:
    return -std::log(I[2]) + std::log(I[0]) / 2 + std::log(I[1]) / 2;
  }
  throw InternalInvariantError("unknown metric");
}

Assembled assemble(Metric metric, double alpha, const std::vector<double> &I) {
  const double value = assemble_value(metric, alpha, I);
  switch (metric) {
  case Metric::TV:
    return {value, {0.5}};
  case Metric::M:
    return {value, {root_slope(I[0], alpha)}};
  case Metric::D:
    return {value, {root_slope(I[0], alpha), root_slope(I[1], alpha), -root_slope(I[2], alpha)}};
  case Metric::L: {
    const double s = root(I[0], alpha) + root(I[1], alpha);
    return {value, {root_slope(I[0], alpha) / s, root_slope(I[1], alpha) / s, -1.0 / (alpha * I[2])}};
  }
  case Metric::CS:
    return {value, {0.5 / I[0], 0.5 / I[1], -1.0 / I[2]}};
  }
  throw InternalInvariantError("unknown metric");
}

OracleEstimate propagate(const Assembled &a, const Eigen::MatrixXd &cov, std::uint64_t samples) {
  OracleEstimate out;
  out.value = a.value;
  out.samples_used = samples;
  if (cov.size() > 0) {
    const Eigen::Map<const Eigen::VectorXd> g(a.gradient.data(), static_cast<Eigen::Index>(a.gradient.size()));
    out.std_error = std::sqrt(std::max(0.0, g.dot(cov * g)));
  }
  return out;
}

// --- exact enumeration and quadrature --------------------------------------

std::vector<SupportPoint> finite_support(const Family &fam) {
  std::vector<SupportPoint> pts;
  if (fam.kind == FamilyKind::Bernoulli) {
    pts.emplace_back(0.0);
    pts.emplace_back(1.0);
  } else {
    for (int i = 0; i < fam.dim; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(fam.dim);
      e[i] = 1.0;
      pts.emplace_back(std::move(e));
    }
  }
  return pts;
}

using Wide = long double;

// log m(x) in extended precision for one-dimensional continuous families.
class ScalarLogDensity {
public:
  explicit ScalarLogDensity(const MixtureModel &m) : laplacian_(m.family().kind == FamilyKind::Laplacian) {
    for (const auto &c : m.components()) {
      offset_.push_back(std::log(static_cast<Wide>(c.weight)) - log_partition(m.family(), widen(c.theta)));
      linear_.push_back(c.theta.vec[0]);
      quadratic_.push_back(laplacian_ ? 0.0L : static_cast<Wide>(c.theta.mat(0, 0)));
    }
  }
  Wide operator()(Wide x) const {
    constexpr Wide neg_inf = -std::numeric_limits<Wide>::infinity();
    Wide mx = neg_inf;
    Wide buf[64];
    const std::size_t n = offset_.size();
    std::vector<Wide> heap;
    Wide *l = buf;
    if (n > 64) {
      heap.resize(n);
      l = heap.data();
    }
    const Wide t = laplacian_ ? std::abs(x) : x;
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = offset_[i] + linear_[i] * t - quadratic_[i] * x * x / 2;
      mx = std::max(mx, l[i]);
    }
    if (mx == neg_inf)
      return neg_inf;
    Wide s = 0;
    for (std::size_t i = 0; i < n; ++i)
      s += std::exp(l[i] - mx);
    return mx + std::log(s);
  }

private:
  bool laplacian_;
  std::vector<Wide> offset_, linear_, quadratic_;
};

// log m(x) in extended precision at a point of a finite support.
Wide discrete_log_density(const MixtureModel &m, const SupportPoint &x) {
  const NaturalParameter stat = sufficient_statistic(m.family(), x);
  std::vector<Wide> logs;
  for (const auto &c : m.components())
    logs.push_back(std::log(static_cast<Wide>(c.weight)) + static_cast<Wide>(pair(stat, c.theta)) -
                   log_partition(m.family(), widen(c.theta)));
  return log_sum_exp<Wide>(logs);
}

struct LineMapping {
  double center = 0.0;
  double scale = 1.0;
  std::vector<double> breakpoints;
};

LineMapping line_mapping(const MixtureModel &m, const MixtureModel &mp) {
  LineMapping out;
  std::vector<double> means;
  double widest = 0.0;
  for (const auto *mix : {&m, &mp}) {
    for (const auto &c : mix->components()) {
      if (mix->family().kind == FamilyKind::Laplacian) {
        widest = std::max(widest, -1.0 / c.theta.vec[0]);
      } else {
        const double prec = c.theta.mat(0, 0);
        means.push_back(c.theta.vec[0] / prec);
        widest = std::max(widest, 1.0 / std::sqrt(prec));
      }
    }
  }
  if (m.family().kind == FamilyKind::Laplacian) {
    // Tails decay like exp(-|x|/σ); a scale of 4σ_max keeps the mapped
    // integrand vanishing at u = ±1 for every exponent >= 1.
    out.center = 0.0;
    out.scale = 4.0 * widest;
    out.breakpoints = {0.0};
    return out;
  }
  double lo = means.front();
  double hi = means.front();
  for (double mu : means) {
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
  }
  out.center = 0.5 * (lo + hi);
  out.scale = std::max(2.0 * widest, 0.5 * (hi - lo));
  out.breakpoints = means;
  return out;
}

Wide deterministic_integral(Integrand kind, Wide alpha, const MixtureModel &m, const MixtureModel &mp,
                            const OracleConfig &cfg) {
  if (cfg.method == OracleMethod::ExactEnum) {
    Wide acc = 0;
    for (const auto &x : finite_support(m.family()))
      acc += exp_or_zero(log_integrand(kind, alpha, discrete_log_density(m, x), discrete_log_density(mp, x)));
    return acc;
  }
  const ScalarLogDensity da(m);
  const ScalarLogDensity db(mp);
  const LineMapping map = line_mapping(m, mp);
  const auto f = [&](Wide x) { return exp_or_zero(log_integrand(kind, alpha, da(x), db(x))); };
  const std::vector<Wide> breaks(map.breakpoints.begin(), map.breakpoints.end());
  const QuadratureOptions opts{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions};
  return integrate_real_line_wide(f, map.center, map.scale, breaks, opts).value;
}

OracleEstimate deterministic_estimate(Metric metric, double alpha, const MixtureModel &m, const MixtureModel &mp,
                                      const OracleConfig &cfg) {
  const Wide a = effective_alpha(metric, alpha);
  std::vector<Wide> integrals;
  for (Integrand kind : constituents(metric))
    integrals.push_back(deterministic_integral(kind, a, m, mp, cfg));
  OracleEstimate out;
  out.value = static_cast<double>(assemble_value(metric, a, integrals));
  return out;
}

} // namespace

std::string_view to_string(OracleMethod method) noexcept {
  switch (method) {
  case OracleMethod::ExactEnum:
    return "exact";
  case OracleMethod::Quadrature:
    return "quad";
  case OracleMethod::MonteCarlo:
    return "mc";
  }
  return "?";
}

std::optional<OracleMethod> parse_oracle_method(std::string_view text) noexcept {
  for (OracleMethod m : {OracleMethod::ExactEnum, OracleMethod::Quadrature, OracleMethod::MonteCarlo})
    if (text == to_string(m))
      return m;
  return std::nullopt;
}

OracleMethod default_oracle_method(const Family &fam) noexcept {
  if (fam.is_discrete())
    return OracleMethod::ExactEnum;
  if (fam.kind == FamilyKind::Laplacian || (fam.kind == FamilyKind::Gaussian && fam.dim == 1))
    return OracleMethod::Quadrature;
  return OracleMethod::MonteCarlo;
}

void OracleConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw OracleError("oracle tolerances must be positive");
  if (max_subdivisions < 1)
    throw OracleError("max_subdivisions must be positive");
  if (method == OracleMethod::MonteCarlo && samples < 1000)
    throw OracleError("Monte Carlo needs at least 1000 samples");
  if (chunk_size == 0)
    throw OracleError("chunk_size must be positive");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t chunk) noexcept {
  std::uint64_t z = seed + (chunk + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// --- sampling ----------------------------------------------------------------

ComponentSampler::ComponentSampler(const Family &fam, const NaturalParameter &theta) : fam_(fam) {
  const SourceParameter src = from_natural(fam, theta);
  switch (fam.kind) {
  case FamilyKind::Bernoulli:
    scalar_ = std::get<BernoulliSource>(src).lambda;
    break;
  case FamilyKind::Multinoulli: {
    const auto &p = std::get<MultinoulliSource>(src).probs;
    vec_.resize(p.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      vec_[i] = (acc += p[i]);
    break;
  }
  case FamilyKind::Laplacian:
    scalar_ = std::get<LaplacianSource>(src).sigma;
    break;
  case FamilyKind::Gaussian: {
    const auto &g = std::get<GaussianSource>(src);
    vec_ = g.mean;
    factor_ = Eigen::LLT<Eigen::MatrixXd>(g.cov).matrixL();
    break;
  }
  case FamilyKind::Wishart: {
    const auto &w = std::get<WishartSource>(src);
    scalar_ = w.dof;
    factor_ = Eigen::LLT<Eigen::MatrixXd>(w.scale).matrixL();
    break;
  }
  }
}

SupportPoint ComponentSampler::draw(Rng &rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (fam_.kind) {
  case FamilyKind::Bernoulli:
    return uniform(rng) < scalar_ ? 1.0 : 0.0;
  case FamilyKind::Multinoulli: {
    const double u = uniform(rng) * vec_[vec_.size() - 1];
    Eigen::Index pick = vec_.size() - 1;
    for (Eigen::Index i = 0; i < vec_.size(); ++i)
      if (u < vec_[i]) {
        pick = i;
        break;
      }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(vec_.size());
    e[pick] = 1.0;
    return e;
  }
  case FamilyKind::Laplacian: {
    std::exponential_distribution<double> expo(1.0);
    const double magnitude = expo(rng) * scalar_;
    return uniform(rng) < 0.5 ? -magnitude : magnitude;
  }
  case FamilyKind::Gaussian: {
    Eigen::VectorXd z(vec_.size());
    for (auto &v : z)
      v = normal(rng);
    return Eigen::VectorXd(vec_ + factor_ * z);
  }
  case FamilyKind::Wishart: {
    // Bartlett: X = (L A)(L A)ᵀ, A lower triangular with A_ii² ~ χ²(n - i)
    // and standard normal entries below the diagonal.
    const Eigen::Index d = factor_.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      std::chi_squared_distribution<double> chi2(scalar_ - static_cast<double>(i));
      a(i, i) = std::sqrt(chi2(rng));
      for (Eigen::Index j = 0; j < i; ++j)
        a(i, j) = normal(rng);
    }
    const Eigen::MatrixXd la = factor_ * a;
    Eigen::MatrixXd x = la * la.transpose();
    return Eigen::MatrixXd(0.5 * (x + x.transpose()));
  }
  }
  throw InternalInvariantError("unknown family");
}

SupportPoint sample(const Family &fam, const NaturalParameter &theta, Rng &rng) {
  return ComponentSampler(fam, theta).draw(rng);
}

MixtureSampler::MixtureSampler(const MixtureModel &m) {
  double acc = 0.0;
  for (const auto &c : m.components()) {
    cumulative_.push_back(acc += c.weight);
    components_.emplace_back(m.family(), c.theta);
  }
}

SupportPoint MixtureSampler::draw(Rng &rng) const {
  std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());
  const double u = uniform(rng);
  std::size_t pick = cumulative_.size() - 1;
  for (std::size_t i = 0; i < cumulative_.size(); ++i)
    if (u < cumulative_[i]) {
      pick = i;
      break;
    }
  return components_[pick].draw(rng);
}

// --- Monte Carlo -------------------------------------------------------------

namespace {

struct DrawnChunk {
  std::vector<double> log_m, log_mp, log_q;
};

template <typename Eval>
void fill_bank(const MixtureSampler &proposal, const Family &fam, const OracleConfig &cfg, Eval &&eval,
               std::vector<double> &log_m, std::vector<double> &log_mp, std::vector<double> &log_q) {
  cfg.validate();
  const std::uint64_t chunk = cfg.chunk_size;
  const std::uint64_t chunks = (cfg.samples + chunk - 1) / chunk;
  auto run = [&](std::uint64_t c) {
    Rng rng(substream_seed(cfg.seed, c));
    const std::uint64_t n = std::min(chunk, cfg.samples - c * chunk);
    DrawnChunk out;
    out.log_m.reserve(n);
    out.log_mp.reserve(n);
    out.log_q.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const NaturalParameter stat = sufficient_statistic(fam, proposal.draw(rng));
      eval(stat, out);
    }
    return out;
  };
  const auto drawn = run_chunks(chunks, cfg.workers, run);
  log_m.reserve(cfg.samples);
  log_mp.reserve(cfg.samples);
  log_q.reserve(cfg.samples);
  for (const auto &d : drawn) {
    log_m.insert(log_m.end(), d.log_m.begin(), d.log_m.end());
    log_mp.insert(log_mp.end(), d.log_mp.begin(), d.log_mp.end());
    log_q.insert(log_q.end(), d.log_q.begin(), d.log_q.end());
  }
}

} // namespace

MonteCarloBank::MonteCarloBank(const MixtureModel &m, const MixtureModel &mp, const OracleConfig &cfg)
    : chunk_size_(cfg.chunk_size), paired_(true) {
  if (!(m.family() == mp.family()))
    throw ParameterDomainError("family", "mixtures belong to different families");
  const MixtureModel both = MixtureModel::sum(m, mp);
  const MixtureSampler proposal(both);
  const double log_total = std::log(both.total_weight());
  fill_bank(proposal, m.family(), cfg,
            [&](const NaturalParameter &stat, DrawnChunk &out) {
              const double a = m.log_density_from_stat(stat);
              const double b = mp.log_density_from_stat(stat);
              out.log_m.push_back(a);
              out.log_mp.push_back(b);
              out.log_q.push_back(log_add(a, b) - log_total);
            },
            log_m_, log_mp_, log_q_);
}

MonteCarloBank::MonteCarloBank(const MixtureModel &m, const OracleConfig &cfg)
    : chunk_size_(cfg.chunk_size), paired_(false) {
  const MixtureSampler proposal(m);
  const double log_total = std::log(m.total_weight());
  fill_bank(proposal, m.family(), cfg,
            [&](const NaturalParameter &stat, DrawnChunk &out) {
              const double a = m.log_density_from_stat(stat);
              out.log_m.push_back(a);
              out.log_mp.push_back(a);
              out.log_q.push_back(a - log_total);
            },
            log_m_, log_mp_, log_q_);
}

template <typename Fn>
MonteCarloBank::Joint MonteCarloBank::estimate(std::size_t count, Fn &&per_sample) const {
  // Per-chunk two-pass mean and co-moment, merged in chunk order (Chan et al.).
  const auto dim = static_cast<Eigen::Index>(count);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd comoment = Eigen::MatrixXd::Zero(dim, dim);
  double n = 0.0;
  const std::uint64_t total = size();
  Eigen::MatrixXd ys;
  for (std::uint64_t begin = 0; begin < total; begin += chunk_size_) {
    const std::uint64_t end = std::min(total, begin + chunk_size_);
    const auto rows = static_cast<Eigen::Index>(end - begin);
    ys.resize(rows, dim);
    for (std::uint64_t i = begin; i < end; ++i) {
      auto row = ys.row(static_cast<Eigen::Index>(i - begin));
      per_sample(log_m_[i], log_mp_[i], log_q_[i], row);
    }
    const Eigen::VectorXd chunk_mean = ys.colwise().mean().transpose();
    const Eigen::MatrixXd centered = ys.rowwise() - chunk_mean.transpose();
    const Eigen::MatrixXd chunk_comoment = centered.transpose() * centered;
    const double nb = static_cast<double>(rows);
    const double nt = n + nb;
    const Eigen::VectorXd delta = chunk_mean - mean;
    mean += delta * (nb / nt);
    comoment += chunk_comoment + delta * delta.transpose() * (n * nb / nt);
    n = nt;
  }
  Joint out;
  out.mean.assign(mean.data(), mean.data() + dim);
  out.cov_of_mean = comoment / ((n - 1.0) * n);
  return out;
}

OracleEstimate MonteCarloBank::power(double alpha, bool second) const {
  check_alpha(alpha);
  if (second && !paired_)
    throw OracleError("bank holds a single mixture");
  const Integrand kind = second ? Integrand::PowerB : Integrand::PowerA;
  const auto joint = estimate(1, [&](double la, double lb, double lq, auto &row) {
    row[0] = exp_or_zero(log_integrand(kind, alpha, la, lb) - lq);
  });
  return {joint.mean[0], std::sqrt(joint.cov_of_mean(0, 0)), size()};
}

OracleEstimate MonteCarloBank::abs_power(double alpha) const {
  check_alpha(alpha);
  const auto joint = estimate(1, [&](double la, double lb, double lq, auto &row) {
    row[0] = exp_or_zero(log_integrand(Integrand::AbsDiff, alpha, la, lb) - lq);
  });
  return {joint.mean[0], std::sqrt(joint.cov_of_mean(0, 0)), size()};
}

OracleEstimate MonteCarloBank::inner_product() const {
  if (!paired_)
    throw OracleError("inner products need a bank built from two mixtures");
  const auto joint = estimate(1, [&](double la, double lb, double lq, auto &row) {
    row[0] = exp_or_zero(log_integrand(Integrand::Product, 2.0, la, lb) - lq);
  });
  return {joint.mean[0], std::sqrt(joint.cov_of_mean(0, 0)), size()};
}

OracleEstimate MonteCarloBank::norm(double alpha, bool second) const {
  const OracleEstimate p = power(alpha, second);
  return {root(p.value, alpha), root_slope(p.value, alpha) * p.std_error, p.samples_used};
}

OracleEstimate MonteCarloBank::distance(Metric metric, double alpha) const {
  if (!paired_)
    throw OracleError("distances need a bank built from two mixtures");
  const double a = effective_alpha(metric, alpha);
  check_alpha(a);
  const auto kinds = constituents(metric);
  const auto joint = estimate(kinds.size(), [&](double la, double lb, double lq, auto &row) {
    for (std::size_t j = 0; j < kinds.size(); ++j)
      row[static_cast<Eigen::Index>(j)] = exp_or_zero(log_integrand(kinds[j], a, la, lb) - lq);
  });
  return propagate(assemble(metric, a, joint.mean), joint.cov_of_mean, size());
}

// --- public entry points -----------------------------------------------------

OracleEstimate integrate_abs_power(const MixtureModel &m, const MixtureModel &mp, double alpha,
                                   const OracleConfig &cfg) {
  cfg.validate();
  check_alpha(alpha);
  if (!(m.family() == mp.family()))
    throw ParameterDomainError("family", "mixtures belong to different families");
  check_method(m.family(), cfg.method);
  if (cfg.method == OracleMethod::MonteCarlo)
    return MonteCarloBank(m, mp, cfg).abs_power(alpha);
  return {static_cast<double>(deterministic_integral(Integrand::AbsDiff, alpha, m, mp, cfg)), 0.0, 0};
}

OracleEstimate integrate_power(const MixtureModel &m, double alpha, const OracleConfig &cfg) {
  cfg.validate();
  check_alpha(alpha);
  check_method(m.family(), cfg.method);
  if (cfg.method == OracleMethod::MonteCarlo)
    return MonteCarloBank(m, cfg).power(alpha);
  return {static_cast<double>(deterministic_integral(Integrand::PowerA, alpha, m, m, cfg)), 0.0, 0};
}

OracleEstimate oracle_norm(const MixtureModel &m, double alpha, const OracleConfig &cfg) {
  const OracleEstimate p = integrate_power(m, alpha, cfg);
  return {root(p.value, alpha), root_slope(p.value, alpha) * p.std_error, p.samples_used};
}

OracleEstimate oracle_inner_product(const MixtureModel &m, const MixtureModel &mp, const OracleConfig &cfg) {
  cfg.validate();
  if (!(m.family() == mp.family()))
    throw ParameterDomainError("family", "mixtures belong to different families");
  check_method(m.family(), cfg.method);
  if (cfg.method == OracleMethod::MonteCarlo)
    return MonteCarloBank(m, mp, cfg).inner_product();
  return {static_cast<double>(deterministic_integral(Integrand::Product, 2.0, m, mp, cfg)), 0.0, 0};
}

OracleEstimate oracle_distance(Metric metric, double alpha, const MixtureModel &m, const MixtureModel &mp,
                               const OracleConfig &cfg) {
  cfg.validate();
  if (!(m.family() == mp.family()))
    throw ParameterDomainError("family", "mixtures belong to different families");
  check_alpha(effective_alpha(metric, alpha));
  check_method(m.family(), cfg.method);
  if (cfg.method == OracleMethod::MonteCarlo)
    return MonteCarloBank(m, mp, cfg).distance(metric, alpha);
  return deterministic_estimate(metric, alpha, m, mp, cfg);
}

} // namespace mink
