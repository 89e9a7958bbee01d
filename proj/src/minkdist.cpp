#include "mink/minkdist.hpp"

#include "mink/combinatorics.hpp"
#include "mink/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

namespace mink {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// A wide-precision result is trusted when it is at least this fraction of the
// magnitudes it was cancelled from. Below that its rounding error, about
// 1e-19 times the log-term size over the ratio, can reach 1e-13; the
// computation is then repeated in quad precision.
constexpr double kTrustRatio = 1e-4;

template <typename R> double residue_tolerance() {
  return std::is_same_v<R, QuadReal> ? kQuadResidueTolerance : kWideResidueTolerance;
}

template <typename R> bool same_parameter(const BasicNaturalParameter<R> &a, const BasicNaturalParameter<R> &b) {
  return a.scalar == b.scalar && a.vec == b.vec && a.mat == b.mat;
}

template <typename R>
BasicNaturalParameter<R> sum_parameters(const BasicNaturalParameter<R> &a, const BasicNaturalParameter<R> &b) {
  return {R(a.scalar + b.scalar), a.vec + b.vec, a.mat + b.mat};
}

// A mixture component in working precision, weight already divided by the
// working scale.
template <typename R> struct Comp {
  R log_weight;
  BasicNaturalParameter<R> theta;
  R partition;
};

template <typename R> std::vector<Comp<R>> components_as(const MixtureModel &m, R log_scale, R log_factor = 0) {
  using std::log;
  std::vector<Comp<R>> out;
  out.reserve(m.size());
  for (const auto &c : m.components()) {
    auto theta = cast_parameter<R>(c.theta);
    const R f = log_partition(m.family(), theta);
    out.push_back({R(log(R(c.weight)) + log_factor - log_scale), std::move(theta), f});
  }
  return out;
}

template <typename R> R log_max_weight(const MixtureModel &m) {
  using std::log;
  R mx = -std::numeric_limits<R>::infinity();
  for (const auto &c : m.components())
    mx = std::max(mx, R(log(R(c.weight))));
  return mx;
}

template <typename R> std::vector<Comp<R>> concat(std::span<const Comp<R>> a, std::span<const Comp<R>> b) {
  std::vector<Comp<R>> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

template <typename R> struct Expansion {
  BasicSignedSum<R> sum;
  std::uint64_t terms = 0;
};

// ∫ (Σ_l c_l p_{φ_l})^β over the composition stream of β into K parts.
template <typename R>
Expansion<R> expand_power(const Family &fam, std::span<const BasicSignedLogValue<R>> coeffs,
                          std::span<const BasicNaturalParameter<R>> params, unsigned beta,
                          const ExecutionConfig &exec) {
  const std::size_t count = params.size();
  const Compositions comps(beta, static_cast<unsigned>(count), exec.term_cap);
  std::vector<R> log_fact(beta + 1, R(0));
  for (unsigned n = 2; n <= beta; ++n)
    log_fact[n] = boost::math::lgamma(R(n + 1));
  std::vector<R> partitions(count);
  for (std::size_t l = 0; l < count; ++l)
    partitions[l] = log_partition(fam, params[l]);

  const std::uint64_t chunk = std::max<std::uint64_t>(1, exec.chunk_size);
  const std::uint64_t chunks = (comps.size() + chunk - 1) / chunk;

  struct Partial {
    BasicSignedPools<R> pools;
    std::uint64_t terms = 0;
  };

  auto run = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(comps.size(), begin + chunk);
    BasicNaturalParameter<R> combo;
    combo.vec.resize(fam.vector_size());
    combo.mat.resize(fam.matrix_side(), fam.matrix_side());
    std::vector<BasicSignedLogValue<R>> buffer;
    buffer.reserve(end - begin);
    Partial out;
    auto cursor = comps.at(begin);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto parts = cursor.parts();
      int sign = 1;
      R log_term = log_fact[beta];
      R weighted_partitions = 0;
      combo.scalar = 0;
      combo.vec.setZero();
      combo.mat.setZero();
      for (std::size_t l = 0; l < count; ++l) {
        const unsigned b = parts[l];
        if (b == 0)
          continue;
        if (coeffs[l].sign == 0) {
          sign = 0;
          break;
        }
        if (coeffs[l].sign < 0 && (b % 2 == 1))
          sign = -sign;
        const R rb = b;
        log_term += rb * coeffs[l].log_mag - log_fact[b];
        weighted_partitions += rb * partitions[l];
        combo.scalar += rb * params[l].scalar;
        combo.vec += rb * params[l].vec;
        combo.mat += rb * params[l].mat;
      }
      ++out.terms;
      if (sign != 0) {
        log_term += log_partition(fam, combo) - weighted_partitions;
        buffer.push_back(BasicSignedLogValue<R>::from_log(log_term, sign));
      }
      cursor.next();
    }
    out.pools = reduce_terms<R>(buffer);
    return out;
  };

  const auto partials = run_chunks(chunks, exec.workers, run);
  std::vector<BasicSignedPools<R>> pools;
  pools.reserve(partials.size());
  Expansion<R> result;
  for (const auto &p : partials) {
    pools.push_back(p.pools);
    result.terms += p.terms;
  }
  result.sum = finalize<R>(merge_pools<R>(pools), residue_tolerance<R>());
  return result;
}

template <typename R> struct Norm {
  R log_norm = 0;
  std::uint64_t terms = 0;
};

// log ‖Σ exp(log_weight) p_θ‖_α.
template <typename R>
Norm<R> log_norm(const Family &fam, std::span<const Comp<R>> comps, unsigned alpha, const ExecutionConfig &exec) {
  if (alpha == 1) {
    // Each density integrates to one.
    std::vector<R> logs;
    for (const auto &c : comps)
      logs.push_back(c.log_weight);
    return {log_sum_exp<R>(logs), comps.size()};
  }
  std::vector<BasicSignedLogValue<R>> coeffs;
  std::vector<BasicNaturalParameter<R>> params;
  for (const auto &c : comps) {
    coeffs.push_back(BasicSignedLogValue<R>::from_log(c.log_weight));
    params.push_back(c.theta);
  }
  const auto expansion = expand_power<R>(fam, coeffs, params, alpha, exec);
  if (expansion.sum.value.sign <= 0)
    throw InternalInvariantError("positive mixture expansion produced a non-positive integral");
  return {R(expansion.sum.value.log_mag / alpha), expansion.terms};
}

template <typename R>
R log_inner(std::span<const Comp<R>> a, std::span<const Comp<R>> b, const Family &fam) {
  std::vector<R> logs;
  logs.reserve(a.size() * b.size());
  for (const auto &x : a)
    for (const auto &y : b)
      logs.push_back(x.log_weight + y.log_weight + log_partition(fam, sum_parameters(x.theta, y.theta)) -
                     x.partition - y.partition);
  return log_sum_exp<R>(logs);
}

void require_same_family(const MixtureModel &a, const MixtureModel &b) {
  if (!(a.family() == b.family()))
    throw ParameterDomainError("family", "mixtures belong to different families");
}

// Clamp rule shared by the arithmetic-gap distances: tiny negatives become 0,
// larger ones indicate a numerical failure.
double clamp_non_negative(double raw, double scale, const char *what) {
  if (raw >= 0.0)
    return raw;
  if (-raw <= kCancellationTolerance * std::max(scale, 0.0))
    return 0.0;
  throw CancellationError(std::string(what) + " accumulated to a negative value", raw);
}

void warn_unnormalized(const MixtureModel &m, const char *name, std::vector<std::string> &warnings) {
  if (!m.normalized())
    warnings.push_back(std::string("mixture ") + name +
                       " is not normalized; identity of indiscernibles does not apply");
}

} // namespace

MixtureModel::MixtureModel(Family family, std::vector<Component> components)
    : family_(family), components_(std::move(components)) {
  family_.validate();
  if (components_.empty())
    throw ParameterDomainError("components", "a mixture needs at least one component");
  log_partitions_.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto &c = components_[i];
    const std::string field = "components[" + std::to_string(i) + "]";
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw ParameterDomainError(field + ".weight", "weights must be positive and finite");
    check_shape(family_, c.theta);
    if (!in_cone(family_, c.theta))
      throw ParameterDomainError(field + ".params", "natural parameter lies outside the cone");
    log_partitions_.push_back(log_partition(family_, c.theta));
  }
}

MixtureModel MixtureModel::single(Family family, NaturalParameter theta, double weight) {
  return MixtureModel(family, {Component{weight, std::move(theta)}});
}

double MixtureModel::total_weight() const noexcept {
  double s = 0.0;
  for (const auto &c : components_)
    s += c.weight;
  return s;
}

bool MixtureModel::normalized() const noexcept { return std::abs(total_weight() - 1.0) <= 1e-12; }

MixtureModel MixtureModel::scaled(double lambda) const {
  auto comps = components_;
  for (auto &c : comps)
    c.weight *= lambda;
  return MixtureModel(family_, std::move(comps));
}

MixtureModel MixtureModel::sum(const MixtureModel &a, const MixtureModel &b) {
  require_same_family(a, b);
  std::vector<Component> comps(a.components_.begin(), a.components_.end());
  comps.insert(comps.end(), b.components_.begin(), b.components_.end());
  return MixtureModel(a.family_, std::move(comps));
}

double MixtureModel::log_density_from_stat(const NaturalParameter &stat) const noexcept {
  double mx = kNegInf;
  double terms[16];
  std::vector<double> heap;
  double *logs = terms;
  if (components_.size() > 16) {
    heap.resize(components_.size());
    logs = heap.data();
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    logs[i] = std::log(components_[i].weight) + pair(stat, components_[i].theta) - log_partitions_[i];
    mx = std::max(mx, logs[i]);
  }
  if (mx == kNegInf)
    return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i)
    s += std::exp(logs[i] - mx);
  return mx + std::log(s);
}

double MixtureModel::log_density(const SupportPoint &x) const {
  return log_density_from_stat(sufficient_statistic(family_, x));
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
  case Metric::M:
    return "M";
  case Metric::D:
    return "D";
  case Metric::L:
    return "L";
  case Metric::CS:
    return "CS";
  case Metric::TV:
    return "TV";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  for (Metric m : {Metric::M, Metric::D, Metric::L, Metric::CS, Metric::TV})
    if (text == to_string(m))
      return m;
  return std::nullopt;
}

double log_geometric_integral(const Family &fam, std::span<const NaturalParameter> thetas,
                              std::span<const double> alphas) {
  const NaturalParameter combo = linear_combination(fam, thetas, alphas);
  double acc = log_partition(fam, combo);
  for (std::size_t i = 0; i < thetas.size(); ++i)
    if (alphas[i] != 0.0)
      acc -= alphas[i] * log_partition(fam, thetas[i]);
  return acc;
}

double jensen_diversity(const Family &fam, std::span<const NaturalParameter> thetas,
                        std::span<const double> alphas) {
  return -log_geometric_integral(fam, thetas, alphas);
}

double NormResult::value() const noexcept { return std::exp(log_norm); }

NormResult mixture_log_lp_norm(const MixtureModel &m, unsigned alpha, const ExecutionConfig &exec) {
  if (alpha == 0)
    throw UnsupportedExponentError("L_alpha norms need alpha >= 1");
  // Homogeneous of degree one: factor out the largest weight. All terms are
  // positive, so extended precision is always enough.
  const WideReal log_scale = log_max_weight<WideReal>(m);
  const auto comps = components_as<WideReal>(m, log_scale);
  const auto n = log_norm<WideReal>(m.family(), comps, alpha, exec);
  return {static_cast<double>(log_scale + n.log_norm), n.terms};
}

double mixture_lp_norm(const MixtureModel &m, unsigned alpha, const ExecutionConfig &exec) {
  return mixture_log_lp_norm(m, alpha, exec).value();
}

std::vector<ProductComponent> product_expand(const MixtureModel &m, const MixtureModel &mp, bool merge_equal) {
  require_same_family(m, mp);
  const auto pos = components_as<WideReal>(m, 0);
  const auto neg = components_as<WideReal>(mp, 0);
  std::vector<std::pair<int, const Comp<WideReal> *>> all;
  for (const auto &c : pos)
    all.emplace_back(1, &c);
  for (const auto &c : neg)
    all.emplace_back(-1, &c);

  const Family &fam = m.family();
  std::vector<ProductComponent> out;
  out.reserve(all.size() * all.size());
  for (const auto &[sa, a] : all) {
    for (const auto &[sb, b] : all) {
      WideParameter phi = sum_parameters(a->theta, b->theta);
      // p_a p_b = I(θ_a, θ_b; 1, 1) p_{θ_a + θ_b}
      const WideReal log_coeff = a->log_weight + b->log_weight + log_partition(fam, phi) - a->partition - b->partition;
      const auto coeff = WideSignedLogValue::from_log(log_coeff, sa * sb);
      if (merge_equal) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const ProductComponent &pc) { return same_parameter(pc.phi, phi); });
        if (it != out.end()) {
          const WideSignedLogValue terms[] = {it->coeff, coeff};
          it->coeff = finalize<WideReal>(reduce_terms<WideReal>(terms), kWideResidueTolerance).value;
          continue;
        }
      }
      out.push_back({coeff, std::move(phi)});
    }
  }
  if (merge_equal)
    std::erase_if(out, [](const ProductComponent &pc) { return pc.coeff.is_zero(); });
  return out;
}

ExpansionResult signed_power_integral(const Family &fam, std::span<const ProductComponent> comps, unsigned beta,
                                      const ExecutionConfig &exec) {
  if (beta == 0)
    throw UnsupportedExponentError("signed power integral needs beta >= 1");
  if (comps.empty())
    return {};
  std::vector<WideSignedLogValue> coeffs;
  std::vector<WideParameter> params;
  for (const auto &pc : comps) {
    coeffs.push_back(pc.coeff);
    params.push_back(pc.phi);
  }
  const auto e = expand_power<WideReal>(fam, coeffs, params, beta, exec);
  return {e.sum, e.terms};
}

double log_inner_product(const MixtureModel &m, const MixtureModel &mp) {
  require_same_family(m, mp);
  return static_cast<double>(
      log_inner<WideReal>(components_as<WideReal>(m, 0), components_as<WideReal>(mp, 0), m.family()));
}

namespace {

// One evaluation of a distance in working precision R, with whether its
// cancellation left enough digits to trust.
struct Attempt {
  DistanceResult out;
  bool trusted = true;
};

template <typename R>
Attempt distance_in(Metric metric, unsigned alpha, const MixtureModel &m, const MixtureModel &mp,
                    const ExecutionConfig &exec) {
  using std::exp;
  using std::log;
  using std::log1p;
  const Family &fam = m.family();
  Attempt at;
  DistanceResult &out = at.out;
  // M and D are homogeneous, L and CS scale-free: work on the pair divided by
  // its largest weight and restore the scale at the end.
  const R log_scale = std::max(log_max_weight<R>(m), log_max_weight<R>(mp));
  const R scale = exp(log_scale);
  const auto a = components_as<R>(m, log_scale);
  const auto b = components_as<R>(mp, log_scale);
  const R trust = kTrustRatio;
  switch (metric) {
  case Metric::M: {
    const auto both = concat<R>(a, b);
    std::vector<BasicSignedLogValue<R>> coeffs;
    std::vector<BasicNaturalParameter<R>> params;
    for (std::size_t i = 0; i < both.size(); ++i) {
      for (std::size_t j = 0; j < both.size(); ++j) {
        const auto &x = both[i];
        const auto &y = both[j];
        auto phi = sum_parameters(x.theta, y.theta);
        // p_x p_y = I(θ_x, θ_y; 1, 1) p_{θ_x + θ_y}, negative across mixtures
        const int sign = ((i < a.size()) == (j < a.size())) ? 1 : -1;
        coeffs.push_back(BasicSignedLogValue<R>::from_log(
            x.log_weight + y.log_weight + log_partition(fam, phi) - x.partition - y.partition, sign));
        params.push_back(std::move(phi));
      }
    }
    const auto expansion = expand_power<R>(fam, coeffs, params, alpha / 2, exec);
    out.terms = expansion.terms;
    const auto &s = expansion.sum;
    at.trusted = s.value.sign > 0 && s.value.log_mag - s.log_positive >= log(trust);
    if (s.value.sign < 0) {
      // Within the tolerance band a negative integral of a square is zero.
      if (s.value.log_mag > log(R(kCancellationTolerance)) + s.log_positive)
        throw CancellationError("M integrand accumulated to a negative value", -static_cast<double>(s.value.value()));
      out.raw = -static_cast<double>(scale * exp(R(s.value.log_mag / alpha)));
      out.value = 0.0;
      return at;
    }
    out.raw = s.value.sign == 0 ? 0.0 : static_cast<double>(scale * exp(R(s.value.log_mag / alpha)));
    out.value = out.raw;
    return at;
  }
  case Metric::D:
  case Metric::L: {
    const auto na = log_norm<R>(fam, a, alpha, exec);
    const auto nb = log_norm<R>(fam, b, alpha, exec);
    const auto nab = log_norm<R>(fam, concat<R>(a, b), alpha, exec);
    out.terms = na.terms + nb.terms + nab.terms;
    const R sum_ab = exp(na.log_norm) + exp(nb.log_norm);
    const R gap = sum_ab - exp(nab.log_norm);
    at.trusted = gap >= trust * sum_ab;
    if (metric == Metric::D) {
      out.raw = static_cast<double>(scale * gap);
      out.value = clamp_non_negative(out.raw, static_cast<double>(scale * sum_ab), "D");
    } else {
      // log((‖m‖ + ‖m'‖) / ‖m + m'‖) with the gap kept explicit
      out.raw = static_cast<double>(log1p(R(gap / exp(nab.log_norm))));
      out.value = clamp_non_negative(out.raw, 1.0, "L");
    }
    return at;
  }
  case Metric::CS: {
    const auto na = log_norm<R>(fam, a, 2, exec);
    const auto nb = log_norm<R>(fam, b, 2, exec);
    const R ip = log_inner<R>(a, b, fam);
    out.terms = na.terms + nb.terms + m.size() * mp.size();
    // -log <m, m'> + 1/2 log ∫m² + 1/2 log ∫m'², with log ∫m² = 2 log ‖m‖₂
    const R raw = -ip + na.log_norm + nb.log_norm;
    using std::abs;
    at.trusted = raw >= trust * (abs(ip) + abs(na.log_norm) + abs(nb.log_norm));
    out.raw = static_cast<double>(raw);
    out.value = clamp_non_negative(out.raw, 1.0, "CS");
    return at;
  }
  case Metric::TV:
    break;
  }
  throw InternalInvariantError("unsupported metric reached the closed-form engine");
}

template <typename R>
Attempt diversity_in(std::span<const MixtureModel> densities, std::span<const double> weights, unsigned alpha,
                     const ExecutionConfig &exec) {
  using std::exp;
  using std::log;
  R log_scale = -std::numeric_limits<R>::infinity();
  for (std::size_t i = 0; i < densities.size(); ++i)
    log_scale = std::max(log_scale, R(log(R(weights[i])) + log_max_weight<R>(densities[i])));
  const Family &fam = densities.front().family();
  Attempt at;
  DistanceResult &out = at.out;
  R sum_norms = 0;
  std::vector<Comp<R>> pooled;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const auto comps = components_as<R>(densities[i], log_scale, R(log(R(weights[i]))));
    const auto n = log_norm<R>(fam, comps, alpha, exec);
    sum_norms += exp(n.log_norm);
    out.terms += n.terms;
    pooled.insert(pooled.end(), comps.begin(), comps.end());
  }
  const auto pooled_norm = log_norm<R>(fam, pooled, alpha, exec);
  out.terms += pooled_norm.terms;
  const R gap = sum_norms - exp(pooled_norm.log_norm);
  at.trusted = gap >= R(kTrustRatio) * sum_norms;
  const R scale = exp(log_scale);
  out.raw = static_cast<double>(scale * gap);
  out.value = clamp_non_negative(out.raw, static_cast<double>(scale * sum_norms), "diversity");
  return at;
}

} // namespace

DistanceResult closed_form_distance(Metric metric, unsigned alpha, const MixtureModel &m, const MixtureModel &mp,
                                    const ExecutionConfig &exec) {
  require_same_family(m, mp);
  switch (metric) {
  case Metric::TV:
    throw UnsupportedExponentError("TV has no closed form; use the oracle path");
  case Metric::M: {
    if (alpha < 2 || alpha % 2 != 0)
      throw UnsupportedExponentError("M closed form requires even alpha >= 2; use the oracle path");
    const auto k = static_cast<unsigned>(m.size() + mp.size());
    const BigInt needed = composition_count(alpha / 2, k * k);
    if (needed > exec.term_cap)
      throw BudgetError(needed.str(), exec.term_cap);
    break;
  }
  case Metric::D:
  case Metric::L:
    if (alpha < 2)
      throw UnsupportedExponentError(std::string(to_string(metric)) + " closed form requires integer alpha >= 2");
    break;
  case Metric::CS:
    if (alpha != 2)
      throw UnsupportedExponentError("CS is defined for alpha = 2 only");
    break;
  }
  Attempt at = distance_in<WideReal>(metric, alpha, m, mp, exec);
  if (!at.trusted)
    at = distance_in<QuadReal>(metric, alpha, m, mp, exec);
  if (metric == Metric::D || metric == Metric::L) {
    warn_unnormalized(m, "a", at.out.warnings);
    warn_unnormalized(mp, "b", at.out.warnings);
  }
  return at.out;
}

DistanceResult minkowski_diversity(std::span<const MixtureModel> densities, std::span<const double> weights,
                                   unsigned alpha, const ExecutionConfig &exec) {
  if (densities.empty() || densities.size() != weights.size())
    throw ParameterDomainError("weights", "need one positive weight per density");
  if (alpha < 2)
    throw UnsupportedExponentError("diversity closed form requires integer alpha >= 2");
  for (std::size_t i = 0; i < densities.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw ParameterDomainError("weights[" + std::to_string(i) + "]", "weights must be positive and finite");
    require_same_family(densities.front(), densities[i]);
  }
  Attempt at = diversity_in<WideReal>(densities, weights, alpha, exec);
  if (!at.trusted)
    at = diversity_in<QuadReal>(densities, weights, alpha, exec);
  return at.out;
}

DistanceResult minkowski_diversity(const MixtureModel &m, unsigned alpha, const ExecutionConfig &exec) {
  std::vector<MixtureModel> densities;
  std::vector<double> weights;
  for (const auto &c : m.components()) {
    densities.push_back(MixtureModel::single(m.family(), c.theta));
    weights.push_back(c.weight);
  }
  return minkowski_diversity(densities, weights, alpha, exec);
}

} // namespace mink
