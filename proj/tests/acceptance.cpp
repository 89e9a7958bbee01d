// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "mink/combinatorics.hpp"
#include "mink/errors.hpp"
#include "mink/minkdist.hpp"
#include "mink/oracle.hpp"
#include "mink/quadrature.hpp"
#include "mink/random_models.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mink;

namespace {

// Pinned tolerances and budgets.
constexpr double kDiscreteRelTol = 1e-10;
constexpr double kDiscreteSeconds = 10.0;
constexpr double kQuadratureRelTol = 1e-8;
constexpr double kQuadratureSeconds = 60.0;
// Per-integral tolerance of the quadrature oracle. D and L subtract norms
// that agree to many digits on close pairs, so the integrals must be far
// tighter than the 1e-8 asked of the assembled quantities.
constexpr double kQuadratureOracleRelTol = 1e-17;
// M is a plain root of ∫|m - m'|^α, whose integrand already cancels
// pointwise; it gets an ordinary tolerance.
constexpr double kQuadratureAbsDiffRelTol = 1e-12;
constexpr int kQuadratureOracleSubdivisions = 20000;
constexpr double kMonteCarloSigmas = 3.0;
constexpr std::uint64_t kMonteCarloSamples = 1'000'000;
constexpr std::uint64_t kMonteCarloSeed = 42;
constexpr double kMonteCarloSeconds = 300.0;
constexpr double kSpotQuadratureTol = 1e-8;
constexpr double kSpotExactTol = 1e-15;
constexpr double kInvariantRelTol = 1e-12;
constexpr double kIdentityAbsTol = 1e-10;
constexpr double kNonNegativeSlack = 1e-10;
constexpr double kTriangleSlack = 1e-10;
constexpr double kCombinatoricsLogTol = 1e-12;
constexpr double kDeterminismRelTol = 1e-13;

constexpr unsigned kAlphas[] = {2, 3, 4, 5};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ⟨m, m'⟩ summed pairwise in extended precision, independent of the
// composition engine.
long double wide_inner(const MixtureModel &m, const MixtureModel &mp) {
  long double acc = 0.0L;
  for (const auto &a : m.components()) {
    const WideParameter ta = widen(a.theta);
    for (const auto &b : mp.components()) {
      const WideParameter tb = widen(b.theta);
      const WideParameter sum{ta.scalar + tb.scalar, ta.vec + tb.vec, ta.mat + tb.mat};
      acc += static_cast<long double>(a.weight) * b.weight *
             std::exp(log_partition(m.family(), sum) - log_partition(m.family(), ta) -
                      log_partition(m.family(), tb));
    }
  }
  return acc;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Counts checks and keeps the worst case of one quantity.
class Tally {
public:
  explicit Tally(std::string name) : name_(std::move(name)) {}

  void check(bool ok, double measure, const std::string &where) {
    ++checks_;
    if (!ok)
      ++failures_;
    if (measure > worst_) {
      worst_ = measure;
      worst_where_ = where;
    }
  }

  [[nodiscard]] bool ok() const { return failures_ == 0; }

  [[nodiscard]] std::string summary() const {
    std::ostringstream os;
    os << name_ << " " << (checks_ - failures_) << "/" << checks_;
    if (checks_ > 0) {
      os << " worst " << worst_;
      if (!worst_where_.empty())
        os << " (" << worst_where_ << ")";
    }
    return os.str();
  }

private:
  std::string name_;
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  double worst_ = 0.0;
  std::string worst_where_;
};

Outcome combine(std::initializer_list<const Tally *> tallies, std::string prefix = {}) {
  Outcome out;
  std::ostringstream os;
  os << prefix;
  bool first = prefix.empty();
  for (const Tally *t : tallies) {
    out.pass = out.pass && t->ok();
    os << (first ? "" : "; ") << t->summary();
    first = false;
  }
  out.detail = os.str();
  return out;
}

std::string label(const char *what, unsigned alpha, int pair) {
  return std::string(what) + " alpha=" + std::to_string(alpha) + " pair " + std::to_string(pair);
}

// Closed form against a deterministic oracle to a relative tolerance.
void compare_deterministic(const MixtureModel &m, const MixtureModel &mp, const OracleConfig &cfg,
                           const OracleConfig &abs_cfg, double tol, int pair, Tally &norms, Tally &d, Tally &l,
                           Tally &cs, Tally &mk) {
  auto rel_check = [&](Tally &t, double closed, double oracle, const std::string &where) {
    const double r = rel_diff(closed, oracle);
    t.check(r <= tol, r, where);
  };
  for (unsigned alpha : kAlphas) {
    rel_check(norms, mixture_lp_norm(m, alpha), oracle_norm(m, alpha, cfg).value, label("norm a", alpha, pair));
    rel_check(norms, mixture_lp_norm(mp, alpha), oracle_norm(mp, alpha, cfg).value, label("norm b", alpha, pair));
    rel_check(d, closed_form_distance(Metric::D, alpha, m, mp).value, oracle_distance(Metric::D, alpha, m, mp, cfg).value,
              label("D", alpha, pair));
    rel_check(l, closed_form_distance(Metric::L, alpha, m, mp).value, oracle_distance(Metric::L, alpha, m, mp, cfg).value,
              label("L", alpha, pair));
    if (alpha % 2 == 0)
      rel_check(mk, closed_form_distance(Metric::M, alpha, m, mp).value,
                oracle_distance(Metric::M, alpha, m, mp, abs_cfg).value, label("M", alpha, pair));
  }
  rel_check(cs, closed_form_distance(Metric::CS, 2, m, mp).value, oracle_distance(Metric::CS, 2, m, mp, cfg).value,
            label("CS", 2, pair));
}

Outcome criterion_discrete() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> k_dist(1, 4);
  std::uniform_int_distribution<int> d_dist(2, 5);
  OracleConfig cfg;
  cfg.method = OracleMethod::ExactEnum;
  Tally norms("norm"), d("D"), l("L"), cs("CS"), mk("M");
  for (int pair = 0; pair < 200; ++pair) {
    const Family fam = pair % 2 == 0 ? Family::bernoulli() : Family::multinoulli(d_dist(rng));
    const auto m = random_mixture(fam, k_dist(rng), rng);
    const auto mp = random_mixture(fam, k_dist(rng), rng);
    compare_deterministic(m, mp, cfg, cfg, kDiscreteRelTol, pair, norms, d, l, cs, mk);
  }
  const double secs = seconds_since(start);
  Outcome out = combine({&norms, &d, &l, &cs, &mk});
  out.pass = out.pass && secs < kDiscreteSeconds;
  out.detail += "; " + std::to_string(secs) + " s";
  return out;
}

Outcome criterion_quadrature() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<int> k_dist(1, 3);
  OracleConfig cfg;
  cfg.method = OracleMethod::Quadrature;
  cfg.rel_tol = kQuadratureOracleRelTol;
  cfg.abs_tol = 1e-300;
  cfg.max_subdivisions = kQuadratureOracleSubdivisions;
  OracleConfig abs_cfg = cfg;
  abs_cfg.rel_tol = kQuadratureAbsDiffRelTol;
  Tally norms("norm"), d("D"), l("L"), cs("CS"), mk("M");
  for (int pair = 0; pair < 100; ++pair) {
    const Family fam = pair % 2 == 0 ? Family::gaussian(1) : Family::laplacian();
    const auto m = random_mixture(fam, k_dist(rng), rng);
    const auto mp = random_mixture(fam, k_dist(rng), rng);
    compare_deterministic(m, mp, cfg, abs_cfg, kQuadratureRelTol, pair, norms, d, l, cs, mk);
  }
  const double secs = seconds_since(start);
  Outcome out = combine({&norms, &d, &l, &cs, &mk});
  out.pass = out.pass && secs < kQuadratureSeconds;
  out.detail += "; " + std::to_string(secs) + " s";
  return out;
}

Outcome criterion_monte_carlo() {
  const auto start = Clock::now();
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<int> k_dist(1, 2);
  Tally norms("norm"), d("D"), l("L"), cs("CS"), mk("M");
  double worst_sigma = 0.0;
  for (int pair = 0; pair < 30; ++pair) {
    const Family fam = pair < 20 ? Family::gaussian(2) : Family::wishart(2);
    const auto m = random_mixture(fam, k_dist(rng), rng);
    const auto mp = random_mixture(fam, k_dist(rng), rng);
    OracleConfig cfg;
    cfg.method = OracleMethod::MonteCarlo;
    cfg.samples = kMonteCarloSamples;
    cfg.seed = substream_seed(kMonteCarloSeed, static_cast<std::uint64_t>(pair));
    const MonteCarloBank bank(m, mp, cfg);
    const MonteCarloBank bank_b(mp, cfg);
    auto sigma_check = [&](Tally &t, double closed, const OracleEstimate &e, const std::string &where) {
      const double sigmas = std::abs(closed - e.value) / e.std_error;
      worst_sigma = std::max(worst_sigma, sigmas);
      t.check(sigmas <= kMonteCarloSigmas, sigmas, where);
    };
    for (unsigned alpha : kAlphas) {
      sigma_check(norms, mixture_lp_norm(m, alpha), bank.norm(alpha), label("norm a", alpha, pair));
      sigma_check(norms, mixture_lp_norm(mp, alpha), bank.norm(alpha, true), label("norm b", alpha, pair));
      sigma_check(d, closed_form_distance(Metric::D, alpha, m, mp).value, bank.distance(Metric::D, alpha),
                  label("D", alpha, pair));
      sigma_check(l, closed_form_distance(Metric::L, alpha, m, mp).value, bank.distance(Metric::L, alpha),
                  label("L", alpha, pair));
      if (alpha % 2 == 0)
        sigma_check(mk, closed_form_distance(Metric::M, alpha, m, mp).value, bank.distance(Metric::M, alpha),
                    label("M", alpha, pair));
    }
    sigma_check(cs, closed_form_distance(Metric::CS, 2, m, mp).value, bank.distance(Metric::CS, 2),
                label("CS", 2, pair));
    (void)bank_b;
  }
  const double secs = seconds_since(start);
  Outcome out = combine({&norms, &d, &l, &cs, &mk}, "standard-error multiples: ");
  out.pass = out.pass && secs < kMonteCarloSeconds;
  out.detail += "; " + std::to_string(secs) + " s";
  return out;
}

Outcome criterion_spot_checks() {
  Tally t("spot checks");
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  q.abs_tol = 1e-300;

  const Family g = Family::gaussian(1);
  auto normal = [&](double mu) {
    return to_natural(g, GaussianSource{Eigen::VectorXd::Constant(1, mu), Eigen::MatrixXd::Ones(1, 1)});
  };
  const NaturalParameter thetas[] = {normal(0.0), normal(1.0)};
  const double half[] = {0.5, 0.5};
  const double closed_i = std::exp(log_geometric_integral(g, thetas, half));
  const double bp[] = {0.0, 1.0};
  const double quad_i =
      integrate_real_line(
          [&](double x) {
            return std::sqrt(std::exp(log_density(g, thetas[0], x) + log_density(g, thetas[1], x)));
          },
          0.5, 2.0, bp, q)
          .value;
  const double frozen_i = std::exp(-0.125);
  t.check(rel_diff(quad_i, frozen_i) <= kSpotQuadratureTol, rel_diff(quad_i, frozen_i), "quadrature of I");
  t.check(rel_diff(closed_i, quad_i) <= kSpotQuadratureTol, rel_diff(closed_i, quad_i), "I(1/2,1/2)");

  const auto a = MixtureModel::single(Family::bernoulli(), to_natural(Family::bernoulli(), BernoulliSource{0.25}));
  const auto b = MixtureModel::single(Family::bernoulli(), to_natural(Family::bernoulli(), BernoulliSource{0.75}));
  OracleConfig exact;
  const double m2 = closed_form_distance(Metric::M, 2, a, b).value;
  const double m2_enum = oracle_distance(Metric::M, 2, a, b, exact).value;
  t.check(rel_diff(m2_enum, std::sqrt(0.5)) <= kSpotExactTol, rel_diff(m2_enum, std::sqrt(0.5)), "enumerated M2");
  t.check(rel_diff(m2, std::sqrt(0.5)) <= kSpotExactTol, rel_diff(m2, std::sqrt(0.5)), "M2");

  const auto p = MixtureModel::single(g, normal(0.0));
  const double closed_n = mixture_lp_norm(p, 2);
  const double quad_n = std::sqrt(
      integrate_real_line([&](double x) { return std::exp(2.0 * log_density(g, thetas[0], x)); }, 0.0, 2.0, {}, q)
          .value);
  const double frozen_n = 1.0 / std::sqrt(2.0 * std::sqrt(std::numbers::pi));
  t.check(rel_diff(quad_n, frozen_n) <= kSpotQuadratureTol, rel_diff(quad_n, frozen_n), "quadrature of norm");
  t.check(rel_diff(closed_n, quad_n) <= kSpotQuadratureTol, rel_diff(closed_n, quad_n), "norm");
  return combine({&t});
}

Outcome criterion_invariants() {
  const Family families[] = {Family::bernoulli(), Family::multinoulli(4), Family::laplacian(),
                             Family::gaussian(1), Family::gaussian(2),   Family::wishart(2)};
  std::mt19937_64 rng(5005);
  Tally symmetry("symmetry"), scale("L scale invariance"), homog("D/M homogeneity"), identity("identity"),
      nonneg("non-negativity"), triangle("M triangle"), cross("M2 vs inner products");

  for (int trial = 0; trial < 60; ++trial) {
    const Family &fam = families[trial % 6];
    const auto m = random_mixture(fam, 1 + trial % 3, rng);
    const auto mp = random_mixture(fam, 1 + (trial / 3) % 3, rng);
    const std::string where = std::string(to_string(fam.kind)) + " trial " + std::to_string(trial);
    for (unsigned alpha : {2u, 3u, 4u}) {
      for (Metric metric : {Metric::D, Metric::L, Metric::M}) {
        if (metric == Metric::M && alpha % 2 != 0)
          continue;
        const double r = rel_diff(closed_form_distance(metric, alpha, m, mp).value,
                                  closed_form_distance(metric, alpha, mp, m).value);
        symmetry.check(r <= kInvariantRelTol, r, where);
      }
      for (double lambda : {1e-3, 1.0, 1e3}) {
        const auto sm = m.scaled(lambda);
        const auto smp = mp.scaled(lambda);
        const double rl = rel_diff(closed_form_distance(Metric::L, alpha, sm, smp).value,
                                   closed_form_distance(Metric::L, alpha, m, mp).value);
        scale.check(rl <= kInvariantRelTol, rl, where);
        const double rd = rel_diff(closed_form_distance(Metric::D, alpha, sm, smp).value,
                                   lambda * closed_form_distance(Metric::D, alpha, m, mp).value);
        homog.check(rd <= kInvariantRelTol, rd, where);
        if (alpha % 2 == 0) {
          const double rm = rel_diff(closed_form_distance(Metric::M, alpha, sm, smp).value,
                                     lambda * closed_form_distance(Metric::M, alpha, m, mp).value);
          homog.check(rm <= kInvariantRelTol, rm, where);
        }
      }
      for (Metric metric : {Metric::D, Metric::L, Metric::M}) {
        if (metric == Metric::M && alpha % 2 != 0)
          continue;
        const double self = std::abs(closed_form_distance(metric, alpha, m, m).value);
        identity.check(self <= kIdentityAbsTol, self, where);
        const double raw = closed_form_distance(metric, alpha, m, mp).raw;
        nonneg.check(raw >= -kNonNegativeSlack, std::max(0.0, -raw), where);
      }
      const double div = minkowski_diversity(m, alpha).raw;
      nonneg.check(div >= -kNonNegativeSlack, std::max(0.0, -div), where);
    }
    const double cs_self = std::abs(closed_form_distance(Metric::CS, 2, m, m).value);
    identity.check(cs_self <= kIdentityAbsTol, cs_self, where);
    const double cs = closed_form_distance(Metric::CS, 2, m, mp).raw;
    nonneg.check(cs >= -kNonNegativeSlack, std::max(0.0, -cs), where);

    const double m2 = closed_form_distance(Metric::M, 2, m, mp).value;
    const double direct =
        static_cast<double>(wide_inner(m, m) + wide_inner(mp, mp) - 2.0L * wide_inner(m, mp));
    const double rc = rel_diff(m2 * m2, direct);
    cross.check(rc <= kInvariantRelTol, rc, where);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const Family &fam = families[trial % 6];
    const auto a = random_mixture(fam, 1 + trial % 2, rng);
    const auto b = random_mixture(fam, 1 + (trial / 2) % 2, rng);
    const auto c = random_mixture(fam, 1 + (trial / 4) % 2, rng);
    for (unsigned alpha : {2u, 4u}) {
      const double ac = closed_form_distance(Metric::M, alpha, a, c).value;
      const double ab = closed_form_distance(Metric::M, alpha, a, b).value;
      const double bc = closed_form_distance(Metric::M, alpha, b, c).value;
      const double excess = ac - ab - bc;
      triangle.check(excess <= kTriangleSlack, std::max(0.0, excess),
                     std::string(to_string(fam.kind)) + " alpha=" + std::to_string(alpha) + " triple " +
                         std::to_string(trial));
    }
  }
  return combine({&symmetry, &scale, &homog, &identity, &nonneg, &triangle, &cross});
}

Outcome criterion_combinatorics() {
  Tally counts("counts"), sums("coefficient sums"), pascal("Pascal recurrence"), logs("log coefficients");
  PascalSimplex simplex;
  const LogFactorials table(64);
  for (unsigned k = 1; k <= 6; ++k) {
    for (unsigned alpha = 0; alpha <= 8; ++alpha) {
      const auto all = enumerate_compositions(alpha, k);
      std::set<std::vector<unsigned>> distinct;
      for (const auto &c : all)
        distinct.insert(c.parts);
      const std::string where = "k=" + std::to_string(k) + " alpha=" + std::to_string(alpha);
      const bool count_ok = BigInt(all.size()) == binomial(k + alpha - 1, alpha) && distinct.size() == all.size();
      counts.check(count_ok, count_ok ? 0.0 : 1.0, where);

      BigInt total = 0;
      for (const auto &c : all) {
        const BigInt coeff = simplex.coefficient(c.parts);
        total += coeff;
        if (alpha > 0) {
          BigInt recurrence = 0;
          for (unsigned i = 0; i < k; ++i) {
            if (c.parts[i] == 0)
              continue;
            auto lowered = c.parts;
            --lowered[i];
            recurrence += simplex.coefficient(lowered);
          }
          pascal.check(recurrence == coeff, recurrence == coeff ? 0.0 : 1.0, where);
        }
        const bool exact_ok = coeff == multinomial_coeff_exact(c.parts);
        const double log_exact = std::log(static_cast<double>(coeff));
        const double err = std::max(std::abs(multinomial_coeff_log(c.parts) - log_exact),
                                    std::abs(table.multinomial(c.parts) - log_exact)) /
                           std::max(1.0, std::abs(log_exact));
        logs.check(exact_ok && err <= kCombinatoricsLogTol, err, where);
      }
      if (k <= 5) {
        const bool sum_ok = total == boost::multiprecision::pow(BigInt(k), alpha);
        sums.check(sum_ok, sum_ok ? 0.0 : 1.0, where);
      }
    }
  }
  return combine({&counts, &sums, &pascal, &logs});
}

Outcome criterion_determinism() {
  const Family families[] = {Family::bernoulli(), Family::multinoulli(5), Family::laplacian(),
                             Family::gaussian(1), Family::gaussian(2),   Family::wishart(2)};
  std::mt19937_64 rng(7007);
  Tally closed("closed-form"), mc("Monte Carlo");
  ExecutionConfig one;
  one.chunk_size = 64;
  ExecutionConfig four = one;
  four.workers = 4;
  for (int trial = 0; trial < 12; ++trial) {
    const Family &fam = families[trial % 6];
    const auto m = random_mixture(fam, 4, rng);
    const auto mp = random_mixture(fam, 4, rng);
    const std::string where = std::string(to_string(fam.kind)) + " trial " + std::to_string(trial);
    auto compare = [&](double a, double b, double c) {
      const double r = std::max(rel_diff(a, b), rel_diff(a, c));
      closed.check(r <= kDeterminismRelTol, r, where);
    };
    compare(mixture_lp_norm(m, 6, one), mixture_lp_norm(m, 6, four), mixture_lp_norm(m, 6, one));
    for (Metric metric : {Metric::M, Metric::D, Metric::L}) {
      compare(closed_form_distance(metric, 4, m, mp, one).value, closed_form_distance(metric, 4, m, mp, four).value,
              closed_form_distance(metric, 4, m, mp, one).value);
    }
    compare(minkowski_diversity(m, 5, one).value, minkowski_diversity(m, 5, four).value,
            minkowski_diversity(m, 5, one).value);

    OracleConfig cfg;
    cfg.method = OracleMethod::MonteCarlo;
    cfg.samples = 100'000;
    cfg.chunk_size = 4096;
    const auto first = oracle_distance(Metric::D, 3.0, m, mp, cfg);
    const auto again = oracle_distance(Metric::D, 3.0, m, mp, cfg);
    cfg.workers = 4;
    const auto parallel = oracle_distance(Metric::D, 3.0, m, mp, cfg);
    const bool identical = first.value == again.value && first.value == parallel.value &&
                           first.std_error == again.std_error && first.std_error == parallel.std_error;
    mc.check(identical, identical ? 0.0 : std::max(rel_diff(first.value, again.value), rel_diff(first.value, parallel.value)),
             where);
  }
  return combine({&closed, &mc});
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 exact-oracle equivalence (discrete, rel 1e-10, < 10 s)", criterion_discrete},
      {"2 quadrature equivalence (1-D continuous, rel 1e-8, < 60 s)", criterion_quadrature},
      {"3 Monte Carlo equivalence (Gaussian d=2, Wishart d=2, 3 SE at 1e6 samples, < 5 min)", criterion_monte_carlo},
      {"4 known-value spot checks", criterion_spot_checks},
      {"5 invariant suite", criterion_invariants},
      {"6 combinatorics suite", criterion_combinatorics},
      {"7 determinism across runs and worker counts", criterion_determinism},
  };
  bool all = true;
  for (const auto &c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
