#include "mink/random_models.hpp"

namespace mink {

namespace {

Eigen::MatrixXd random_spd(int d, double jitter, double spread, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, spread);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a(i, j) = normal(rng);
  Eigen::MatrixXd s = a * a.transpose() + jitter * Eigen::MatrixXd::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

} // namespace

SourceParameter random_source(const Family &fam, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (fam.kind) {
  case FamilyKind::Bernoulli:
    return BernoulliSource{0.05 + 0.9 * unit(rng)};
  case FamilyKind::Multinoulli: {
    Eigen::VectorXd p(fam.dim);
    for (int i = 0; i < fam.dim; ++i)
      p[i] = 0.05 + unit(rng);
    p /= p.sum();
    return MultinoulliSource{p};
  }
  case FamilyKind::Laplacian:
    return LaplacianSource{0.5 + 2.5 * unit(rng)};
  case FamilyKind::Gaussian: {
    Eigen::VectorXd mu(fam.dim);
    for (int i = 0; i < fam.dim; ++i)
      mu[i] = -2.0 + 4.0 * unit(rng);
    return GaussianSource{mu, random_spd(fam.dim, 0.4, 0.6, rng)};
  }
  case FamilyKind::Wishart:
    return WishartSource{fam.dim + 2.0 + 5.0 * unit(rng), random_spd(fam.dim, 0.2, 0.4, rng)};
  }
  return BernoulliSource{0.5};
}

MixtureModel random_mixture(const Family &fam, int k, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Component> comps;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = 0.2 + unit(rng);
    total += w;
    comps.push_back({w, to_natural(fam, random_source(fam, rng))});
  }
  for (auto &c : comps)
    c.weight /= total;
  return MixtureModel(fam, std::move(comps));
}

} // namespace mink
