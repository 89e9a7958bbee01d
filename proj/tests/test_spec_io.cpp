#include "mink/errors.hpp"
#include "mink/random_models.hpp"
#include "mink/spec_io.hpp"

#include <doctest.h>

#include <random>

using namespace mink;

namespace {

std::string where_of(const std::string &text) {
  try {
    (void)parse_mixture_spec(text);
  } catch (const SpecError &e) {
    return e.where();
  }
  return "<no error>";
}

bool same_model(const MixtureModel &a, const MixtureModel &b, double tol) {
  if (!(a.family() == b.family()) || a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &x = a.components()[i];
    const auto &y = b.components()[i];
    auto close = [tol](double u, double v) { return std::abs(u - v) <= tol * std::max(1.0, std::abs(u)); };
    if (!close(x.weight, y.weight) || !close(x.theta.scalar, y.theta.scalar))
      return false;
    for (Eigen::Index j = 0; j < x.theta.vec.size(); ++j)
      if (!close(x.theta.vec[j], y.theta.vec[j]))
        return false;
    for (Eigen::Index j = 0; j < x.theta.mat.size(); ++j)
      if (!close(x.theta.mat.data()[j], y.theta.mat.data()[j]))
        return false;
  }
  return true;
}

} // namespace

TEST_CASE("source documents for every family") {
  const auto b = parse_mixture_spec(R"({"family": {"kind": "bernoulli"},
    "components": [{"weight": 0.5, "params": {"lambda": 0.25}}, {"weight": 0.5, "params": {"lambda": 0.75}}]})");
  CHECK(b.size() == 2);
  CHECK(b.normalized());

  const auto mn = parse_mixture_spec(R"({"family": {"kind": "multinoulli", "dim": 3},
    "components": [{"weight": 1, "params": {"lambda": [0.2, 0.3, 0.5]}}]})");
  CHECK(mn.components()[0].theta.vec.size() == 2);

  const auto lap = parse_mixture_spec(R"({"family": {"kind": "laplacian"},
    "components": [{"weight": 2, "params": {"sigma": 0.5}}]})");
  CHECK(lap.components()[0].theta.vec[0] == -2.0);
  CHECK_FALSE(lap.normalized());

  const auto g = parse_mixture_spec(R"({"family": {"kind": "gaussian", "dim": 2}, "parameterization": "source",
    "components": [{"weight": 1, "params": {"mu": [1, 2], "sigma": [[2, 0], [0, 4]]}}]})");
  CHECK(g.components()[0].theta.mat(1, 1) == 0.25);
  CHECK(g.components()[0].theta.vec[1] == 0.5);

  const auto w = parse_mixture_spec(R"({"family": {"kind": "wishart", "dim": 2},
    "components": [{"weight": 1, "params": {"n": 5, "S": [1, 0, 0, 1]}}]})");
  CHECK(w.components()[0].theta.scalar == 1.0);
}

TEST_CASE("natural documents") {
  const auto g = parse_mixture_spec(R"({"family": {"kind": "gaussian", "dim": 1}, "parameterization": "natural",
    "components": [{"weight": 1, "params": {"theta_v": [0], "theta_M": [1]}}]})");
  CHECK(g.components()[0].theta.mat(0, 0) == 1.0);
  CHECK(where_of(R"({"family": {"kind": "laplacian"}, "parameterization": "natural",
    "components": [{"weight": 1, "params": {"theta_v": 1}}]})") == "components[0].params");
}

TEST_CASE("errors name the field") {
  CHECK(where_of(R"({"family": {"kind": "gaussian", "dim": 2}, "components": [
    {"weight": 1, "params": {"mu": [0, 0], "sigma": [1, 0, 0, 1]}},
    {"weight": 1, "params": {"mu": [0, 0], "sigma": [1, 2, 2, 1]}}]})") == "components[1].params.sigma");
  CHECK(where_of(R"({"family": {"kind": "gaussian", "dim": 2}, "components": [
    {"weight": 1, "params": {"mu": [0, 0], "sigma": [1, 0.5, 0, 1]}}]})") == "components[0].params.sigma");
  CHECK(where_of(R"({"family": {"kind": "bernoulli"}, "components": [{"weight": -1, "params": {"lambda": 0.5}}]})") ==
        "components[0].weight");
  CHECK(where_of(R"({"family": {"kind": "bernoulli"}, "components": [{"weight": 1, "params": {"lamda": 0.5}}]})") ==
        "components[0].params.lamda");
  CHECK(where_of(R"({"family": {"kind": "bernoulli"}, "components": [{"weight": 1, "params": {}}]})") ==
        "components[0].params.lambda");
  CHECK(where_of(R"({"family": {"kind": "poisson"}, "components": []})") == "family.kind");
  CHECK(where_of(R"({"family": {"kind": "bernoulli"}, "components": []})") == "components");
  CHECK(where_of(R"({"family": {"kind": "gaussian", "dim": 2}, "components": [
    {"weight": 1, "params": {"mu": [0, 0, 0], "sigma": [1, 0, 0, 1]}}]})") == "components[0].params.mu");
  CHECK(where_of(R"({"family": {"kind": "wishart", "dim": 2}, "components": [
    {"weight": 1, "params": {"n": 2, "S": [1, 0, 0, 1]}}]})") == "components[0].params.n");
  CHECK(where_of("{\"family\": {\"kind\": \"bernoulli\"},\n\"components\": [\n{\"weight\": 1,}]}") == "line 3");
  CHECK_THROWS_AS((void)load_mixture_spec("/nonexistent/spec.json"), SpecError);
}

TEST_CASE("tiny asymmetry is symmetrized") {
  const auto g = parse_mixture_spec(R"({"family": {"kind": "gaussian", "dim": 2}, "components": [
    {"weight": 1, "params": {"mu": [0, 0], "sigma": [2, 0.5, 0.5000000000000001, 1]}}]})");
  const auto &m = g.components()[0].theta.mat;
  CHECK(m(0, 1) == m(1, 0));
}

TEST_CASE("source to natural round-trip reproduces the mixture") {
  std::mt19937_64 rng(8);
  const Family families[] = {Family::bernoulli(), Family::multinoulli(4), Family::laplacian(), Family::gaussian(3),
                             Family::wishart(2)};
  for (int trial = 0; trial < 50; ++trial) {
    const Family &fam = families[trial % 5];
    const auto m = random_mixture(fam, 1 + trial % 3, rng);
    const auto from_source = parse_mixture_spec(write_mixture_spec(m, Parameterization::Source));
    const auto natural = parse_mixture_spec(write_mixture_spec(from_source, Parameterization::Natural));
    CHECK(same_model(m, from_source, 1e-12));
    CHECK(same_model(from_source, natural, 1e-12));
  }
}
