#include "mink/spec_io.hpp"

#include "mink/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mink {

namespace {

using nlohmann::json;

constexpr double kSymmetryTolerance = 1e-12;

std::string key_path(const std::string &base, const std::string &key) { return base.empty() ? key : base + "." + key; }

void reject_unknown(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
  for (const auto &item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char *k) { return item.key() == k; }))
      throw SpecError(key_path(where, item.key()), "unknown field");
  }
}

const json &member(const json &obj, const std::string &where, const char *key) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw SpecError(key_path(where, key), "missing field");
  return *it;
}

double number(const json &value, const std::string &where) {
  if (!value.is_number())
    throw SpecError(where, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x))
    throw SpecError(where, "expected a finite number");
  return x;
}

Eigen::VectorXd vector_of(const json &value, const std::string &where, Eigen::Index size) {
  if (size == 1 && value.is_number())
    return Eigen::VectorXd::Constant(1, number(value, where));
  if (!value.is_array())
    throw SpecError(where, "expected an array of " + std::to_string(size) + " numbers");
  if (static_cast<Eigen::Index>(value.size()) != size)
    throw SpecError(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(value.size()));
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v[i] = number(value[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd matrix_of(const json &value, const std::string &where, Eigen::Index side) {
  Eigen::MatrixXd a(side, side);
  if (value.is_array() && !value.empty() && value[0].is_array()) {
    if (static_cast<Eigen::Index>(value.size()) != side)
      throw SpecError(where, "expected " + std::to_string(side) + " rows");
    for (Eigen::Index r = 0; r < side; ++r)
      a.row(r) = vector_of(value[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]", side);
  } else {
    const Eigen::VectorXd flat = vector_of(value, where, side * side);
    for (Eigen::Index r = 0; r < side; ++r)
      for (Eigen::Index c = 0; c < side; ++c)
        a(r, c) = flat[r * side + c];
  }
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale)
    throw SpecError(where, "matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  return 0.5 * (a + a.transpose());
}

Family parse_family(const json &doc) {
  const json &fam = member(doc, "", "family");
  if (!fam.is_object())
    throw SpecError("family", "expected an object with kind and dim");
  reject_unknown(fam, "family", {"kind", "dim"});
  const json &kind = member(fam, "family", "kind");
  if (!kind.is_string())
    throw SpecError("family.kind", "expected a string");
  const auto name = kind.get<std::string>();
  int dim = 1;
  if (const auto it = fam.find("dim"); it != fam.end()) {
    if (!it->is_number_integer())
      throw SpecError("family.dim", "expected an integer");
    dim = it->get<int>();
  }
  Family out{};
  if (name == "bernoulli")
    out = Family::bernoulli();
  else if (name == "multinoulli")
    out = Family{FamilyKind::Multinoulli, dim};
  else if (name == "laplacian")
    out = Family::laplacian();
  else if (name == "gaussian")
    out = Family{FamilyKind::Gaussian, dim};
  else if (name == "wishart")
    out = Family{FamilyKind::Wishart, dim};
  else
    throw SpecError("family.kind", "unknown family '" + name + "'");
  if (fam.contains("dim") && out.dim != dim)
    throw SpecError("family.dim", name + " has dimension " + std::to_string(out.dim));
  try {
    out.validate();
  } catch (const ParameterDomainError &e) {
    throw SpecError("family.dim", e.what());
  }
  return out;
}

SourceParameter parse_source(const Family &fam, const json &params, const std::string &where) {
  switch (fam.kind) {
  case FamilyKind::Bernoulli:
    reject_unknown(params, where, {"lambda"});
    return BernoulliSource{number(member(params, where, "lambda"), key_path(where, "lambda"))};
  case FamilyKind::Multinoulli:
    reject_unknown(params, where, {"lambda"});
    return MultinoulliSource{vector_of(member(params, where, "lambda"), key_path(where, "lambda"), fam.dim)};
  case FamilyKind::Laplacian:
    reject_unknown(params, where, {"sigma"});
    return LaplacianSource{number(member(params, where, "sigma"), key_path(where, "sigma"))};
  case FamilyKind::Gaussian:
    reject_unknown(params, where, {"mu", "sigma"});
    return GaussianSource{vector_of(member(params, where, "mu"), key_path(where, "mu"), fam.dim),
                          matrix_of(member(params, where, "sigma"), key_path(where, "sigma"), fam.dim)};
  case FamilyKind::Wishart:
    reject_unknown(params, where, {"n", "S"});
    return WishartSource{number(member(params, where, "n"), key_path(where, "n")),
                         matrix_of(member(params, where, "S"), key_path(where, "S"), fam.dim)};
  }
  throw InternalInvariantError("unknown family kind");
}

NaturalParameter parse_natural(const Family &fam, const json &params, const std::string &where) {
  NaturalParameter theta;
  if (fam.has_scalar()) {
    reject_unknown(params, where, {"theta_s", "theta_M"});
    theta.scalar = number(member(params, where, "theta_s"), key_path(where, "theta_s"));
  } else if (fam.matrix_side() > 0) {
    reject_unknown(params, where, {"theta_v", "theta_M"});
  } else {
    reject_unknown(params, where, {"theta_v"});
  }
  if (fam.vector_size() > 0)
    theta.vec = vector_of(member(params, where, "theta_v"), key_path(where, "theta_v"), fam.vector_size());
  if (fam.matrix_side() > 0)
    theta.mat = matrix_of(member(params, where, "theta_M"), key_path(where, "theta_M"), fam.matrix_side());
  if (!in_cone(fam, theta))
    throw SpecError(where, "natural parameter lies outside the cone of the " + std::string(to_string(fam.kind)) +
                               " family");
  return theta;
}

// 1-based line of a byte offset, for syntax errors.
std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json row_major(const Eigen::MatrixXd &a) {
  json out = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.push_back(a(r, c));
  return out;
}

json vector_json(const Eigen::VectorXd &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v[i]);
  return out;
}

json source_json(const SourceParameter &src) {
  return std::visit(
      [](const auto &s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BernoulliSource>)
          return {{"lambda", s.lambda}};
        else if constexpr (std::is_same_v<T, MultinoulliSource>)
          return {{"lambda", vector_json(s.probs)}};
        else if constexpr (std::is_same_v<T, LaplacianSource>)
          return {{"sigma", s.sigma}};
        else if constexpr (std::is_same_v<T, GaussianSource>)
          return {{"mu", vector_json(s.mean)}, {"sigma", row_major(s.cov)}};
        else
          return {{"n", s.dof}, {"S", row_major(s.scale)}};
      },
      src);
}

json natural_json(const Family &fam, const NaturalParameter &theta) {
  json out = json::object();
  if (fam.has_scalar())
    out["theta_s"] = theta.scalar;
  if (fam.vector_size() > 0)
    out["theta_v"] = vector_json(theta.vec);
  if (fam.matrix_side() > 0)
    out["theta_M"] = row_major(theta.mat);
  return out;
}

} // namespace

MixtureModel parse_mixture_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw SpecError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)), "invalid JSON");
  }
  if (!doc.is_object())
    throw SpecError("line 1", "expected a JSON object");
  reject_unknown(doc, "", {"family", "parameterization", "components"});

  const Family fam = parse_family(doc);
  Parameterization form = Parameterization::Source;
  if (const auto it = doc.find("parameterization"); it != doc.end()) {
    if (*it == "source")
      form = Parameterization::Source;
    else if (*it == "natural")
      form = Parameterization::Natural;
    else
      throw SpecError("parameterization", "expected \"source\" or \"natural\"");
  }

  const json &list = member(doc, "", "components");
  if (!list.is_array() || list.empty())
    throw SpecError("components", "expected a non-empty array");
  std::vector<Component> comps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "components[" + std::to_string(i) + "]";
    const json &item = list[i];
    if (!item.is_object())
      throw SpecError(where, "expected an object with weight and params");
    reject_unknown(item, where, {"weight", "params"});
    const double weight = number(member(item, where, "weight"), key_path(where, "weight"));
    if (!(weight > 0.0))
      throw SpecError(key_path(where, "weight"), "weights must be positive");
    const std::string params_where = key_path(where, "params");
    const json &params = member(item, where, "params");
    if (!params.is_object())
      throw SpecError(params_where, "expected an object");
    NaturalParameter theta;
    if (form == Parameterization::Source) {
      const SourceParameter src = parse_source(fam, params, params_where);
      try {
        theta = to_natural(fam, src);
      } catch (const ParameterDomainError &e) {
        std::string message = e.what();
        if (message.starts_with(e.field() + ": "))
          message.erase(0, e.field().size() + 2);
        throw SpecError(key_path(params_where, e.field()), message);
      }
    } else {
      theta = parse_natural(fam, params, params_where);
    }
    comps.push_back({weight, std::move(theta)});
  }
  return MixtureModel(fam, std::move(comps));
}

MixtureModel load_mixture_spec(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw SpecError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mixture_spec(buf.str());
}

std::string write_mixture_spec(const MixtureModel &m, Parameterization form) {
  const Family &fam = m.family();
  json doc;
  doc["family"] = {{"kind", std::string(to_string(fam.kind))}, {"dim", fam.dim}};
  doc["parameterization"] = form == Parameterization::Source ? "source" : "natural";
  json list = json::array();
  for (const auto &c : m.components()) {
    json params =
        form == Parameterization::Source ? source_json(from_natural(fam, c.theta)) : natural_json(fam, c.theta);
    list.push_back({{"weight", c.weight}, {"params", std::move(params)}});
  }
  doc["components"] = std::move(list);
  return doc.dump(2) + "\n";
}

} // namespace mink
