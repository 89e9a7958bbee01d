#pragma once

#include "mink/minkdist.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mink {

enum class Parameterization { Source, Natural };

/// Reads a JSON mixture document:
///
///     {"family": {"kind": "gaussian", "dim": 2},
///      "parameterization": "source",
///      "components": [{"weight": 0.5, "params": {"mu": [0, 0], "sigma": [1, 0, 0, 1]}}]}
///
/// Source params: bernoulli `lambda`; multinoulli `lambda` (probability
/// vector); laplacian `sigma`; gaussian `mu` and row-major `sigma`; wishart
/// `n` and row-major `S`. Natural params: `theta_s`, `theta_v`, `theta_M`
/// as the family requires. Matrices may also be given as nested rows.
/// Throws SpecError naming the offending line or field.
[[nodiscard]] MixtureModel parse_mixture_spec(std::string_view text);

/// parse_mixture_spec on a file; unreadable files raise SpecError.
[[nodiscard]] MixtureModel load_mixture_spec(const std::filesystem::path &path);

/// Serializes `m` in the chosen parameterization; the output parses back to
/// the same mixture.
[[nodiscard]] std::string write_mixture_spec(const MixtureModel &m, Parameterization form);

} // namespace mink
