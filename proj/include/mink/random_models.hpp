#pragma once

#include "mink/minkdist.hpp"

#include <random>

namespace mink {

/// Draws a random source parameter for `fam` from a moderate range
/// (probabilities away from 0 and 1, well-conditioned matrices).
[[nodiscard]] SourceParameter random_source(const Family &fam, std::mt19937_64 &rng);

/// Random mixture with `k` components and weights normalized to one.
[[nodiscard]] MixtureModel random_mixture(const Family &fam, int k, std::mt19937_64 &rng);

} // namespace mink
