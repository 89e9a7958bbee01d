#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace mink {

/// Extended precision for closed-form accumulations (80-bit on x86).
using WideReal = long double;

/// IEEE quad precision in software. Closed-form results whose extended
/// precision accumulation cancelled too far to trust are recomputed in it.
using QuadReal = boost::multiprecision::cpp_bin_float_quad;

} // namespace mink
