#pragma once

#include <functional>
#include <span>

namespace mink {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
};

/// Globally adaptive 15-point Gauss–Kronrod on [a, b], always bisecting the
/// panel with the largest error estimate. Throws OracleError when the
/// tolerance is not met within `max_subdivisions` bisections.
[[nodiscard]] QuadratureResult integrate_interval(const std::function<double(double)> &f, double a, double b,
                                                  std::span<const double> breakpoints,
                                                  const QuadratureOptions &opts);

/// ∫_ℝ f(x) dx through x = center + scale · atanh(u), u ∈ (-1, 1). Points in
/// `breakpoints` (given in x) start as panel boundaries, which is where kinks
/// and peaks of the integrand should go.
[[nodiscard]] QuadratureResult integrate_real_line(const std::function<double(double)> &f, double center,
                                                   double scale, std::span<const double> breakpoints,
                                                   const QuadratureOptions &opts);

struct WideQuadratureResult {
  long double value = 0.0L;
  long double error = 0.0L;
  int subdivisions = 0;
};

/// Extended-precision variants of the two routines above, for oracle
/// quantities assembled from differences of integrals.
[[nodiscard]] WideQuadratureResult integrate_interval_wide(const std::function<long double(long double)> &f,
                                                           long double a, long double b,
                                                           std::span<const long double> breakpoints,
                                                           const QuadratureOptions &opts);
[[nodiscard]] WideQuadratureResult integrate_real_line_wide(const std::function<long double(long double)> &f,
                                                            long double center, long double scale,
                                                            std::span<const long double> breakpoints,
                                                            const QuadratureOptions &opts);

} // namespace mink
