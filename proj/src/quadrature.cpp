#include "mink/quadrature.hpp"

#include "mink/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace mink {

namespace {

template <typename T> struct Panel {
  T a;
  T b;
  T value;
  T error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

// One G7/K15 pair on [a, b]. Abscissae are stored for [0, 1); the Gauss
// nodes sit at the even indices because the Gauss order is odd.
template <typename T> Panel<T> panel(const std::function<T(T)> &f, T a, T b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<T, 15>;
  using Gauss = boost::math::quadrature::gauss<T, 7>;
  const auto &xk = Kronrod::abscissa();
  const auto &wk = Kronrod::weights();
  const auto &wg = Gauss::weights();
  const T half = (b - a) / 2;
  const T mid = (a + b) / 2;
  const T f0 = f(mid);
  T kronrod = f0 * wk[0];
  T gauss = f0 * wg[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const T fp = f(mid + half * xk[i]);
    const T fm = f(mid - half * xk[i]);
    kronrod += (fp + fm) * wk[i];
    if (i % 2 == 0)
      gauss += (fp + fm) * wg[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  const T floor = 2 * std::numeric_limits<T>::epsilon() * std::abs(kronrod);
  return {a, b, kronrod, std::max(std::abs(kronrod - gauss), floor)};
}

template <typename T>
QuadratureResult integrate_interval_impl(const std::function<T(T)> &f, T a, T b, std::span<const T> breakpoints,
                                         const QuadratureOptions &opts, T &value, T &error) {
  std::vector<T> edges{a};
  for (T p : breakpoints)
    if (p > a && p < b)
      edges.push_back(p);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel<T>> queue;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    queue.push(panel<T>(f, edges[i], edges[i + 1]));

  QuadratureResult out;
  for (;;) {
    // Re-sum from scratch so the totals do not drift.
    T total = 0;
    T err = 0;
    auto copy = queue;
    while (!copy.empty()) {
      total += copy.top().value;
      err += copy.top().error;
      copy.pop();
    }
    value = total;
    error = err;
    out.value = static_cast<double>(total);
    out.error = static_cast<double>(err);
    if (!std::isfinite(total))
      throw OracleError("quadrature produced a non-finite value");
    if (err <= std::max(static_cast<T>(opts.abs_tol), static_cast<T>(opts.rel_tol) * std::abs(total)))
      return out;
    if (out.subdivisions >= opts.max_subdivisions)
      throw OracleError("quadrature did not converge within " + std::to_string(opts.max_subdivisions) +
                        " subdivisions (estimate " + std::to_string(out.value) + ", error " +
                        std::to_string(out.error) + ")");
    // Bisect a batch of the worst panels before re-summing.
    const std::size_t batch = std::max<std::size_t>(1, queue.size() / 8);
    for (std::size_t n = 0; n < batch && out.subdivisions < opts.max_subdivisions; ++n) {
      const Panel<T> worst = queue.top();
      const T m = (worst.a + worst.b) / 2;
      if (!(m > worst.a && m < worst.b))
        throw OracleError("quadrature panel cannot be subdivided further");
      queue.pop();
      queue.push(panel<T>(f, worst.a, m));
      queue.push(panel<T>(f, m, worst.b));
      ++out.subdivisions;
    }
  }
}

template <typename T>
QuadratureResult integrate_real_line_impl(const std::function<T(T)> &f, T center, T scale,
                                          std::span<const T> breakpoints, const QuadratureOptions &opts, T &value,
                                          T &error) {
  if (!(scale > 0))
    throw OracleError("quadrature scale must be positive");
  const std::function<T(T)> mapped = [&](T u) -> T {
    const T one_minus_u2 = (1 - u) * (1 + u);
    if (one_minus_u2 <= 0)
      return 0;
    const T x = center + scale * std::atanh(u);
    if (!std::isfinite(x))
      return 0;
    const T v = f(x);
    return v == 0 ? T(0) : v * scale / one_minus_u2;
  };
  std::vector<T> ubreaks;
  ubreaks.reserve(breakpoints.size());
  for (T x : breakpoints)
    ubreaks.push_back(std::tanh((x - center) / scale));
  return integrate_interval_impl<T>(mapped, T(-1), T(1), ubreaks, opts, value, error);
}

} // namespace

QuadratureResult integrate_interval(const std::function<double(double)> &f, double a, double b,
                                    std::span<const double> breakpoints, const QuadratureOptions &opts) {
  double value = 0.0;
  double error = 0.0;
  return integrate_interval_impl<double>(f, a, b, breakpoints, opts, value, error);
}

QuadratureResult integrate_real_line(const std::function<double(double)> &f, double center, double scale,
                                     std::span<const double> breakpoints, const QuadratureOptions &opts) {
  double value = 0.0;
  double error = 0.0;
  return integrate_real_line_impl<double>(f, center, scale, breakpoints, opts, value, error);
}

WideQuadratureResult integrate_interval_wide(const std::function<long double(long double)> &f, long double a,
                                             long double b, std::span<const long double> breakpoints,
                                             const QuadratureOptions &opts) {
  WideQuadratureResult out;
  out.subdivisions = integrate_interval_impl<long double>(f, a, b, breakpoints, opts, out.value, out.error).subdivisions;
  return out;
}

WideQuadratureResult integrate_real_line_wide(const std::function<long double(long double)> &f, long double center,
                                              long double scale, std::span<const long double> breakpoints,
                                              const QuadratureOptions &opts) {
  WideQuadratureResult out;
  out.subdivisions =
      integrate_real_line_impl<long double>(f, center, scale, breakpoints, opts, out.value, out.error).subdivisions;
  return out;
}

} // namespace mink
