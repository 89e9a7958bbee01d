#include "mink/signed_log.hpp"

#include <algorithm>
#include <vector>

namespace mink {

namespace {

template <typename T> T neg_inf() { return -std::numeric_limits<T>::infinity(); }

// Neumaier-compensated sum.
template <typename T> class CompensatedSum {
public:
  void add(T x) noexcept {
    using std::abs;
    const T t = sum_ + x;
    if (abs(sum_) >= abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] T value() const noexcept { return sum_ + comp_; }

private:
  T sum_ = 0;
  T comp_ = 0;
};

template <typename T, typename Logs> T pooled_log(const Logs &logs) noexcept {
  using std::exp;
  using std::isinf;
  using std::log;
  T mx = neg_inf<T>();
  for (T l : logs)
    mx = std::max(mx, l);
  if (mx == neg_inf<T>())
    return neg_inf<T>();
  if (isinf(mx))
    return mx;
  CompensatedSum<T> acc;
  for (T l : logs)
    if (l != neg_inf<T>())
      acc.add(exp(T(l - mx)));
  return mx + log(acc.value());
}

} // namespace

template <typename T> T log_add(T a, T b) noexcept {
  using std::exp;
  using std::log1p;
  if (a == neg_inf<T>())
    return b;
  if (b == neg_inf<T>())
    return a;
  const T mx = std::max(a, b);
  return mx + log1p(exp(T(std::min(a, b) - mx)));
}

template <typename T> T log_sum_exp(std::span<const T> logs) noexcept { return pooled_log<T>(logs); }

template <typename T> BasicSignedPools<T> reduce_terms(std::span<const BasicSignedLogValue<T>> terms) noexcept {
  using std::exp;
  using std::log;
  T max_pos = neg_inf<T>();
  T max_neg = neg_inf<T>();
  for (const auto &t : terms) {
    if (t.sign > 0)
      max_pos = std::max(max_pos, t.log_mag);
    else if (t.sign < 0)
      max_neg = std::max(max_neg, t.log_mag);
  }
  CompensatedSum<T> pos;
  CompensatedSum<T> neg;
  for (const auto &t : terms) {
    if (t.sign > 0)
      pos.add(exp(T(t.log_mag - max_pos)));
    else if (t.sign < 0)
      neg.add(exp(T(t.log_mag - max_neg)));
  }
  BasicSignedPools<T> out;
  if (max_pos != neg_inf<T>())
    out.log_pos = max_pos + log(pos.value());
  if (max_neg != neg_inf<T>())
    out.log_neg = max_neg + log(neg.value());
  return out;
}

template <typename T> BasicSignedPools<T> merge_pools(std::span<const BasicSignedPools<T>> parts) noexcept {
  std::vector<T> pos;
  std::vector<T> neg;
  pos.reserve(parts.size());
  neg.reserve(parts.size());
  for (const auto &p : parts) {
    pos.push_back(p.log_pos);
    neg.push_back(p.log_neg);
  }
  return {pooled_log<T>(pos), pooled_log<T>(neg)};
}

template <typename T> BasicSignedSum<T> finalize(const BasicSignedPools<T> &pools, double residue) noexcept {
  using std::exp;
  using std::log;
  using std::log1p;
  BasicSignedSum<T> out;
  out.log_positive = pools.log_pos;
  out.log_negative = pools.log_neg;
  const T lp = pools.log_pos;
  const T ln = pools.log_neg;
  if (lp == neg_inf<T>() && ln == neg_inf<T>())
    return out;
  if (ln == neg_inf<T>()) {
    out.value = BasicSignedLogValue<T>::from_log(lp, 1);
    return out;
  }
  if (lp == neg_inf<T>()) {
    out.value = BasicSignedLogValue<T>::from_log(ln, -1);
    return out;
  }
  const T hi = std::max(lp, ln);
  const T lo = std::min(lp, ln);
  const T ratio = exp(T(lo - hi));
  if (ratio == T(1)) {
    out.cancelled = true;
    return out;
  }
  const T log_diff = hi + log1p(T(-ratio));
  if (log_diff < lp + log(static_cast<T>(residue))) {
    out.cancelled = true;
    return out;
  }
  out.value = BasicSignedLogValue<T>::from_log(log_diff, lp > ln ? 1 : -1);
  return out;
}

#define MINK_INSTANTIATE_SIGNED_LOG(T)                                                                      \
  template T log_add<T>(T, T) noexcept;                                                                  \
  template T log_sum_exp<T>(std::span<const T>) noexcept;                                                \
  template BasicSignedPools<T> reduce_terms<T>(std::span<const BasicSignedLogValue<T>>) noexcept;        \
  template BasicSignedPools<T> merge_pools<T>(std::span<const BasicSignedPools<T>>) noexcept;            \
  template BasicSignedSum<T> finalize<T>(const BasicSignedPools<T> &, double) noexcept;

MINK_INSTANTIATE_SIGNED_LOG(double)
MINK_INSTANTIATE_SIGNED_LOG(WideReal)
MINK_INSTANTIATE_SIGNED_LOG(QuadReal)

} // namespace mink
