#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>

namespace rma {

/// Nonnegative real stored as its natural logarithm. The default value is an
/// exact zero (log = -inf). Every finite-length probability and expected
/// count in the library is carried in this form until the final exponent is
/// read off.
class LogReal {
 public:
  constexpr LogReal() = default;

  static constexpr LogReal zero() { return LogReal{}; }
  static constexpr LogReal one() { return from_log(0.0); }

  static constexpr LogReal from_log(double log_value) {
    LogReal r;
    r.log_ = log_value;
    return r;
  }

  static LogReal from_value(double value) {
    if (value < 0.0 || std::isnan(value)) {
      throw std::domain_error("LogReal: negative or NaN magnitude");
    }
    return from_log(std::log(value));
  }

  constexpr double log() const { return log_; }
  double value() const { return std::exp(log_); }
  constexpr bool is_zero() const {
    return log_ == -std::numeric_limits<double>::infinity();
  }

  friend LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }

  friend LogReal operator/(LogReal a, LogReal b) {
    if (b.is_zero()) throw std::domain_error("LogReal: division by zero");
    if (a.is_zero()) return zero();
    return from_log(a.log_ - b.log_);
  }

  friend LogReal operator+(LogReal a, LogReal b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  LogReal& operator*=(LogReal other) { return *this = *this * other; }
  LogReal& operator/=(LogReal other) { return *this = *this / other; }
  LogReal& operator+=(LogReal other) { return *this = *this + other; }

  friend constexpr bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }
  friend constexpr auto operator<=>(LogReal a, LogReal b) { return a.log_ <=> b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

/// Max-shifted sum: exp(m) * sum exp(x_i - m). Terms spanning hundreds of
/// decades are summed without overflow, and small terms are not lost to
/// repeated pairwise log1p rounding.
inline LogReal log_sum(std::span<const LogReal> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (const LogReal& t : terms) m = std::max(m, t.log());
  if (m == -std::numeric_limits<double>::infinity()) return LogReal::zero();
  double s = 0.0;
  double c = 0.0;  // Kahan compensation
  for (const LogReal& t : terms) {
    if (t.is_zero()) continue;
    const double y = std::exp(t.log() - m) - c;
    const double u = s + y;
    c = (u - s) - y;
    s = u;
  }
  return LogReal::from_log(m + std::log(s));
}

}  // namespace rma
