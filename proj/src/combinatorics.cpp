#include "rma/combinatorics.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rma {
namespace {

constexpr long long kExactLimit = 64;
constexpr long long kFactorialTableSize = 1 << 17;
constexpr double kEntropySlack = 1e-12;

std::uint64_t small_binomial(int n, int k) {
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(r);
}

// log C(n, k) for n <= 64, from exact 64-bit coefficients.
const std::array<std::array<double, kExactLimit + 1>, kExactLimit + 1>& small_log_table() {
  static const auto table = [] {
    std::array<std::array<double, kExactLimit + 1>, kExactLimit + 1> t{};
    for (int n = 0; n <= kExactLimit; ++n)
      for (int k = 0; k <= n; ++k) t[n][k] = std::log(static_cast<double>(small_binomial(n, k)));
    return t;
  }();
  return table;
}

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactorialTableSize);
    for (long long n = 0; n < kFactorialTableSize; ++n) t[n] = std::lgamma(static_cast<double>(n) + 1.0);
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(long long n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  if (n < kFactorialTableSize) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

LogReal log_binomial(long long n, long long k) {
  if (n < 0) throw std::domain_error("log_binomial: negative n");
  if (k < 0 || k > n) return LogReal::zero();
  if (n <= kExactLimit) return LogReal::from_log(small_log_table()[n][k]);
  return LogReal::from_log(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

BigCount exact_binomial(long long n, long long k) {
  if (n < 0) throw std::domain_error("exact_binomial: negative n");
  if (k < 0 || k > n) return BigCount(0);
  if (k > n - k) k = n - k;
  BigCount r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double binary_entropy_nats(double x) {
  if (!(x >= -kEntropySlack && x <= 1.0 + kEntropySlack)) {
    throw std::domain_error("binary_entropy_nats: argument outside [0, 1]");
  }
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double binary_entropy_derivative(double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("binary_entropy_derivative: argument outside (0, 1)");
  return std::log1p(-x) - std::log(x);
}

double weighted_entropy(double num, double den) {
  if (den <= 0.0) {
    if (den < -kEntropySlack || std::abs(num) > kEntropySlack) {
      throw std::domain_error("weighted_entropy: infeasible argument");
    }
    return 0.0;
  }
  return den * binary_entropy_nats(num / den);
}

double stirling_phi(double lambda, long long ell) {
  if (!(lambda > 0.0)) throw std::domain_error("stirling_phi: lambda must be positive");
  const double l = static_cast<double>(ell);
  return std::exp(l * (l - 1.0) / (2.0 * lambda));
}

LogReal log_hypergeometric(long long n, long long n_keep, long long d, long long d_keep) {
  if (n < 0 || n_keep < 0 || n_keep > n || d < 0 || d > n) {
    throw std::domain_error("log_hypergeometric: need 0 <= d <= n and 0 <= n_keep <= n");
  }
  const LogReal num = log_binomial(d, d_keep) * log_binomial(n - d, n_keep - d_keep);
  return num / log_binomial(n, n_keep);
}

}  // namespace rma
