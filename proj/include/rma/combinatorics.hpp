#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "rma/log_real.hpp"

namespace rma {

using BigCount = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// log C(n, k); exact zero when k < 0 or k > n. Values with n <= 64 come
/// from exact integer coefficients, larger n from log-gamma.
LogReal log_binomial(long long n, long long k);

/// Exact C(n, k); zero out of range.
BigCount exact_binomial(long long n, long long k);

/// log n! for n >= 0.
double log_factorial(long long n);

/// H(x) = -x ln x - (1-x) ln(1-x) in nats. Inputs within 1e-12 of [0,1] are
/// clamped; anything further out throws std::domain_error.
double binary_entropy_nats(double x);

/// d/dx H(x) = ln((1-x)/x), for 0 < x < 1.
double binary_entropy_derivative(double x);

/// den * H(num / den), continuously extended to 0 when den == 0.
double weighted_entropy(double num, double den);

/// exp(ell (ell - 1) / (2 lambda)); the correction factor in the
/// (N/ell)^ell sandwich bounds on C(N, ell).
double stirling_phi(double lambda, long long ell);

/// log of C(d, d_keep) C(n - d, n_keep - d_keep) / C(n, n_keep): probability
/// that a weight-d word keeps weight d_keep when n - n_keep of its n
/// positions are deleted uniformly at random.
LogReal log_hypergeometric(long long n, long long n_keep, long long d, long long d_keep);

/// Arithmetic hooks used by the scalar-generic enumerator code.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<LogReal> {
  static LogReal zero() { return LogReal::zero(); }
  static LogReal one() { return LogReal::one(); }
  static LogReal binomial(long long n, long long k) { return log_binomial(n, k); }
  static LogReal sum(std::span<const LogReal> terms) { return log_sum(terms); }
  static bool is_zero(const LogReal& x) { return x.is_zero(); }
};

template <>
struct ScalarTraits<BigRational> {
  static BigRational zero() { return BigRational(0); }
  static BigRational one() { return BigRational(1); }
  static BigRational binomial(long long n, long long k) {
    return BigRational(exact_binomial(n, k));
  }
  static BigRational sum(std::span<const BigRational> terms) {
    BigRational s(0);
    for (const auto& t : terms) s += t;
    return s;
  }
  static bool is_zero(const BigRational& x) { return x == 0; }
};

}  // namespace rma
