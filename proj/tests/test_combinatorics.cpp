#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rma/combinatorics.hpp"

using namespace rma;

namespace {

// Pascal's triangle in big integers; independent of both binomial paths.
std::vector<std::vector<BigCount>> pascal(int n_max) {
  std::vector<std::vector<BigCount>> rows(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    rows[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
  }
  return rows;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("combinatorics") {
  TEST_CASE("log_binomial examples") {
    CHECK(log_binomial(6, 3).log() == doctest::Approx(std::log(20.0)).epsilon(1e-14));
    CHECK(log_binomial(5, 0).log() == 0.0);
    CHECK(log_binomial(52, 5).log() == doctest::Approx(std::log(2598960.0)).epsilon(1e-14));
    CHECK(log_binomial(5, -1).is_zero());
    CHECK(log_binomial(5, 6).is_zero());
  }

  TEST_CASE("log_binomial agrees across the exact/lgamma switch") {
    for (long long n : {63LL, 64LL, 65LL, 66LL, 200LL, 5000LL, 200000LL}) {
      for (long long k : {0LL, 1LL, 2LL, n / 3, n / 2, n - 1, n}) {
        const double ref = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        CHECK(log_binomial(n, k).log() == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
      }
    }
  }

  TEST_CASE("exact_binomial examples") {
    CHECK(exact_binomial(4, 2) == 6);
    CHECK(exact_binomial(0, 0) == 1);
    CHECK(exact_binomial(30, 15) == 155117520);
    CHECK(exact_binomial(3, 5) == 0);
    CHECK(exact_binomial(3, -1) == 0);
  }

  TEST_CASE("binomials match Pascal's triangle for n <= 40") {
    const auto rows = pascal(120);
    for (int n = 0; n <= 40; ++n) {
      for (int k = 0; k <= n; ++k) {
        CHECK(exact_binomial(n, k) == rows[n][k]);
        const double ref = rows[n][k].convert_to<double>();
        CHECK(rel_err(log_binomial(n, k).value(), ref) <= 1e-10);
      }
    }
    // exact path beyond 64 bits of n
    for (int k = 0; k <= 120; k += 7) CHECK(exact_binomial(120, k) == rows[120][k]);
  }

  TEST_CASE("binary entropy") {
    CHECK(binary_entropy_nats(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(binary_entropy_nats(0.0) == 0.0);
    CHECK(binary_entropy_nats(1.0) == 0.0);
    // close to 0.5 ln 2, since 0.11 sits on the rate-1/2 GV point
    CHECK(binary_entropy_nats(0.11) == doctest::Approx(0.34651533691866615).epsilon(1e-13));
    CHECK(std::abs(binary_entropy_nats(0.11) - 0.5 * std::log(2.0)) < 1e-4);
    CHECK(binary_entropy_nats(-5e-13) == 0.0);
    CHECK(binary_entropy_nats(1.0 + 5e-13) == 0.0);
    CHECK_THROWS_AS(binary_entropy_nats(-1e-9), std::domain_error);
    CHECK_THROWS_AS(binary_entropy_nats(1.0 + 1e-9), std::domain_error);
  }

  TEST_CASE("entropy derivative matches central differences") {
    for (double x = 0.05; x < 0.96; x += 0.05) {
      const double h = 1e-6;
      const double fd = (binary_entropy_nats(x + h) - binary_entropy_nats(x - h)) / (2 * h);
      CHECK(binary_entropy_derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("weighted entropy") {
    CHECK(weighted_entropy(0.0, 0.0) == 0.0);
    CHECK(weighted_entropy(0.2, 0.5) == doctest::Approx(0.5 * binary_entropy_nats(0.4)));
  }

  TEST_CASE("stirling_phi") {
    CHECK(stirling_phi(100, 1) == 1.0);
    CHECK(stirling_phi(10, 2) == doctest::Approx(std::exp(0.1)).epsilon(1e-15));
    CHECK(stirling_phi(50, 5) == doctest::Approx(std::exp(0.2)).epsilon(1e-15));
  }

  TEST_CASE("binomial bounds with the Stirling-type factor, N <= 200") {
    for (long long N = 1; N <= 200; ++N) {
      for (long long l = 1; l <= N; ++l) {
        const double lb = log_binomial(N, l).log();
        const double base = l * std::log(static_cast<double>(N) / l);
        const double slack = 1e-9 * std::max(1.0, std::abs(lb));
        CHECK(base - std::log(stirling_phi(N, l)) <= lb + slack);
        CHECK(lb <= l * std::log(static_cast<double>(N)) - log_factorial(l) + slack);
      }
    }
  }

  TEST_CASE("the (N/l)^l phi_l(l) upper bound fails already at N = 6, l = 2") {
    // C(6,2) = 15 > 9 e^{1/2}; only the falling-factorial step above is valid.
    CHECK(log_binomial(6, 2).log() > 2 * std::log(3.0) + std::log(stirling_phi(2, 2)));
  }

  TEST_CASE("Gallager entropy bounds on binomials, N <= 200") {
    const double pi = std::acos(-1.0);
    for (long long N = 2; N <= 200; ++N) {
      for (long long l = 1; l < N; ++l) {
        const double lb = log_binomial(N, l).log();
        const double nh = N * binary_entropy_nats(static_cast<double>(l) / N);
        const double denom = static_cast<double>(l) * (N - l);
        const double slack = 1e-9 * std::max(1.0, std::abs(lb));
        CHECK(0.5 * std::log(N / (8.0 * denom)) + nh <= lb + slack);
        CHECK(lb <= 0.5 * std::log(N / (2.0 * pi * denom)) + nh + slack);
      }
    }
  }

  TEST_CASE("log_hypergeometric examples") {
    CHECK(log_hypergeometric(4, 4, 2, 2).log() == doctest::Approx(0.0).scale(1.0));
    CHECK(log_hypergeometric(4, 2, 2, 0).log() == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
    CHECK(log_hypergeometric(4, 2, 2, 3).is_zero());
  }

  TEST_CASE("hypergeometric rows sum to one, N <= 30") {
    for (long long N = 0; N <= 30; ++N) {
      for (long long keep = 0; keep <= N; ++keep) {
        for (long long d = 0; d <= N; ++d) {
          std::vector<LogReal> terms;
          for (long long dk = 0; dk <= keep; ++dk) terms.push_back(log_hypergeometric(N, keep, d, dk));
          CHECK(log_sum(terms).value() == doctest::Approx(1.0).epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("LogReal arithmetic") {
    CHECK(LogReal::from_log(std::log(1.0)) == LogReal::one());
    CHECK(LogReal::one().value() == 1.0);
    CHECK(LogReal::zero().is_zero());
    CHECK((LogReal::zero() + LogReal::one()) == LogReal::one());
    CHECK((LogReal::zero() * LogReal::from_value(5.0)).is_zero());
    CHECK_THROWS_AS(LogReal::from_value(-1.0), std::domain_error);
    CHECK_THROWS_AS(LogReal::one() / LogReal::zero(), std::domain_error);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logs(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
      const LogReal a = LogReal::from_log(logs(rng)), b = LogReal::from_log(logs(rng)), c = LogReal::from_log(logs(rng));
      CHECK((a + b).log() == doctest::Approx((b + a).log()).epsilon(1e-12));
      CHECK(((a + b) + c).log() == doctest::Approx((a + (b + c)).log()).epsilon(1e-12));
      CHECK(((a * b) * c).log() == doctest::Approx((a * (b * c)).log()).epsilon(1e-12));
      CHECK((a * b).log() == doctest::Approx((b * a).log()).epsilon(1e-12));
    }
  }

  TEST_CASE("log_sum keeps small terms and spans wide ranges") {
    std::vector<LogReal> terms{LogReal::from_log(800.0), LogReal::from_log(800.0 + std::log(1e-15))};
    for (int i = 0; i < 1000; ++i) terms.push_back(LogReal::from_log(800.0 + std::log(1e-16)));
    // 1 + 1e-15 + 1000e-16 = 1 + 1.1e-13
    CHECK(log_sum(terms).log() - 800.0 == doctest::Approx(std::log1p(1.1e-13)).epsilon(1e-3));
    std::vector<LogReal> empty;
    CHECK(log_sum(empty).is_zero());
    std::vector<LogReal> ones(10, LogReal::one());
    CHECK(log_sum(ones).value() == doctest::Approx(10.0).epsilon(1e-15));
  }
}
