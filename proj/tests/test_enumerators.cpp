#include <cmath>
#include <random>

#include "doctest.h"
#include "rma/enumerators.hpp"
#include "rma/oracle.hpp"

using namespace rma;

namespace {

double to_double(const BigRational& r) { return r.convert_to<double>(); }

EnsembleSpec make(int q, int M, long long K, std::optional<long long> n_keep = {}) {
  return EnsembleSpec{q, M, K, n_keep};
}

// Sum of Pr(d_1..d_M | w) over every d-vector, by brute nesting.
LogReal total_conditional(const EnsembleSpec& spec, long long w) {
  IoweQuery query{w, std::vector<long long>(spec.M, 0), std::nullopt};
  std::vector<LogReal> terms;
  auto descend = [&](auto&& self, int level) -> void {
    if (level == spec.M) {
      terms.push_back(rma_conditional_log_prob(spec, query));
      return;
    }
    for (long long d = 0; d <= spec.N(); ++d) {
      query.d[level] = d;
      self(self, level + 1);
    }
  };
  descend(descend, 0);
  return log_sum(terms);
}

}  // namespace

TEST_SUITE("enumerators") {
  TEST_CASE("EnsembleSpec rates and validation") {
    const EnsembleSpec s = make(3, 2, 10, 20);
    CHECK(s.N() == 30);
    CHECK(s.rate() == doctest::Approx(1.0 / 3));
    CHECK(s.punctured_rate() == doctest::Approx(0.5));
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_WITH_AS(make(1, 2, 10).validate(), doctest::Contains("q"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make(3, 0, 10).validate(), doctest::Contains("M"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make(3, 2, 0).validate(), doctest::Contains("K"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make(3, 2, 10, 31).validate(), doctest::Contains("N'"), std::invalid_argument);
  }

  TEST_CASE("accumulator transition examples") {
    CHECK(acc_conditional_log_prob(4, 2, 2).value() == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(acc_conditional_log_prob(4, 0, 0) == LogReal::one());
    CHECK(acc_conditional_log_prob(4, 2, 4).is_zero());
    CHECK(acc_conditional_log_prob(4, 0, 1).is_zero());
    CHECK(acc_conditional_log_prob(4, 1, 0).is_zero());
  }

  TEST_CASE("accumulator transition equals the bit-level tally") {
    for (int N = 1; N <= 12; ++N) {
      const auto tally = oracle::brute_accumulator_iowe(N);
      for (int w = 0; w <= N; ++w) {
        for (int d = 0; d <= N; ++d) {
          auto it = tally.find({w, d});
          const BigRational count = it == tally.end() ? BigRational(0) : BigRational(it->second);
          CHECK(acc_transition<BigRational>(N, w, d) == count / BigRational(exact_binomial(N, w)));
        }
      }
    }
  }

  TEST_CASE("conditional probability") {
    // M = 1 reduces to the accumulator kernel at input weight qw.
    const EnsembleSpec ra = make(3, 1, 4);
    CHECK(rma_conditional_log_prob(ra, {2, {5}, std::nullopt}) == acc_conditional_log_prob(12, 6, 5));
    // q=3, K=2, w=1, d1=2, d=1: (4/20) (5/15)
    CHECK(basic_rma_conditional_prob<BigRational>(make(3, 2, 2), {1, {2, 1}, std::nullopt}) == BigRational(1, 15));
    CHECK_THROWS_AS(rma_conditional_log_prob(make(3, 2, 2), {1, {2}, std::nullopt}), std::invalid_argument);
  }

  TEST_CASE("expected IOWE examples") {
    for (long long K = 1; K <= 64; K *= 2)
      CHECK(expected_iowe(make(2, 1, K), {1, {1}, std::nullopt}).value() == doctest::Approx(1.0).epsilon(1e-12));
    for (long long K : {2LL, 5LL, 50LL}) {
      const EnsembleSpec raa = make(2, 2, K);
      for (long long d = 1; d <= raa.N(); d += 3)
        CHECK(exact_expected_iowe(raa, {1, {1, d}, std::nullopt}) == BigRational(1, raa.N()));
    }
    CHECK(exact_expected_iowe(make(3, 1, 2), {1, {2}, std::nullopt}) == BigRational(2, 5));
    CHECK(exact_expected_iowe(make(3, 2, 2), {1, {2, 1}, std::nullopt}) == BigRational(2, 15));
    CHECK_THROWS_AS(expected_iowe(make(3, 1, 2), {0, {0}, std::nullopt}), std::out_of_range);
    CHECK_THROWS_AS(expected_iowe(make(3, 1, 2), {3, {3}, std::nullopt}), std::out_of_range);
  }

  TEST_CASE("conditional probabilities sum to one over all weight vectors") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
      const int q = 2 + static_cast<int>(rng() % 3);
      const int M = 1 + static_cast<int>(rng() % 3);
      const long long K = 1 + static_cast<long long>(rng() % (M == 3 ? 5 : 8));
      const EnsembleSpec spec = make(q, M, K);
      for (long long w = 1; w <= K; ++w)
        CHECK(total_conditional(spec, w).value() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("weight spectrum mass and exact agreement") {
    for (auto [q, M, K] : {std::tuple{2, 1, 6}, {3, 1, 2}, {3, 2, 5}, {4, 3, 4}, {2, 3, 9}}) {
      const EnsembleSpec spec = make(q, M, K);
      const WeightSpectrum s = weight_spectrum(spec);
      const ExactWeightSpectrum e = exact_weight_spectrum(spec);
      CHECK(s.expected_count[0] == LogReal::one());
      CHECK(e.expected_count[0] == 1);
      BigRational total = 0;
      for (long long d = 1; d <= spec.N(); ++d) {
        total += e.expected_count[d];
        CHECK(s.expected_count[d].value() == doctest::Approx(to_double(e.expected_count[d])).epsilon(1e-10));
      }
      CHECK(total == BigRational((BigCount(1) << K) - 1));
      CHECK(cumulative_wef(s, spec.N()).value() == doctest::Approx(std::ldexp(1.0, K) - 1).epsilon(1e-9));
    }
  }

  TEST_CASE("RA q=3, K=2 spectrum respects the weight constraints and matches the oracle") {
    const EnsembleSpec spec = make(3, 1, 2);
    const ExactWeightSpectrum e = exact_weight_spectrum(spec);
    // w=1 (x=3): 2 <= d <= 5; w=2 (x=6): d = 3
    for (long long d = 0; d <= 6; ++d) {
      const bool reachable = d == 0 || (d >= 2 && d <= 5);
      CHECK((e.expected_count[d] != 0) == reachable);
    }
    const auto brute = oracle::brute_uniform_interleaver(spec, oracle::InterleaverEnumeration::kPermutations);
    const auto marginal = oracle::output_weight_marginal(brute, 6);
    for (long long d = 0; d <= 6; ++d) CHECK(e.expected_count[d] == marginal[d]);
  }

  TEST_CASE("large-N spectrum mass survives the log domain") {
    const EnsembleSpec spec = make(3, 2, 400);
    const WeightSpectrum s = weight_spectrum(spec);
    CHECK(cumulative_wef(s, spec.N()).log() == doctest::Approx(400 * std::log(2.0)).epsilon(1e-9));
  }

  TEST_CASE("truncated spectra agree with full spectra on the kept range") {
    const EnsembleSpec spec = make(3, 3, 60);
    SpectrumOptions cut;
    cut.max_weight = 25;
    const WeightSpectrum full = weight_spectrum(spec);
    const WeightSpectrum part = weight_spectrum(spec, cut);
    REQUIRE(part.max_weight() == 25);
    for (long long d = 0; d <= 25; ++d)
      CHECK(part.expected_count[d].log() == doctest::Approx(full.expected_count[d].log()).epsilon(1e-12));
  }

  TEST_CASE("budget") {
    SpectrumOptions tight;
    tight.budget = 100;
    CHECK_THROWS_AS(weight_spectrum(make(3, 2, 40), tight), BudgetExceeded);
    tight.max_weight = 20;
    CHECK_NOTHROW(weight_spectrum(make(3, 2, 40), tight));
  }

  TEST_CASE("punctured spectrum") {
    const EnsembleSpec mother = make(3, 2, 8);
    const WeightSpectrum s = weight_spectrum(mother);
    const WeightSpectrum same = punctured_spectrum(make(3, 2, 8, 24));
    REQUIRE(same.max_weight() == s.max_weight());
    for (long long d = 0; d <= 24; ++d) CHECK(same.expected_count[d] == s.expected_count[d]);
    CHECK(same.collapsed.is_zero());

    for (long long n_keep : {1LL, 7LL, 12LL, 20LL}) {
      const WeightSpectrum p = punctured_spectrum(make(3, 2, 8, n_keep));
      CHECK(p.block_length == n_keep);
      CHECK(p.expected_count[0] == LogReal::one());
      CHECK(cumulative_wef(p, n_keep).value() == doctest::Approx(255.0).epsilon(1e-9));
    }

    const EnsembleSpec small = make(3, 2, 2, 4);
    const ExactWeightSpectrum exact = exact_weight_spectrum(small);
    const auto brute = oracle::brute_punctured(small, oracle::InterleaverEnumeration::kPermutations);
    const auto marginal = oracle::output_weight_marginal(brute, 4);
    // the all-zero input also sits in marginal[0]
    CHECK(exact.collapsed + 1 == marginal[0]);
    for (long long d = 1; d <= 4; ++d) CHECK(exact.expected_count[d] == marginal[d]);
  }

  TEST_CASE("cumulative WEF") {
    const WeightSpectrum s = weight_spectrum(make(3, 1, 2));
    CHECK(cumulative_wef(s, 0).is_zero());
    CHECK(cumulative_wef(s, 2).value() == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(cumulative_wef(s, 6).value() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(cumulative_wef(s, 7), std::out_of_range);
    CHECK_THROWS_AS(cumulative_wef(s, -1), std::out_of_range);
    const WeightSpectrum big = weight_spectrum(make(4, 2, 30));
    for (long long d = 1; d <= big.max_weight(); ++d) CHECK(cumulative_wef(big, d) >= cumulative_wef(big, d - 1));
  }

  TEST_CASE("finite-length bound: definition") {
    for (auto [q, M, K, f] : {std::tuple{3, 2, 64, 0.5}, {3, 3, 40, 0.5}, {4, 2, 50, 0.1}, {2, 3, 60, 0.9}}) {
      const WeightSpectrum s = weight_spectrum(make(q, M, K));
      const long long b = finite_length_dmin_bound(s, f);
      CHECK(cumulative_wef(s, b).value() < f);
      if (b < s.max_weight()) CHECK(cumulative_wef(s, b + 1).value() >= f);
    }
    CHECK_THROWS_AS(finite_length_dmin_bound(make(3, 2, 10), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(finite_length_dmin_bound(make(3, 2, 10), 1.0), std::invalid_argument);
  }

  TEST_CASE("finite-length bound: frozen values from an exact-fraction recomputation") {
    CHECK(finite_length_dmin_bound(make(3, 2, 64)) == 27);
    CHECK(finite_length_dmin_bound(make(3, 2, 128)) == 52);
    CHECK(finite_length_dmin_bound(make(3, 2, 256)) == 104);
    CHECK(finite_length_dmin_bound(make(2, 2, 64)) == 5);
    CHECK(finite_length_dmin_bound(make(2, 2, 128)) == 8);
    CHECK(finite_length_dmin_bound(make(2, 2, 256)) == 16);
    CHECK(finite_length_dmin_bound(make(3, 2, 64, 128)) == 13);
    CHECK(finite_length_dmin_bound(make(3, 2, 128, 256)) == 27);
    CHECK(finite_length_dmin_bound(make(3, 2, 256, 512)) == 53);
    CHECK(punctured_spectrum(make(3, 2, 64, 128)).collapsed.value() ==
          doctest::Approx(6.766525087400821e-05).epsilon(1e-9));
  }

  TEST_CASE("exact spectra of the smallest RAA ensembles") {
    const ExactWeightSpectrum raa = exact_weight_spectrum(make(3, 2, 2));
    const std::vector<BigRational> expected{1, {2, 15}, {2, 3}, 1, {64, 75}, {26, 75}, 0};
    for (std::size_t d = 0; d < expected.size(); ++d) CHECK(raa.expected_count[d] == expected[d]);

    const ExactWeightSpectrum p = exact_weight_spectrum(make(3, 2, 2, 4));
    CHECK(p.collapsed == BigRational(4, 45));
    const std::vector<BigRational> kept{1, {29, 45}, {151, 125}, {997, 1125}, {194, 1125}};
    for (std::size_t d = 0; d < kept.size(); ++d) CHECK(p.expected_count[d] == kept[d]);
  }

  TEST_CASE("RAA q=2: weight-one inputs keep the cumulative WEF above rho-bar") {
    // Every d gets 1/N from w=1, d1=1, so E(A_{d <= rho N}) >= rho and no
    // fraction below rho can certify a bound of rho N.
    for (long long K : {50LL, 200LL, 800LL}) {
      const EnsembleSpec spec = make(2, 2, K);
      const WeightSpectrum s = weight_spectrum(spec);
      for (double rho : {0.05, 0.2, 0.45}) {
        const auto delta = static_cast<long long>(std::floor(rho * spec.N()));
        CHECK(cumulative_wef(s, delta).value() >= static_cast<double>(delta) / spec.N());
        CHECK(finite_length_dmin_bound(s, rho / 2) < delta);
      }
    }
  }

  TEST_CASE("RA cumulative WEF below N^(1/3 - eps) shrinks, q = 3, 4") {
    // exact-fraction reference values
    struct Row {
      int q;
      long long N;
      long long delta;
      double cumulative;
    };
    for (const Row& r : {Row{3, 300, 5, 0.28634052561686063}, Row{3, 3000, 9, 0.21427747723127197},
                         Row{3, 30000, 18, 0.19933198436685123}, Row{4, 300, 13, 1.2357502970176273},
                         Row{4, 3000, 36, 1.1073508261315286}, Row{4, 30000, 103, 0.8988448270719238}}) {
      const EnsembleSpec spec = make(r.q, 1, r.N / r.q);
      const auto delta = static_cast<long long>(std::floor(std::pow(static_cast<double>(r.N), (r.q - 2.0) / r.q - 0.05)));
      CHECK(delta == r.delta);
      SpectrumOptions cut;
      cut.max_weight = delta;
      CHECK(cumulative_wef(weight_spectrum(spec, cut), delta).value() == doctest::Approx(r.cumulative).epsilon(1e-9));
    }
    // q = 4 only drops below one at the largest N; the trend holds for both
    for (int q : {3, 4}) {
      double previous = 2.0;
      for (long long N : {300LL, 3000LL, 30000LL}) {
        const auto delta = static_cast<long long>(std::floor(std::pow(static_cast<double>(N), (q - 2.0) / q - 0.05)));
        SpectrumOptions cut;
        cut.max_weight = delta;
        const double c = cumulative_wef(weight_spectrum(make(q, 1, N / q), cut), delta).value();
        CHECK(c < previous);
        previous = c;
      }
    }
  }
}
