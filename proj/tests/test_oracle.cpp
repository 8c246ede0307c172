#include "doctest.h"
#include "rma/oracle.hpp"

using namespace rma;
using namespace rma::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("accumulator tally") {
    const auto t = brute_accumulator_iowe(4);
    CHECK(t.at({2, 2}) == 2);
    CHECK(t.at({0, 0}) == 1);
    CHECK_FALSE(t.contains({2, 4}));
    BigCount total = 0;
    for (const auto& [key, count] : t) total += count;
    CHECK(total == 16);
    CHECK_THROWS_AS(brute_accumulator_iowe(15), BudgetExceeded);
  }

  TEST_CASE("cells per input weight sum to C(K, w)") {
    const EnsembleSpec spec{3, 2, 2, std::nullopt};
    const ExactSpectrum s = brute_uniform_interleaver(spec);
    std::vector<BigRational> per_w(3);
    for (const auto& [key, value] : s.counts) per_w.at(key[0]) += value;
    CHECK(per_w[0] == 1);
    CHECK(per_w[1] == 2);
    CHECK(per_w[2] == 1);
  }

  TEST_CASE("both enumeration modes agree") {
    for (const EnsembleSpec& spec : {EnsembleSpec{2, 1, 3, std::nullopt}, EnsembleSpec{3, 2, 2, std::nullopt},
                                     EnsembleSpec{3, 2, 2, 4}, EnsembleSpec{2, 2, 2, 3}}) {
      const bool p = spec.punctured_length.has_value();
      const ExactSpectrum a = p ? brute_punctured(spec, InterleaverEnumeration::kWeightClasses)
                                : brute_uniform_interleaver(spec, InterleaverEnumeration::kWeightClasses);
      const ExactSpectrum b = p ? brute_punctured(spec, InterleaverEnumeration::kPermutations)
                                : brute_uniform_interleaver(spec, InterleaverEnumeration::kPermutations);
      CHECK_FALSE(first_mismatch(a, b));
    }
  }

  TEST_CASE("known cells") {
    // RA q=3, K=2: E(A_{w=1, d=2}) = 2/5
    const ExactSpectrum ra = brute_uniform_interleaver({3, 1, 2, std::nullopt}, InterleaverEnumeration::kPermutations);
    CHECK(ra.counts.at({1, 2}) == BigRational(2, 5));
    // RA q=2, K=3: one codeword of weight one on average
    const ExactSpectrum ra2 = brute_uniform_interleaver({2, 1, 3, std::nullopt}, InterleaverEnumeration::kPermutations);
    CHECK(ra2.counts.at({1, 1}) == 1);
    // RAA q=3, K=2, w=1, d1=2, d=1
    const ExactSpectrum raa = brute_uniform_interleaver({3, 2, 2, std::nullopt}, InterleaverEnumeration::kPermutations);
    CHECK(raa.counts.at({1, 2, 1}) == BigRational(2, 15));
  }

  TEST_CASE("no puncturing equals the plain average") {
    const ExactSpectrum plain = brute_uniform_interleaver({3, 1, 2, std::nullopt});
    const ExactSpectrum kept = brute_punctured({3, 1, 2, 6});
    ExactSpectrum reduced;
    for (const auto& [key, value] : kept.counts) {
      CHECK(key[1] == key[2]);
      reduced.counts[{key[0], key[1]}] += value;
    }
    CHECK_FALSE(first_mismatch(plain, reduced));
  }

  TEST_CASE("mismatch reporting") {
    ExactSpectrum a, b;
    a.counts[{1, 2}] = BigRational(1, 3);
    b.counts[{1, 2}] = BigRational(1, 4);
    const auto m = first_mismatch(a, b);
    REQUIRE(m);
    CHECK(m->find("[1,2]") != std::string::npos);
    b.counts[{1, 2}] = BigRational(1, 3);
    b.counts[{1, 3}] = 0;
    CHECK_FALSE(first_mismatch(a, b));
  }

  TEST_CASE("budget") {
    CHECK_THROWS_AS(brute_uniform_interleaver({3, 1, 3, std::nullopt}, InterleaverEnumeration::kPermutations),
                    BudgetExceeded);
    CHECK_THROWS_AS(brute_uniform_interleaver({3, 1, 5, std::nullopt}), BudgetExceeded);
    CHECK_THROWS_AS(brute_punctured({3, 1, 2, std::nullopt}), std::invalid_argument);
  }

  TEST_CASE("suite") {
    for (const auto& c : run_oracle_suite()) {
      INFO(c.name, " ", c.detail);
      CHECK(c.passed);
    }
  }
}
