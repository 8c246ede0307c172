#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rma/combinatorics.hpp"
#include "rma/log_real.hpp"

namespace rma {

/// Thrown when a computation would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One repeat-multiple-accumulate ensemble: a length-K input is repeated q
/// times, then passed through M interleaver/accumulator stages. With
/// `punctured_length` set, N' of the N = qK output bits are kept at random.
struct EnsembleSpec {
  int q = 3;
  int M = 2;
  long long K = 1;
  std::optional<long long> punctured_length;

  long long N() const { return static_cast<long long>(q) * K; }
  double rate() const { return 1.0 / q; }
  double punctured_rate() const {
    return punctured_length ? rate() * static_cast<double>(N()) / static_cast<double>(*punctured_length)
                            : rate();
  }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Input weight w, per-stage output weights d_1..d_M and, for punctured
/// ensembles, the weight d' after puncturing.
struct IoweQuery {
  long long w = 0;
  std::vector<long long> d;
  std::optional<long long> d_prime;
};

/// Expected number of codewords per output weight. Index 0 holds the
/// all-zero codeword (exactly one); `collapsed` holds the expected number of
/// nonzero-input codewords that puncturing reduces to weight zero.
template <class Scalar>
struct BasicWeightSpectrum {
  long long block_length = 0;
  std::vector<Scalar> expected_count;
  Scalar collapsed = ScalarTraits<Scalar>::zero();

  /// Largest weight held; below block_length when the spectrum was truncated.
  long long max_weight() const { return static_cast<long long>(expected_count.size()) - 1; }
};

using WeightSpectrum = BasicWeightSpectrum<LogReal>;
using ExactWeightSpectrum = BasicWeightSpectrum<BigRational>;

struct SpectrumOptions {
  /// Only weights d <= max_weight are produced. Intermediate stages are
  /// truncated accordingly (an accumulator cannot halve weight by more than
  /// a factor two), which keeps low-weight queries cheap at large N.
  std::optional<long long> max_weight;
  /// Upper bound on the length of any per-stage weight vector.
  long long budget = 4096;
};

// ---------------------------------------------------------------------------
// Scalar-generic kernels

/// Pr(d | x) for one unterminated 1/(1+D) accumulator of length N driven by a
/// uniformly interleaved weight-x word.
template <class S>
S acc_transition(long long N, long long x, long long d) {
  using T = ScalarTraits<S>;
  if (x < 0 || x > N || d < 0 || d > N) return T::zero();
  if (x == 0) return d == 0 ? T::one() : T::zero();
  if (d == 0) return T::zero();
  const long long up = (x + 1) / 2;
  const long long down = x / 2;
  const S num = T::binomial(d - 1, up - 1) * T::binomial(N - d, down);
  if (T::is_zero(num)) return T::zero();
  return num / T::binomial(N, x);
}

template <class S>
S hypergeometric(long long n, long long n_keep, long long d, long long d_keep) {
  using T = ScalarTraits<S>;
  const S num = T::binomial(d, d_keep) * T::binomial(n - d, n_keep - d_keep);
  if (T::is_zero(num)) return T::zero();
  return num / T::binomial(n, n_keep);
}

template <class S>
S basic_rma_conditional_prob(const EnsembleSpec& spec, const IoweQuery& query) {
  if (static_cast<int>(query.d.size()) != spec.M) {
    throw std::invalid_argument("IoweQuery: d has " + std::to_string(query.d.size()) +
                                " entries, ensemble has M = " + std::to_string(spec.M));
  }
  const long long N = spec.N();
  S p = acc_transition<S>(N, spec.q * query.w, query.d[0]);
  for (int l = 1; l < spec.M && !ScalarTraits<S>::is_zero(p); ++l) {
    p = p * acc_transition<S>(N, query.d[l - 1], query.d[l]);
  }
  return p;
}

template <class S>
S basic_expected_iowe(const EnsembleSpec& spec, const IoweQuery& query) {
  if (query.w < 1 || query.w > spec.K) throw std::out_of_range("expected_iowe: need 1 <= w <= K");
  S e = ScalarTraits<S>::binomial(spec.K, query.w) * basic_rma_conditional_prob<S>(spec, query);
  if (query.d_prime) {
    if (!spec.punctured_length) throw std::invalid_argument("expected_iowe: d' given for unpunctured ensemble");
    e = e * hypergeometric<S>(spec.N(), *spec.punctured_length, query.d.back(), *query.d_prime);
  }
  return e;
}

/// out[d] = sum_x in[x] Pr(d | x) for d = 0..out_max.
template <class S>
std::vector<S> propagate_accumulator(std::span<const S> in, long long N, long long out_max) {
  using T = ScalarTraits<S>;
  std::vector<S> out(static_cast<std::size_t>(out_max + 1), T::zero());
  std::vector<S> terms;
  terms.reserve(in.size());
  const long long in_max = static_cast<long long>(in.size()) - 1;
  for (long long d = 0; d <= out_max; ++d) {
    terms.clear();
    const long long x_hi = std::min({in_max, 2 * d, 2 * (N - d) + 1});
    for (long long x = 0; x <= x_hi; ++x) {
      if (T::is_zero(in[x])) continue;
      const S p = acc_transition<S>(N, x, d);
      if (!T::is_zero(p)) terms.push_back(in[x] * p);
    }
    out[d] = T::sum(terms);
  }
  return out;
}

template <class S>
BasicWeightSpectrum<S> basic_weight_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options = {}) {
  using T = ScalarTraits<S>;
  spec.validate();
  const long long N = spec.N();
  const long long top = std::min(N, options.max_weight.value_or(N));
  if (top < 0) throw std::invalid_argument("weight_spectrum: max_weight must be nonnegative");

  // widths[l] bounds the weight leaving stage l; widths[0] is the repeated input.
  std::vector<long long> widths(spec.M + 1);
  widths[spec.M] = top;
  for (int l = spec.M; l > 0; --l) widths[l - 1] = std::min(N, 2 * widths[l]);
  const long long widest = *std::max_element(widths.begin(), widths.end());
  if (widest > options.budget) {
    throw BudgetExceeded("weight_spectrum: stage width " + std::to_string(widest) + " exceeds budget " +
                         std::to_string(options.budget));
  }

  std::vector<S> v(static_cast<std::size_t>(widths[0] + 1), T::zero());
  for (long long w = 1; w <= spec.K && spec.q * w <= widths[0]; ++w) v[spec.q * w] = T::binomial(spec.K, w);
  for (int l = 1; l <= spec.M; ++l) v = propagate_accumulator<S>(v, N, widths[l]);

  BasicWeightSpectrum<S> out;
  out.block_length = N;
  out.expected_count = std::move(v);
  out.expected_count[0] = T::one();
  return out;
}

/// Applies the random-puncturing kernel to a full mother-code spectrum.
template <class S>
BasicWeightSpectrum<S> basic_puncture(const BasicWeightSpectrum<S>& mother, long long n_keep,
                                      std::optional<long long> max_weight = {}) {
  using T = ScalarTraits<S>;
  const long long N = mother.block_length;
  if (mother.max_weight() != N) throw std::invalid_argument("puncture: mother spectrum must be complete");
  if (n_keep < 1 || n_keep > N) throw std::invalid_argument("puncture: need 1 <= N' <= N");
  if (n_keep == N && !max_weight) return mother;

  const long long top = std::min(n_keep, max_weight.value_or(n_keep));
  BasicWeightSpectrum<S> out;
  out.block_length = n_keep;
  out.expected_count.assign(static_cast<std::size_t>(top + 1), T::zero());
  std::vector<S> terms;
  for (long long dk = 0; dk <= top; ++dk) {
    terms.clear();
    for (long long d = std::max<long long>(dk, 1); d <= N; ++d) {
      if (T::is_zero(mother.expected_count[d])) continue;
      const S h = hypergeometric<S>(N, n_keep, d, dk);
      if (!T::is_zero(h)) terms.push_back(mother.expected_count[d] * h);
    }
    out.expected_count[dk] = T::sum(terms);
  }
  out.collapsed = out.expected_count[0] + mother.collapsed;
  out.expected_count[0] = T::one();
  return out;
}

template <class S>
BasicWeightSpectrum<S> basic_punctured_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options = {}) {
  if (!spec.punctured_length) throw std::invalid_argument("punctured_spectrum: ensemble has no puncturing");
  SpectrumOptions full = options;
  full.max_weight.reset();
  return basic_puncture(basic_weight_spectrum<S>(spec, full), *spec.punctured_length, options.max_weight);
}

// ---------------------------------------------------------------------------
// Log-domain entry points

LogReal acc_conditional_log_prob(long long N, long long w_in, long long d_out);
LogReal rma_conditional_log_prob(const EnsembleSpec& spec, const IoweQuery& query);
LogReal expected_iowe(const EnsembleSpec& spec, const IoweQuery& query);
BigRational exact_expected_iowe(const EnsembleSpec& spec, const IoweQuery& query);

WeightSpectrum weight_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options = {});
WeightSpectrum punctured_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options = {});
ExactWeightSpectrum exact_weight_spectrum(const EnsembleSpec& spec);

/// Expected number of nonzero codewords of weight <= delta (d = 0 row
/// excluded; punctured-to-zero words included).
LogReal cumulative_wef(const WeightSpectrum& spectrum, long long delta);

/// Largest delta with cumulative_wef(delta) < fraction. By the first-moment
/// bound, at least a (1 - fraction) share of the ensemble then has
/// d_min > delta. Throws std::invalid_argument unless 0 < fraction < 1.
long long finite_length_dmin_bound(const WeightSpectrum& spectrum, double fraction = 0.5);

/// Same, computing the (punctured, if configured) spectrum first.
long long finite_length_dmin_bound(const EnsembleSpec& spec, double fraction = 0.5,
                                   const SpectrumOptions& options = {});

}  // namespace rma
