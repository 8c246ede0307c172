#include "rma/enumerators.hpp"

#include <string>

namespace rma {

void EnsembleSpec::validate() const {
  if (q < 2) throw std::invalid_argument("q must be >= 2 (got " + std::to_string(q) + ")");
  if (M < 1) throw std::invalid_argument("M must be >= 1 (got " + std::to_string(M) + ")");
  if (K < 1) throw std::invalid_argument("K must be >= 1 (got " + std::to_string(K) + ")");
  if (punctured_length && (*punctured_length < 1 || *punctured_length > N())) {
    throw std::invalid_argument("N' must satisfy 1 <= N' <= N = " + std::to_string(N()) + " (got " +
                                std::to_string(*punctured_length) + ")");
  }
}

LogReal acc_conditional_log_prob(long long N, long long w_in, long long d_out) {
  return acc_transition<LogReal>(N, w_in, d_out);
}

LogReal rma_conditional_log_prob(const EnsembleSpec& spec, const IoweQuery& query) {
  return basic_rma_conditional_prob<LogReal>(spec, query);
}

LogReal expected_iowe(const EnsembleSpec& spec, const IoweQuery& query) {
  return basic_expected_iowe<LogReal>(spec, query);
}

BigRational exact_expected_iowe(const EnsembleSpec& spec, const IoweQuery& query) {
  return basic_expected_iowe<BigRational>(spec, query);
}

WeightSpectrum weight_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options) {
  return basic_weight_spectrum<LogReal>(spec, options);
}

WeightSpectrum punctured_spectrum(const EnsembleSpec& spec, const SpectrumOptions& options) {
  return basic_punctured_spectrum<LogReal>(spec, options);
}

ExactWeightSpectrum exact_weight_spectrum(const EnsembleSpec& spec) {
  SpectrumOptions options;
  options.budget = 256;
  return spec.punctured_length ? basic_punctured_spectrum<BigRational>(spec, options)
                               : basic_weight_spectrum<BigRational>(spec, options);
}

LogReal cumulative_wef(const WeightSpectrum& spectrum, long long delta) {
  if (delta < 0 || delta > spectrum.max_weight()) {
    throw std::out_of_range("cumulative_wef: delta outside [0, " + std::to_string(spectrum.max_weight()) + "]");
  }
  std::vector<LogReal> terms;
  terms.reserve(static_cast<std::size_t>(delta) + 1);
  terms.push_back(spectrum.collapsed);
  for (long long d = 1; d <= delta; ++d) terms.push_back(spectrum.expected_count[d]);
  return log_sum(terms);
}

long long finite_length_dmin_bound(const WeightSpectrum& spectrum, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction must lie in (0, 1)");
  const LogReal threshold = LogReal::from_value(fraction);
  LogReal running = spectrum.collapsed;
  long long best = 0;
  for (long long d = 1; d <= spectrum.max_weight(); ++d) {
    running += spectrum.expected_count[d];
    if (running >= threshold) break;
    best = d;
  }
  // The scan uses a running total; settle the crossing on the exact
  // max-shifted prefix sums.
  while (best > 0 && cumulative_wef(spectrum, best) >= threshold) --best;
  while (best < spectrum.max_weight() && cumulative_wef(spectrum, best + 1) < threshold) ++best;
  return best;
}

long long finite_length_dmin_bound(const EnsembleSpec& spec, double fraction, const SpectrumOptions& options) {
  const WeightSpectrum s = spec.punctured_length ? punctured_spectrum(spec, options) : weight_spectrum(spec, options);
  return finite_length_dmin_bound(s, fraction);
}

}  // namespace rma
