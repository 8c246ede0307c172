#pragma once

#include <optional>
#include <vector>

namespace rma {

/// Weight after random puncturing: rho_prime = d'/N', eta = N'/N.
struct PunctureWeights {
  double rho_prime = 0.0;
  double eta = 1.0;
};

/// Weights as fractions of the block length: alpha = w/K, betas = d_l/N for
/// the inner stages l = 1..M-1, rho = d_M/N.
struct NormalizedWeights {
  double alpha = 0.0;
  std::vector<double> betas;
  double rho = 0.0;
  std::optional<PunctureWeights> puncture;

  int M() const { return static_cast<int>(betas.size()) + 1; }
  /// [alpha, beta_1, ..., beta_{M-1}, rho]
  std::vector<double> gamma() const;
  /// Ordering constraints of the accumulator chain (and of the puncturing
  /// kernel when present), with absolute slack.
  bool in_region(double slack = 1e-12) const;
};

/// Spectral-shape exponent of the two-accumulator ensemble, in nats per
/// output bit. Throws std::domain_error outside the closed feasible region.
double exponent_raa(double alpha, double beta, double rho, int q);

/// Exponent of the M-accumulator ensemble (M = gamma.M()); ignores any
/// puncturing fields.
double exponent_rma(const NormalizedWeights& gamma, int q);

/// Exponent of the random-puncturing kernel; never positive.
double puncture_exponent(double rho, double rho_prime, double eta);

/// exponent_rma plus puncture_exponent when gamma.puncture is set.
double exponent_total(const NormalizedWeights& gamma, int q);

/// Closed-form stationary chain: beta_1(alpha), then beta_{l+1} from
/// (beta_{l-1}, beta_l). Returns M entries, the last being rho(alpha), or
/// nullopt when a square root goes negative (no stationary point for this
/// alpha). Requires 0 < alpha <= 1/2.
std::optional<std::vector<double>> beta_chain(double alpha, int q, int M);

/// Solution rho' of dF/drho = 0 for given rho, beta_{M-1} and eta (rho'
/// normalized by the punctured length).
double stationary_rho_prime(double rho, double beta_last, double eta);

/// Partial derivatives of the exponent w.r.t. alpha, beta_1..beta_{M-1}
/// (and rho when punctured).
std::vector<double> stationarity_residual(const NormalizedWeights& gamma, int q);

/// Second derivative of the exponent along alpha at fixed beta.
double concavity_check(double alpha0, double beta, int q);

/// beta ln 2 + (1-beta) H((rho - beta/2)/(1-beta)) - H(rho); the exponent of
/// the last accumulator stage when its input weight is sublinear.
double appendix_F_check(double rho, double beta);

/// Relative distance on the binary Gilbert-Varshamov bound:
/// rate = 1 - H(rho)/ln 2, rho in (0, 1/2).
double gvb_growth_rate(double rate);

struct BoundaryMaximum {
  double value = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Sampled maxima of the two-accumulator exponent on the four edges of the
/// feasible (alpha, beta) region at fixed rho.
struct BoundaryScan {
  BoundaryMaximum a;  // alpha = 0
  BoundaryMaximum b;  // beta = alpha / 2
  BoundaryMaximum c;  // beta = 2 rho
  std::optional<BoundaryMaximum> d;  // beta = 1 - alpha / 2, only for rho > 1/4
};

BoundaryScan boundary_scan(double rho, int q, int samples = 10000);

struct MaximizeOptions {
  /// Sample the whole region when no interior stationary point exists.
  bool certify = true;
  int alpha_grid = 2000;
  /// Total sample budget for certification above two dimensions.
  long long certify_samples = 1'000'000;
};

struct ExponentMaximum {
  bool has_stationary_point = false;
  /// Exponent at the interior maximum, or the sampled supremum over the
  /// region (NaN without certification) when there is none.
  double value = 0.0;
  NormalizedWeights arg_max;
  bool certified_negative = false;
  long long evaluations = 0;
};

/// Largest interior stationary value of the exponent at fixed output weight.
/// For punctured ensembles (eta set) `rho` is the punctured weight rho'.
ExponentMaximum max_exponent_at_rho(double rho, int q, int M, std::optional<double> eta = {},
                                    const MaximizeOptions& options = {});

/// Smallest output weight (rho, or rho' when punctured) for which the
/// stationary system has a solution.
double stationary_rho_floor(int q, int M, std::optional<double> eta = {});

struct GrowthRateOptions {
  double tolerance = 1e-6;
  int scan_steps = 64;
};

struct GrowthRateResult {
  int q = 0;
  int M = 0;
  std::optional<double> eta;
  double rho_min_hat = 0.0;
  double rho0 = 0.0;
  NormalizedWeights arg_max;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tolerance = 0.0;
  long long evaluations = 0;
  /// False for ensembles without a linear-growth guarantee (M = 1, and
  /// unpunctured M = 2 with q = 2); the number is still reported.
  bool proven = true;

  double rate() const { return 1.0 / q; }
  double punctured_rate() const { return eta ? rate() / *eta : rate(); }
};

/// Zero crossing of the maximized exponent: the lower bound on d_min / N
/// (d'_min / N' when punctured).
GrowthRateResult growth_rate(int q, int M, std::optional<double> eta = {}, const GrowthRateOptions& options = {});

}  // namespace rma
