#include "rma/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "rma/combinatorics.hpp"

namespace rma {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInteriorOffset = 1e-12;
constexpr double kAlphaMin = 1e-9;
constexpr double kAlphaMax = 0.5;
constexpr double kRegionSlack = 1e-12;

double H(double x) { return binary_entropy_nats(x); }

double interior(double x) { return std::clamp(x, kInteriorOffset, 1.0 - kInteriorOffset); }

// H'(x) with x pulled off the endpoints.
double dH(double x) { return binary_entropy_derivative(interior(x)); }

// d/dp [(1-p) H((b - p/2)/(1-p))] + ln 2 = (1/2) ln(4 x (1-x)).
double half_log_4x1x(double x) {
  x = interior(x);
  return 0.5 * std::log(4.0 * x * (1.0 - x));
}

void check_q(int q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
}

void check_M(int M) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
}

void check_eta(const std::optional<double>& eta) {
  if (eta && !(*eta > 0.0 && *eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
}

// First `count` entries of the stationary chain.
std::optional<std::vector<double>> chain_prefix(double alpha, int q, int count) {
  std::vector<double> betas;
  betas.reserve(count);
  if (count == 0) return betas;
  double s = 1.0 - std::pow(alpha / (1.0 - alpha), 2.0 / q);
  if (s < 0.0) {
    if (s < -1e-14) return std::nullopt;
    s = 0.0;
  }
  betas.push_back(0.5 - 0.5 * (1.0 - alpha) * std::sqrt(s));
  double prev = alpha;
  while (static_cast<int>(betas.size()) < count) {
    const double cur = betas.back();
    const double den = 1.0 - cur - prev / 2.0;
    if (!(cur > 0.0) || !(den > 0.0)) return std::nullopt;
    const double t = (1.0 - cur) / cur * (cur - prev / 2.0) / den;
    double r = 1.0 - t * t;
    if (r < 0.0) {
      if (r < -1e-14) return std::nullopt;
      r = 0.0;
    }
    betas.push_back(0.5 - 0.5 * (1.0 - cur) * std::sqrt(r));
    prev = cur;
  }
  return betas;
}

// dF/drho for the punctured exponent; strictly decreasing on the open
// feasible interval.
double punctured_rho_slope(double rho, double b, double u, double v) {
  return std::log(rho / (1.0 - rho)) + std::log((1.0 - rho - b / 2.0) / (rho - b / 2.0)) +
         std::log(rho / (rho - u)) + std::log((1.0 - rho - v) / (1.0 - rho));
}

// Mother-code weight rho maximizing F for fixed beta_{M-1} and rho'.
double optimal_mother_rho(double b, double rho_prime, double eta) {
  const double u = eta * rho_prime;
  const double v = eta * (1.0 - rho_prime);
  double lo = std::max(b / 2.0, u);
  double hi = std::min(1.0 - b / 2.0, 1.0 - v);
  if (hi < lo - kRegionSlack) return kNaN;
  if (hi - lo <= 1e-13) return 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (punctured_rho_slope(mid, b, u, v) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Profile {
  double rho;  // rho, or rho' when punctured
  int q;
  int M;
  std::optional<double> eta;
  long long* evaluations;

  // Exponent along the chain at fixed output weight; -inf when the chain
  // leaves the feasible region.
  double operator()(double alpha, NormalizedWeights* point = nullptr) const {
    auto betas = chain_prefix(alpha, q, M - 1);
    if (!betas) return -kInf;
    const double b = M >= 2 ? betas->back() : alpha;
    NormalizedWeights g;
    g.alpha = alpha;
    g.betas = std::move(*betas);
    if (eta) {
      g.rho = optimal_mother_rho(b, rho, *eta);
      if (std::isnan(g.rho)) return -kInf;
      g.puncture = PunctureWeights{rho, *eta};
    } else {
      if (rho < b / 2.0 - kRegionSlack || rho > 1.0 - b / 2.0 + kRegionSlack) return -kInf;
      g.rho = rho;
    }
    ++*evaluations;
    double value;
    try {
      value = exponent_total(g, q);
    } catch (const std::domain_error&) {
      return -kInf;
    }
    if (point) *point = std::move(g);
    return value;
  }

  // Partial derivative w.r.t. the last free inner weight (alpha when M = 1).
  double slope(double alpha) const {
    NormalizedWeights g;
    if (!std::isfinite((*this)(alpha, &g))) return kNaN;
    return stationarity_residual(g, q)[M - 1];
  }
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) xs[i] = std::exp(a + (b - a) * i / (n - 1));
  xs.back() = hi;
  return xs;
}

// Refines a bracketed local maximum of the profile: Brent in log(alpha),
// then bisection on the analytic slope once a sign change is in reach.
std::optional<double> refine_maximum(const Profile& profile, double lo, double hi) {
  const auto neg = [&](double t) {
    const double v = profile(std::exp(t));
    return std::isfinite(v) ? -v : kInf;
  };
  const auto [t_best, v_best] =
      boost::math::tools::brent_find_minima(neg, std::log(lo), std::log(hi), std::numeric_limits<double>::digits);
  (void)v_best;
  double alpha = std::exp(t_best);

  for (double width : {1e-7, 1e-6, 1e-5}) {
    double a = alpha * (1.0 - width);
    double b = std::min(alpha * (1.0 + width), kAlphaMax);
    double sa = profile.slope(a);
    double sb = profile.slope(b);
    if (std::isnan(sa) || std::isnan(sb) || (sa > 0.0) == (sb > 0.0)) continue;
    for (int it = 0; it < 100 && b - a > 1e-15 * alpha; ++it) {
      const double m = 0.5 * (a + b);
      const double sm = profile.slope(m);
      if (std::isnan(sm)) break;
      if ((sm > 0.0) == (sa > 0.0)) {
        a = m;
        sa = sm;
      } else {
        b = m;
      }
    }
    alpha = 0.5 * (a + b);
    break;
  }
  // A profile bump caused by the chain turning back (d beta/d alpha = 0)
  // is not a stationary point of the exponent.
  const double s = profile.slope(alpha);
  if (std::isnan(s) || std::abs(s) > 1e-5) return std::nullopt;
  return alpha;
}

// Backward-sampled grid over the feasible region at fixed output weight;
// returns the largest exponent seen.
double region_supremum(double rho, int q, int M, std::optional<double> eta, long long budget, long long& evaluations) {
  const int dims = M + (eta ? 1 : 0);
  const int n = dims <= 2 ? 200 : std::max(8, static_cast<int>(std::floor(std::pow(static_cast<double>(budget), 1.0 / dims))));
  double best = -kInf;
  NormalizedWeights g;
  g.betas.assign(M - 1, 0.0);

  // stage indexes gamma from the output side: level M-1 down to 0 (alpha).
  auto descend = [&](auto&& self, int level, double upper_source) -> void {
    const double hi = std::min({1.0, 2.0 * upper_source, 2.0 - 2.0 * upper_source});
    for (int j = 1; j <= n; ++j) {
      const double x = hi * j / n;
      if (level == 0) {
        g.alpha = x;
      } else {
        g.betas[level - 1] = x;
      }
      if (level > 0) {
        self(self, level - 1, x);
        continue;
      }
      ++evaluations;
      try {
        best = std::max(best, exponent_total(g, q));
      } catch (const std::domain_error&) {
      }
    }
  };

  if (!eta) {
    g.rho = rho;
    descend(descend, M - 1, rho);
    return best;
  }
  const double u = *eta * rho;
  const double v = *eta * (1.0 - rho);
  g.puncture = PunctureWeights{rho, *eta};
  const double lo = u;
  const double hi = 1.0 - v;
  if (hi < lo) return best;
  for (int j = 0; j < n; ++j) {
    g.rho = lo + (hi - lo) * (j + 0.5) / n;
    descend(descend, M - 1, g.rho);
  }
  return best;
}

}  // namespace

std::vector<double> NormalizedWeights::gamma() const {
  std::vector<double> out;
  out.reserve(betas.size() + 2);
  out.push_back(alpha);
  out.insert(out.end(), betas.begin(), betas.end());
  out.push_back(rho);
  return out;
}

bool NormalizedWeights::in_region(double slack) const {
  const auto g = gamma();
  for (double x : g)
    if (x < -slack || x > 1.0 + slack) return false;
  for (std::size_t l = 1; l < g.size(); ++l) {
    if (g[l - 1] > 2.0 * g[l] + slack) return false;
    if (g[l - 1] > 2.0 - 2.0 * g[l] + slack) return false;
  }
  if (puncture) {
    const double u = puncture->eta * puncture->rho_prime;
    const double v = puncture->eta * (1.0 - puncture->rho_prime);
    if (u < -slack || u > rho + slack || v < -slack || v > 1.0 - rho + slack) return false;
  }
  return true;
}

double exponent_raa(double alpha, double beta, double rho, int q) {
  check_q(q);
  for (double x : {alpha, beta, rho})
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("exponent_raa: weights must lie in [0, 1]");
  return H(alpha) / q - H(beta) - H(rho) + weighted_entropy(beta - alpha / 2.0, 1.0 - alpha) + alpha * kLn2 +
         weighted_entropy(rho - beta / 2.0, 1.0 - beta) + beta * kLn2;
}

double exponent_rma(const NormalizedWeights& gamma, int q) {
  check_q(q);
  const auto g = gamma.gamma();
  for (double x : g)
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("exponent_rma: weights must lie in [0, 1]");
  const std::size_t M = g.size() - 1;
  double f = H(g[0]) / q;
  for (std::size_t l = 1; l <= M; ++l) {
    f += weighted_entropy(g[l] - g[l - 1] / 2.0, 1.0 - g[l - 1]) - H(g[l]) + kLn2 * g[l - 1];
  }
  return f;
}

double puncture_exponent(double rho, double rho_prime, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("puncture_exponent: eta must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0 && rho_prime >= 0.0 && rho_prime <= 1.0)) {
    throw std::domain_error("puncture_exponent: weights must lie in [0, 1]");
  }
  return weighted_entropy(eta * rho_prime, rho) + weighted_entropy(eta * (1.0 - rho_prime), 1.0 - rho) - H(eta);
}

double exponent_total(const NormalizedWeights& gamma, int q) {
  double f = exponent_rma(gamma, q);
  if (gamma.puncture) f += puncture_exponent(gamma.rho, gamma.puncture->rho_prime, gamma.puncture->eta);
  return f;
}

std::optional<std::vector<double>> beta_chain(double alpha, int q, int M) {
  check_q(q);
  check_M(M);
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::domain_error("beta_chain: need 0 < alpha <= 1/2");
  return chain_prefix(alpha, q, M);
}

double stationary_rho_prime(double rho, double beta_last, double eta) {
  const double b2 = beta_last / 2.0;
  const double c = (1.0 - rho) * (1.0 - rho) * (rho - b2) / (rho * rho * (1.0 - rho - b2));
  return (rho * (c + 1.0) + eta - 1.0) / (1.0 + c) / eta;
}

std::vector<double> stationarity_residual(const NormalizedWeights& gamma, int q) {
  check_q(q);
  const auto g = gamma.gamma();
  const int M = gamma.M();
  std::vector<double> r(M + (gamma.puncture ? 1 : 0));
  for (int l = 0; l < M; ++l) {
    // H(beta_l) enters with weight 1/q for alpha and -1 for the inner stages.
    double s = (l == 0 ? 1.0 / q : -1.0) * dH(g[l]);
    if (l > 0) s += dH((g[l] - g[l - 1] / 2.0) / (1.0 - g[l - 1]));
    s += half_log_4x1x((g[l + 1] - g[l] / 2.0) / (1.0 - g[l]));
    r[l] = s;
  }
  if (gamma.puncture) {
    const double rho = gamma.rho;
    const double b = g[M - 1];
    const double u = gamma.puncture->eta * gamma.puncture->rho_prime;
    const double v = gamma.puncture->eta * (1.0 - gamma.puncture->rho_prime);
    r[M] = -dH(rho) + dH((rho - b / 2.0) / (1.0 - b)) + std::log(rho / (rho - u)) +
           std::log((1.0 - rho - v) / (1.0 - rho));
  }
  return r;
}

double concavity_check(double alpha0, double beta, int q) {
  check_q(q);
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw std::domain_error("concavity_check: need 0 < alpha < 1");
  const double x = (beta - alpha0 / 2.0) / (1.0 - alpha0);
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("concavity_check: (alpha, beta) outside the region interior");
  const double one_minus = 1.0 - alpha0;
  return -1.0 / (q * alpha0 * one_minus) +
         0.25 * (1.0 - 2.0 * x) / (x * (1.0 - x)) * (2.0 * beta - 1.0) / (one_minus * one_minus);
}

double appendix_F_check(double rho, double beta) {
  if (!(rho > 0.0 && rho <= 0.5)) throw std::domain_error("appendix_F_check: need 0 < rho <= 1/2");
  if (!(beta >= 0.0 && beta <= 2.0 * rho + kRegionSlack)) {
    throw std::domain_error("appendix_F_check: need 0 <= beta <= 2 rho");
  }
  return beta * kLn2 + weighted_entropy(rho - beta / 2.0, 1.0 - beta) - H(rho);
}

double gvb_growth_rate(double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("gvb_growth_rate: rate must lie in (0, 1)");
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - H(mid) / kLn2 > rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BoundaryScan boundary_scan(double rho, int q, int samples) {
  check_q(q);
  if (!(rho > 0.0 && rho <= 0.5)) throw std::domain_error("boundary_scan: need 0 < rho <= 1/2");
  if (samples < 2) throw std::invalid_argument("boundary_scan: need at least two samples");

  const auto sweep = [&](double a0, double a1, double b0, double b1, bool include_start) {
    BoundaryMaximum best{-kInf, 0.0, 0.0};
    for (int j = include_start ? 0 : 1; j <= samples; ++j) {
      const double t = static_cast<double>(j) / samples;
      const double alpha = a0 + (a1 - a0) * t;
      const double beta = b0 + (b1 - b0) * t;
      double v;
      try {
        v = exponent_raa(alpha, beta, rho, q);
      } catch (const std::domain_error&) {
        continue;
      }
      if (v > best.value) best = {v, alpha, beta};
    }
    return best;
  };

  BoundaryScan scan;
  scan.a = sweep(0.0, 0.0, 0.0, std::min(1.0, 2.0 * rho), false);
  const double b_end = std::min(1.0, 4.0 * rho);
  scan.b = sweep(0.0, b_end, 0.0, b_end / 2.0, false);
  const double c_end = std::min(2.0 - 4.0 * rho, 4.0 * rho);
  scan.c = sweep(0.0, c_end, 2.0 * rho, 2.0 * rho, false);
  if (rho > 0.25) {
    const double d0 = 2.0 * (1.0 - 2.0 * rho);
    scan.d = sweep(d0, 1.0, 1.0 - d0 / 2.0, 0.5, true);
  }
  return scan;
}

ExponentMaximum max_exponent_at_rho(double rho, int q, int M, std::optional<double> eta,
                                    const MaximizeOptions& options) {
  check_q(q);
  check_M(M);
  check_eta(eta);
  if (!(rho > 0.0 && rho <= 0.5)) throw std::domain_error("max_exponent_at_rho: need 0 < rho <= 1/2");

  ExponentMaximum out;
  const Profile profile{rho, q, M, eta, &out.evaluations};
  const auto alphas = log_grid(kAlphaMin, kAlphaMax, std::max(options.alpha_grid, 16));
  std::vector<double> values(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) values[i] = profile(alphas[i]);

  double best = -kInf;
  const std::size_t n = alphas.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Infeasible neighbours and the grid ends count as -inf, so maxima next to
    // where the chain ends (or within one cell of alpha = 1/2) are still refined.
    const double l = i > 0 ? values[i - 1] : -kInf;
    const double c = values[i];
    const double r = i + 1 < n ? values[i + 1] : -kInf;
    if (!std::isfinite(c)) continue;
    if (!(c >= l && c >= r && (c > l || c > r))) continue;
    const auto alpha = refine_maximum(profile, alphas[i > 0 ? i - 1 : 0], alphas[std::min(i + 1, n - 1)]);
    if (!alpha) continue;
    NormalizedWeights point;
    const double v = profile(*alpha, &point);
    if (v > best) {
      best = v;
      out.arg_max = std::move(point);
      out.has_stationary_point = true;
    }
  }

  if (out.has_stationary_point) {
    out.value = best;
    return out;
  }
  out.value = kNaN;
  if (options.certify) {
    double sup = region_supremum(rho, q, M, eta, options.certify_samples, out.evaluations);
    if (M == 2 && !eta) {
      const auto scan = boundary_scan(rho, q);
      sup = std::max({sup, scan.a.value, scan.b.value, scan.c.value});
      if (scan.d) sup = std::max(sup, scan.d->value);
      out.evaluations += 4LL * 10000;
    }
    out.value = sup;
    out.certified_negative = sup < 0.0;
  }
  return out;
}

double stationary_rho_floor(int q, int M, std::optional<double> eta) {
  check_q(q);
  check_M(M);
  check_eta(eta);
  const auto end_weight = [&](double alpha) {
    const auto chain = chain_prefix(alpha, q, M);
    if (!chain) return kInf;
    const double rho = chain->back();
    if (!eta) return rho;
    const double b = M >= 2 ? (*chain)[M - 2] : alpha;
    const double rp = stationary_rho_prime(rho, b, *eta);
    return (std::isfinite(rp) && rp >= 0.0) ? rp : kInf;
  };
  const auto alphas = log_grid(kAlphaMin, kAlphaMax, 4000);
  std::size_t best = 0;
  double best_value = kInf;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double v = end_weight(alphas[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) return kNaN;
  const double lo = std::log(alphas[best == 0 ? 0 : best - 1]);
  const double hi = std::log(alphas[std::min(best + 1, alphas.size() - 1)]);
  const auto [t, v] = boost::math::tools::brent_find_minima([&](double s) { return end_weight(std::exp(s)); }, lo, hi,
                                                            std::numeric_limits<double>::digits);
  (void)t;
  return std::min(v, best_value);
}

GrowthRateResult growth_rate(int q, int M, std::optional<double> eta, const GrowthRateOptions& options) {
  check_q(q);
  check_M(M);
  check_eta(eta);
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("growth_rate: tolerance must be positive");

  GrowthRateResult res;
  res.q = q;
  res.M = M;
  res.eta = eta;
  res.tolerance = options.tolerance;
  res.proven = eta ? M >= 2 : (M >= 3 || (M == 2 && q >= 3));
  res.rho0 = stationary_rho_floor(q, M, eta);

  MaximizeOptions quiet;
  quiet.certify = false;
  const auto positive = [&](double r, ExponentMaximum* keep = nullptr) {
    auto m = max_exponent_at_rho(r, q, M, eta, quiet);
    res.evaluations += m.evaluations;
    const bool pos = m.has_stationary_point && m.value >= 0.0;
    if (keep) *keep = std::move(m);
    return pos;
  };

  constexpr double kTop = 0.5 - 1e-9;
  const double start = std::isfinite(res.rho0) ? std::clamp(res.rho0, 1e-6, kTop) : 1e-6;
  double lo = start;
  double hi = kNaN;
  ExponentMaximum at_hi;
  if (positive(start, &at_hi)) {
    lo = 1e-9;
    hi = start;
  } else {
    const double step = (kTop - start) / std::max(options.scan_steps, 1);
    for (int k = 1; k <= options.scan_steps; ++k) {
      const double r = k == options.scan_steps ? kTop : start + step * k;
      if (positive(r, &at_hi)) {
        hi = r;
        break;
      }
      lo = r;
    }
  }
  if (std::isnan(hi)) {
    res.rho_min_hat = kTop;
    res.bracket_lo = lo;
    res.bracket_hi = kTop;
    res.proven = false;
    return res;
  }

  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    ExponentMaximum m;
    if (positive(mid, &m)) {
      hi = mid;
      at_hi = std::move(m);
    } else {
      lo = mid;
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.rho_min_hat = 0.5 * (lo + hi);
  ExponentMaximum at_mid;
  positive(res.rho_min_hat, &at_mid);
  res.arg_max = at_mid.has_stationary_point ? at_mid.arg_max : at_hi.arg_max;
  return res;
}

}  // namespace rma
