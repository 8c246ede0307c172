#include "rma/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rma::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

void write_csv_header(std::ostream& os, const std::string& command, const ConfigEcho& config) {
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# command: " << command << '\n';
  for (const auto& [k, v] : config) os << "# " << k << ": " << v << '\n';
}

nlohmann::ordered_json config_json(const std::string& command, const ConfigEcho& config) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) params[k] = v;
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"params", params}};
}

void write_spectrum_csv(std::ostream& os, const WeightSpectrum& spectrum) {
  os << "# block_length: " << spectrum.block_length << '\n';
  os << "# collapsed_log_expected_count: " << format_number(spectrum.collapsed.log()) << '\n';
  os << "d,log_expected_count,expected_count_if_representable\n";
  for (long long d = 0; d <= spectrum.max_weight(); ++d) {
    const LogReal& c = spectrum.expected_count[d];
    os << d << ',' << format_number(c.log()) << ',';
    const double v = c.value();
    if (std::isfinite(v) && (v != 0.0 || c.is_zero())) os << format_number(v);
    os << '\n';
  }
}

nlohmann::ordered_json to_json(const NormalizedWeights& w) {
  nlohmann::ordered_json j;
  j["alpha"] = round12(w.alpha);
  nlohmann::ordered_json betas = nlohmann::ordered_json::array();
  for (double b : w.betas) betas.push_back(round12(b));
  j["betas"] = betas;
  j["rho"] = round12(w.rho);
  if (w.puncture) j["rho_prime"] = round12(w.puncture->rho_prime);
  return j;
}

nlohmann::ordered_json to_json(const GrowthRateResult& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["M"] = r.M;
  j["rate"] = round12(r.rate());
  if (r.eta) {
    j["rate_punctured"] = round12(r.punctured_rate());
    j["eta"] = round12(*r.eta);
  }
  j["rho_min_hat"] = round12(r.rho_min_hat);
  j["rho0"] = round12(r.rho0);
  j["gvb"] = round12(gvb_growth_rate(r.punctured_rate()));
  j["arg_max"] = to_json(r.arg_max);
  j["tolerance"] = round12(r.tolerance);
  j["evaluations"] = r.evaluations;
  j["proven"] = r.proven;
  return j;
}

}  // namespace rma::io
