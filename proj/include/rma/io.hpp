#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rma/asymptotic.hpp"
#include "rma/enumerators.hpp"

namespace rma::io {

inline constexpr const char* kToolName = "ensemble_lab";
inline constexpr const char* kToolVersion = "1.0.0";

/// Ordered (name, value) pairs echoed into every output file.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// 12 significant digits, "%.12g".
std::string format_number(double x);
/// x rounded to 12 significant digits, so JSON dumps are stable.
double round12(double x);

void write_csv_header(std::ostream& os, const std::string& command, const ConfigEcho& config);
nlohmann::ordered_json config_json(const std::string& command, const ConfigEcho& config);

/// Columns d, log_expected_count, expected_count_if_representable. The last
/// is empty when the count over- or underflows a double.
void write_spectrum_csv(std::ostream& os, const WeightSpectrum& spectrum);

nlohmann::ordered_json to_json(const NormalizedWeights& w);
nlohmann::ordered_json to_json(const GrowthRateResult& r);

}  // namespace rma::io
