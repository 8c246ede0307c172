#include "rma/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "rma/asymptotic.hpp"
#include "rma/enumerators.hpp"
#include "rma/io.hpp"
#include "rma/oracle.hpp"

namespace rma::cli {
namespace {

using Json = nlohmann::ordered_json;
using io::format_number;

struct Output {
  std::string path;
  std::string format;
};

struct FiniteArgs {
  int q = 3;
  int M = 2;
  long long N = 0;
  long long n_prime = 0;
  double rate_punctured = 0.0;
  double fraction = 0.5;
  long long budget = 4096;
};

struct AsymptoticArgs {
  int q = 3;
  int M = 2;
  double rate_punctured = 0.0;
  double tolerance = 1e-6;
};

struct SweepArgs {
  std::string kind;
  std::vector<int> qs;
  std::vector<int> Ms;
  double rho_min = 0.05;
  double rho_max = 0.35;
  double rho = 0.2;
  int steps = 61;
  std::vector<double> rates;
  std::vector<long long> Ns;
  double rate_punctured = 0.0;
  double fraction = 0.5;
  double tolerance = 1e-6;
  long long budget = 4096;
};

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    if constexpr (std::is_floating_point_v<T>) {
      os << format_number(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_format(const Output& o, bool allow_csv = true) {
  require(o.format == "json" || (allow_csv && o.format == "csv"),
          "format must be " + std::string(allow_csv ? "csv or json" : "json") + " (got " + o.format + ")");
}

// Writes to the --output file, or to `out` when none was given.
void emit(const Output& o, std::ostream& out, const std::string& text) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + o.path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + o.path);
}

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

double num(double x) { return io::round12(x); }

Json maybe(double x) { return std::isfinite(x) ? Json(num(x)) : Json(nullptr); }

// Rows share the key order of the first row.
std::string render_table(const std::string& command, const io::ConfigEcho& config, const std::vector<Json>& rows,
                         const std::string& format, const std::string& columns_doc) {
  std::ostringstream os;
  if (format == "json") {
    Json doc;
    doc["config"] = io::config_json(command, config);
    doc["rows"] = rows;
    os << doc.dump(2) << '\n';
    return os.str();
  }
  io::write_csv_header(os, command, config);
  os << "# columns: " << columns_doc << '\n';
  if (rows.empty()) return os.str();
  bool first = true;
  for (const auto& item : rows.front().items()) {
    os << (first ? "" : ",") << item.key();
    first = false;
  }
  os << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& item : r.items()) {
      os << (first ? "" : ",") << cell(item.value());
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

// Evaluates fn(0..n-1) on up to worker_count() threads; results keep index order.
std::vector<Json> parallel_rows(std::size_t n, const std::function<Json(std::size_t)>& fn) {
  std::vector<Json> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

EnsembleSpec finite_spec(int q, int M, long long N, long long n_prime, double rate_punctured) {
  require(q >= 2, "q must be >= 2 (got " + std::to_string(q) + ")");
  require(N >= 1, "N must be >= 1 (got " + std::to_string(N) + ")");
  require(N % q == 0, "N must be a multiple of q (got N = " + std::to_string(N) + ", q = " + std::to_string(q) + ")");
  EnsembleSpec spec{q, M, N / q, std::nullopt};
  require(!(n_prime > 0 && rate_punctured > 0.0), "give at most one of N-prime and rate-punctured");
  if (rate_punctured > 0.0) {
    require(rate_punctured > 1.0 / q - 1e-12 && rate_punctured < 1.0,
            "rate-punctured must satisfy 1/q <= R' < 1 (got " + format_number(rate_punctured) + ")");
    const double exact = static_cast<double>(spec.K) / rate_punctured;
    const long long rounded = std::llround(exact);
    require(std::abs(exact - rounded) < 1e-6,
            "rate-punctured: K/R' = " + format_number(exact) + " is not an integer N'");
    spec.punctured_length = rounded;
  } else if (n_prime > 0) {
    spec.punctured_length = n_prime;
  }
  spec.validate();
  return spec;
}

std::optional<double> puncture_eta(int q, double rate_punctured) {
  if (rate_punctured == 0.0) return std::nullopt;
  require(rate_punctured > 1.0 / q - 1e-12 && rate_punctured < 1.0,
          "rate-punctured must satisfy 1/q <= R' < 1 (got " + format_number(rate_punctured) + ")");
  return std::min(1.0, (1.0 / q) / rate_punctured);
}

void check_qM(int q, int M) {
  require(q >= 2, "q must be >= 2 (got " + std::to_string(q) + ")");
  require(M >= 1, "M must be >= 1 (got " + std::to_string(M) + ")");
}

struct FiniteResult {
  EnsembleSpec spec;
  long long delta = 0;
  double log_cumulative = 0.0;
  WeightSpectrum spectrum;

  long long length() const { return spec.punctured_length.value_or(spec.N()); }
  double ratio() const { return static_cast<double>(delta) / static_cast<double>(length()); }
};

FiniteResult compute_finite(const EnsembleSpec& spec, double fraction, long long budget) {
  require(fraction > 0.0 && fraction < 1.0, "fraction must lie in (0, 1) (got " + format_number(fraction) + ")");
  require(budget >= 1, "budget must be >= 1");
  SpectrumOptions options;
  options.budget = budget;
  FiniteResult r{spec, 0, 0.0, spec.punctured_length ? punctured_spectrum(spec, options) : weight_spectrum(spec, options)};
  r.delta = finite_length_dmin_bound(r.spectrum, fraction);
  r.log_cumulative = cumulative_wef(r.spectrum, r.delta).log();
  return r;
}

io::ConfigEcho finite_echo(const FiniteResult& r, double fraction, long long budget) {
  io::ConfigEcho c{{"q", std::to_string(r.spec.q)},
                   {"M", std::to_string(r.spec.M)},
                   {"N", std::to_string(r.spec.N())},
                   {"K", std::to_string(r.spec.K)}};
  if (r.spec.punctured_length) c.emplace_back("N_prime", std::to_string(*r.spec.punctured_length));
  c.emplace_back("fraction", format_number(fraction));
  c.emplace_back("budget", std::to_string(budget));
  return c;
}

int cmd_finite(const FiniteArgs& a, const Output& o, std::ostream& out) {
  check_format(o);
  check_qM(a.q, a.M);
  const EnsembleSpec spec = finite_spec(a.q, a.M, a.N, a.n_prime, a.rate_punctured);
  const FiniteResult r = compute_finite(spec, a.fraction, a.budget);
  const io::ConfigEcho config = finite_echo(r, a.fraction, a.budget);

  std::ostringstream os;
  if (o.format == "json") {
    Json doc;
    doc["config"] = io::config_json("finite", config);
    doc["block_length"] = r.length();
    doc["delta_star"] = r.delta;
    doc["delta_star_over_length"] = num(r.ratio());
    doc["log_cumulative_wef_at_delta_star"] = maybe(r.log_cumulative);
    os << doc.dump(2) << '\n';
  } else {
    io::write_csv_header(os, "finite", config);
    os << "# delta_star: " << r.delta << '\n';
    os << "# delta_star_over_length: " << format_number(r.ratio()) << '\n';
    os << "# log_cumulative_wef_at_delta_star: " << format_number(r.log_cumulative) << '\n';
    io::write_spectrum_csv(os, r.spectrum);
  }
  emit(o, out, os.str());
  if (!o.path.empty()) out << "delta_star=" << r.delta << " delta_star_over_length=" << format_number(r.ratio()) << '\n';
  return kExitOk;
}

Json growth_row(const GrowthRateResult& r) {
  Json row;
  row["q"] = r.q;
  row["M"] = r.M;
  row["rate"] = num(r.rate());
  row["rate_punctured"] = r.eta ? Json(num(r.punctured_rate())) : Json(nullptr);
  row["rho_min_hat"] = num(r.rho_min_hat);
  row["rho0"] = maybe(r.rho0);
  row["gvb"] = num(gvb_growth_rate(r.punctured_rate()));
  row["proven"] = r.proven;
  return row;
}

int cmd_growth(const std::string& command, const AsymptoticArgs& a, const Output& o, std::ostream& out) {
  check_format(o);
  check_qM(a.q, a.M);
  require(a.tolerance > 0.0 && a.tolerance < 0.1, "tolerance must lie in (0, 0.1)");
  const std::optional<double> eta = puncture_eta(a.q, a.rate_punctured);
  GrowthRateOptions options;
  options.tolerance = a.tolerance;
  const GrowthRateResult r = growth_rate(a.q, a.M, eta, options);

  io::ConfigEcho config{{"q", std::to_string(a.q)}, {"M", std::to_string(a.M)}};
  if (eta) config.emplace_back("rate_punctured", format_number(a.rate_punctured));
  config.emplace_back("tolerance", format_number(a.tolerance));

  if (o.format == "json") {
    Json doc;
    doc["config"] = io::config_json(command, config);
    doc.update(io::to_json(r));
    emit(o, out, doc.dump(2) + "\n");
  } else {
    emit(o, out, render_table(command, config, {growth_row(r)}, "csv", "growth-rate coefficient and GVB"));
  }
  return kExitOk;
}

int cmd_gvb(double rate, const Output& o, std::ostream& out) {
  check_format(o);
  require(rate > 0.0 && rate < 1.0, "rate must lie in (0, 1) (got " + format_number(rate) + ")");
  const io::ConfigEcho config{{"rate", format_number(rate)}};
  Json row;
  row["rate"] = num(rate);
  row["gvb"] = num(gvb_growth_rate(rate));
  if (o.format == "json") {
    Json doc;
    doc["config"] = io::config_json("gvb", config);
    doc.update(row);
    emit(o, out, doc.dump(2) + "\n");
  } else {
    emit(o, out, render_table("gvb", config, {row}, "csv", "rate, relative distance on the GV bound"));
  }
  return kExitOk;
}

int cmd_oracle(const Output& o, std::ostream& out) {
  check_format(o);
  const auto outcomes = oracle::run_oracle_suite();
  std::vector<Json> rows;
  bool ok = true;
  for (const auto& c : outcomes) {
    Json row;
    row["check"] = c.name;
    row["passed"] = c.passed;
    row["detail"] = c.detail;
    rows.push_back(row);
    ok = ok && c.passed;
  }
  emit(o, out, render_table("oracle-check", {}, rows, o.format, "check name, passed, first mismatching cell"));
  if (!o.path.empty())
    for (const auto& c : outcomes) out << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  return ok ? kExitOk : kExitFailure;
}

int cmd_sweep(const SweepArgs& a, const Output& o, std::ostream& out) {
  check_format(o);
  io::ConfigEcho config{{"kind", a.kind}};
  std::vector<Json> rows;
  std::string columns;

  if (a.kind == "rho") {
    const std::vector<int> qs = a.qs.empty() ? std::vector<int>{3, 4, 5, 6} : a.qs;
    const int M = a.Ms.empty() ? 2 : a.Ms.front();
    require(a.Ms.size() <= 1, "M: the rho sweep takes a single value");
    for (int q : qs) check_qM(q, M);
    require(a.steps >= 2 && a.steps <= 100000, "steps must lie in [2, 100000]");
    require(0.0 < a.rho_min && a.rho_min < a.rho_max && a.rho_max < 0.5, "rho-min/rho-max must satisfy 0 < min < max < 1/2");
    const std::optional<double> eta = a.rate_punctured > 0.0 ? puncture_eta(qs.front(), a.rate_punctured) : std::nullopt;
    require(!eta || qs.size() == 1, "rate-punctured: the rho sweep takes a single q when punctured");
    config.insert(config.end(), {{"q", join(qs)},
                                 {"M", std::to_string(M)},
                                 {"rho_min", format_number(a.rho_min)},
                                 {"rho_max", format_number(a.rho_max)},
                                 {"steps", std::to_string(a.steps)}});
    if (eta) config.emplace_back("rate_punctured", format_number(a.rate_punctured));
    columns = "q, M, rho (rho' when punctured), maximized interior exponent (empty: no stationary point), "
              "maximizing alpha";
    const std::size_t per_q = static_cast<std::size_t>(a.steps);
    rows = parallel_rows(qs.size() * per_q, [&](std::size_t i) {
      const int q = qs[i / per_q];
      const double rho = a.rho_min + (a.rho_max - a.rho_min) * static_cast<double>(i % per_q) / (a.steps - 1);
      MaximizeOptions quiet;
      quiet.certify = false;
      const ExponentMaximum m = max_exponent_at_rho(rho, q, M, eta, quiet);
      Json row;
      row["q"] = q;
      row["M"] = M;
      row["rho"] = num(rho);
      row["max_exponent"] = m.has_stationary_point ? maybe(m.value) : Json(nullptr);
      row["alpha"] = m.has_stationary_point ? maybe(m.arg_max.alpha) : Json(nullptr);
      return row;
    });
  } else if (a.kind == "rate") {
    const int q = a.qs.empty() ? 3 : a.qs.front();
    const int M = a.Ms.empty() ? 2 : a.Ms.front();
    require(a.qs.size() <= 1 && a.Ms.size() <= 1, "q, M: the rate sweep takes single values");
    check_qM(q, M);
    const std::vector<double> rates = a.rates.empty() ? std::vector<double>{0.4, 0.5, 0.6, 0.7, 0.8, 0.9} : a.rates;
    for (double r : rates) puncture_eta(q, r);
    config.insert(config.end(), {{"q", std::to_string(q)},
                                 {"M", std::to_string(M)},
                                 {"rates", join(rates)},
                                 {"tolerance", format_number(a.tolerance)}});
    columns = "q, M, mother rate, punctured rate, rho'_min normalized by N', stationary floor, GVB at punctured rate";
    rows = parallel_rows(rates.size(), [&](std::size_t i) {
      GrowthRateOptions options;
      options.tolerance = a.tolerance;
      return growth_row(growth_rate(q, M, puncture_eta(q, rates[i]), options));
    });
  } else if (a.kind == "gvb") {
    const std::vector<int> qs = a.qs.empty() ? std::vector<int>{2, 3, 4, 5, 6} : a.qs;
    const std::vector<int> Ms = a.Ms.empty() ? std::vector<int>{2, 3} : a.Ms;
    for (int q : qs)
      for (int M : Ms) check_qM(q, M);
    config.insert(config.end(), {{"q", join(qs)}, {"M", join(Ms)}, {"tolerance", format_number(a.tolerance)}});
    columns = "q, M, rate 1/q, growth-rate coefficient, stationary floor, GVB at the same rate";
    rows = parallel_rows(qs.size() * Ms.size(), [&](std::size_t i) {
      GrowthRateOptions options;
      options.tolerance = a.tolerance;
      const int M = Ms[i / qs.size()];
      const int q = qs[i % qs.size()];
      return growth_row(growth_rate(q, M, std::nullopt, options));
    });
  } else if (a.kind == "finite") {
    const int q = a.qs.empty() ? 3 : a.qs.front();
    const int M = a.Ms.empty() ? 2 : a.Ms.front();
    require(a.qs.size() <= 1 && a.Ms.size() <= 1, "q, M: the finite sweep takes single values");
    check_qM(q, M);
    const std::vector<long long> Ns = a.Ns.empty() ? std::vector<long long>{96, 192, 384, 768} : a.Ns;
    std::vector<EnsembleSpec> specs;
    for (long long N : Ns) specs.push_back(finite_spec(q, M, N, 0, a.rate_punctured));
    require(a.fraction > 0.0 && a.fraction < 1.0, "fraction must lie in (0, 1)");
    config.insert(config.end(), {{"q", std::to_string(q)}, {"M", std::to_string(M)}, {"N", join(Ns)}});
    if (a.rate_punctured > 0.0) config.emplace_back("rate_punctured", format_number(a.rate_punctured));
    config.emplace_back("fraction", format_number(a.fraction));
    config.emplace_back("budget", std::to_string(a.budget));
    columns = "q, M, mother length N, transmitted length, bound delta*, delta* over transmitted length";
    rows = parallel_rows(specs.size(), [&](std::size_t i) {
      const FiniteResult r = compute_finite(specs[i], a.fraction, a.budget);
      Json row;
      row["q"] = q;
      row["M"] = M;
      row["N"] = specs[i].N();
      row["length"] = r.length();
      row["delta_star"] = r.delta;
      row["delta_star_over_length"] = num(r.ratio());
      return row;
    });
  } else if (a.kind == "contour") {
    const int q = a.qs.empty() ? 3 : a.qs.front();
    require(a.qs.size() <= 1, "q: the contour sweep takes a single value");
    require(a.Ms.empty() || (a.Ms.size() == 1 && a.Ms.front() == 2), "M: the contour sweep is for M = 2 only");
    check_qM(q, 2);
    require(a.rho > 0.0 && a.rho <= 0.5, "rho must lie in (0, 1/2]");
    require(a.steps >= 2 && a.steps <= 2000, "steps must lie in [2, 2000]");
    const double alpha_hi = std::min(1.0, 4.0 * a.rho);
    const double beta_hi = std::min(1.0, 2.0 * a.rho);
    config.insert(config.end(), {{"q", std::to_string(q)},
                                 {"M", "2"},
                                 {"rho", format_number(a.rho)},
                                 {"steps", std::to_string(a.steps)}});
    columns = "alpha, beta, f(alpha, beta, rho) (empty outside the region), "
              "stationary beta_1(alpha) (empty for alpha > 1/2)";
    const auto n = static_cast<std::size_t>(a.steps);
    rows = parallel_rows(n * n, [&](std::size_t i) {
      const double alpha = alpha_hi * static_cast<double>(i / n) / (a.steps - 1);
      const double beta = beta_hi * static_cast<double>(i % n) / (a.steps - 1);
      Json row;
      row["alpha"] = num(alpha);
      row["beta"] = num(beta);
      try {
        row["exponent"] = maybe(exponent_raa(alpha, beta, a.rho, q));
      } catch (const std::domain_error&) {
        row["exponent"] = nullptr;
      }
      const auto chain = alpha > 0.0 && alpha <= 0.5 ? beta_chain(alpha, q, 1) : std::nullopt;
      row["chain_beta"] = chain ? Json(num(chain->front())) : Json(nullptr);
      return row;
    });
  } else {
    throw std::invalid_argument("kind must be one of rho, rate, gvb, finite, contour (got " + a.kind + ")");
  }
  emit(o, out, render_table("sweep", config, rows, o.format, columns));
  return kExitOk;
}

void add_output(CLI::App* sub, Output& o, const std::string& default_format) {
  o.format = default_format;
  sub->add_option("--output,-o", o.path, "Output file (default: stdout)");
  sub->add_option("--format", o.format, "csv or json")->capture_default_str();
}

}  // namespace

int worker_count() {
  int n = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ENSEMBLE_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw std::invalid_argument(std::string("ENSEMBLE_LAB_THREADS must be a positive integer (got ") + env + ")");
    }
    n = std::min<long>(n, cap);
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weight spectra and minimum-distance bounds for repeat-multiple-accumulate ensembles",
               io::kToolName};
  app.set_version_flag("--version", std::string(io::kToolName) + " " + io::kToolVersion);
  app.require_subcommand(1);

  FiniteArgs fin;
  Output fin_out;
  auto* finite = app.add_subcommand("finite", "Finite-length d_min bound from the ensemble spectrum");
  finite->add_option("--q", fin.q, "Repetition factor")->capture_default_str();
  finite->add_option("--M", fin.M, "Number of accumulators")->capture_default_str();
  finite->add_option("--N", fin.N, "Mother block length (multiple of q)")->required();
  finite->add_option("--N-prime", fin.n_prime, "Kept length after random puncturing");
  finite->add_option("--rate-punctured", fin.rate_punctured, "Punctured rate R' (alternative to --N-prime)");
  finite->add_option("--fraction", fin.fraction, "Share of codes allowed to fall below the bound")->capture_default_str();
  finite->add_option("--budget", fin.budget, "Largest per-stage weight vector")->capture_default_str();
  add_output(finite, fin_out, "csv");

  AsymptoticArgs asy;
  Output asy_out;
  auto* asymptotic = app.add_subcommand("asymptotic", "Asymptotic d_min growth-rate coefficient");
  asymptotic->add_option("--q", asy.q, "Repetition factor")->capture_default_str();
  asymptotic->add_option("--M", asy.M, "Number of accumulators")->capture_default_str();
  asymptotic->add_option("--tolerance", asy.tolerance, "Bisection tolerance in rho")->capture_default_str();
  add_output(asymptotic, asy_out, "json");

  AsymptoticArgs pun;
  Output pun_out;
  auto* puncture = app.add_subcommand("puncture", "Growth-rate coefficient after random puncturing");
  puncture->add_option("--q", pun.q, "Repetition factor of the mother code")->capture_default_str();
  puncture->add_option("--M", pun.M, "Number of accumulators")->capture_default_str();
  puncture->add_option("--rate-punctured", pun.rate_punctured, "Punctured rate R'")->required();
  puncture->add_option("--tolerance", pun.tolerance, "Bisection tolerance in rho'")->capture_default_str();
  add_output(puncture, pun_out, "json");

  double gvb_rate = 0.0;
  Output gvb_out;
  auto* gvb = app.add_subcommand("gvb", "Relative distance on the Gilbert-Varshamov bound");
  gvb->add_option("--rate", gvb_rate, "Code rate")->required();
  add_output(gvb, gvb_out, "json");

  Output oracle_out;
  auto* oracle_check = app.add_subcommand("oracle-check", "Brute-force check of the closed-form enumerators");
  add_output(oracle_check, oracle_out, "csv");

  SweepArgs sw;
  Output sw_out;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps for plotting");
  sweep->add_option("--kind", sw.kind, "rho, rate, gvb, finite or contour")->required();
  sweep->add_option("--q", sw.qs, "Repetition factor(s)")->delimiter(',');
  sweep->add_option("--M", sw.Ms, "Number(s) of accumulators")->delimiter(',');
  sweep->add_option("--rho-min", sw.rho_min)->capture_default_str();
  sweep->add_option("--rho-max", sw.rho_max)->capture_default_str();
  sweep->add_option("--rho", sw.rho, "Fixed rho for the contour sweep")->capture_default_str();
  sweep->add_option("--steps", sw.steps, "Grid points in rho (per axis for contour)")->capture_default_str();
  sweep->add_option("--rates", sw.rates, "Punctured rates")->delimiter(',');
  sweep->add_option("--rate-punctured", sw.rate_punctured, "Punctured rate for rho and finite sweeps");
  sweep->add_option("--N", sw.Ns, "Mother block lengths")->delimiter(',');
  sweep->add_option("--fraction", sw.fraction)->capture_default_str();
  sweep->add_option("--tolerance", sw.tolerance)->capture_default_str();
  sweep->add_option("--budget", sw.budget)->capture_default_str();
  add_output(sweep, sw_out, "csv");

  // CLI11 only says "a subcommand is required" for a misspelled one.
  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !app.get_subcommand_no_throw(args.front())) {
    err << "error: unknown subcommand '" << args.front() << "'\n";
    return kExitInvalid;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*finite) return cmd_finite(fin, fin_out, out);
    if (*asymptotic) return cmd_growth("asymptotic", asy, asy_out, out);
    if (*puncture) return cmd_growth("puncture", pun, pun_out, out);
    if (*gvb) return cmd_gvb(gvb_rate, gvb_out, out);
    if (*oracle_check) return cmd_oracle(oracle_out, out);
    if (*sweep) return cmd_sweep(sw, sw_out, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInvalid;
}

}  // namespace rma::cli
