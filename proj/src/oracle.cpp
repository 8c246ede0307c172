#include "rma/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace rma::oracle {
namespace {

using Mask = std::uint32_t;

constexpr int kMaxAccumulatorLength = 14;
constexpr int kMaxPermutationLength = 8;
constexpr double kPermutationWorkBudget = 2e9;

int weight(Mask m) { return std::popcount(m); }

Mask accumulate(Mask u, int n) {
  Mask v = 0;
  Mask state = 0;
  for (int i = 0; i < n; ++i) {
    state ^= (u >> i) & 1U;
    v |= state << i;
  }
  return v;
}

Mask permute(Mask c, const std::vector<int>& pi) {
  Mask out = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) out |= ((c >> i) & 1U) << pi[i];
  return out;
}

Mask repeat(Mask u, int K, int q) {
  Mask out = 0;
  for (int i = 0; i < K; ++i)
    if ((u >> i) & 1U)
      for (int j = 0; j < q; ++j) out |= Mask{1} << (i * q + j);
  return out;
}

std::vector<Mask> words_of_weight(int n, int x) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (weight(m) == x) out.push_back(m);
  return out;
}

void check_small(const EnsembleSpec& spec, long long limit) {
  spec.validate();
  if (spec.N() > limit) {
    throw BudgetExceeded("oracle: N = " + std::to_string(spec.N()) + " exceeds brute-force limit " +
                         std::to_string(limit));
  }
}

// Dense tally over keys [w, d_1..d_M(, d')].
class Tally {
 public:
  Tally(const EnsembleSpec& spec, bool punctured) {
    radix_.push_back(spec.K + 1);
    for (int l = 0; l < spec.M; ++l) radix_.push_back(spec.N() + 1);
    if (punctured) radix_.push_back(*spec.punctured_length + 1);
    std::size_t size = 1;
    for (long long r : radix_) size *= static_cast<std::size_t>(r);
    counts_.assign(size, 0);
  }

  std::size_t index(const CellKey& key) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < radix_.size(); ++i) idx = idx * radix_[i] + key[i];
    return idx;
  }

  std::uint64_t& operator[](std::size_t idx) { return counts_[idx]; }

  ExactSpectrum finish(const BigCount& denominator) const {
    ExactSpectrum out;
    CellKey key(radix_.size());
    for (std::size_t idx = 0; idx < counts_.size(); ++idx) {
      if (counts_[idx] == 0) continue;
      std::size_t rest = idx;
      for (std::size_t i = radix_.size(); i-- > 0;) {
        key[i] = static_cast<long long>(rest % radix_[i]);
        rest /= radix_[i];
      }
      out.counts[key] = BigRational(BigCount(counts_[idx]), denominator);
    }
    return out;
  }

 private:
  std::vector<long long> radix_;
  std::vector<std::uint64_t> counts_;
};

ExactSpectrum by_permutations(const EnsembleSpec& spec, bool punctured) {
  check_small(spec, kMaxPermutationLength);
  const int N = static_cast<int>(spec.N());
  const int K = static_cast<int>(spec.K);
  std::vector<Mask> keep_sets{(Mask{1} << N) - 1};
  if (punctured) keep_sets = words_of_weight(N, static_cast<int>(*spec.punctured_length));

  std::vector<int> pi(N);
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(pi);
  while (std::next_permutation(pi.begin(), pi.end()));

  const double work = std::pow(static_cast<double>(perms.size()), spec.M) * std::ldexp(1.0, K) * keep_sets.size();
  if (work > kPermutationWorkBudget) throw BudgetExceeded("oracle: permutation enumeration too large");

  Tally tally(spec, punctured);
  const int inputs = 1 << K;
  // stage_words[l][u]: word entering stage l for input u.
  std::vector<std::vector<Mask>> stage_words(spec.M + 1, std::vector<Mask>(inputs));
  for (int u = 0; u < inputs; ++u) stage_words[0][u] = repeat(static_cast<Mask>(u), K, spec.q);

  CellKey key(1 + spec.M + (punctured ? 1 : 0));
  auto descend = [&](auto&& self, int level) -> void {
    if (level == spec.M) {
      for (int u = 0; u < inputs; ++u) {
        key[0] = weight(static_cast<Mask>(u));
        for (int l = 1; l <= spec.M; ++l) key[l] = weight(stage_words[l][u]);
        if (!punctured) {
          ++tally[tally.index(key)];
          continue;
        }
        const Mask c = stage_words[spec.M][u];
        for (Mask keep : keep_sets) {
          key.back() = weight(c & keep);
          ++tally[tally.index(key)];
        }
      }
      return;
    }
    for (const auto& p : perms) {
      for (int u = 0; u < inputs; ++u) stage_words[level + 1][u] = accumulate(permute(stage_words[level][u], p), N);
      self(self, level + 1);
    }
  };
  descend(descend, 0);

  BigCount denominator = 1;
  for (int l = 0; l < spec.M; ++l) denominator *= BigCount(perms.size());
  denominator *= BigCount(keep_sets.size());
  return tally.finish(denominator);
}

ExactSpectrum by_weight_classes(const EnsembleSpec& spec, bool punctured) {
  check_small(spec, kMaxAccumulatorLength);
  const int N = static_cast<int>(spec.N());
  const int K = static_cast<int>(spec.K);
  const Mask all = Mask{1} << N;

  // Stage kernel, tallied over every word: kernel[x][d] = Pr(output d | input x).
  std::vector<std::vector<BigCount>> acc_counts(N + 1, std::vector<BigCount>(N + 1));
  std::vector<BigCount> class_size(N + 1);
  for (Mask m = 0; m < all; ++m) {
    ++acc_counts[weight(m)][weight(accumulate(m, N))];
    ++class_size[weight(m)];
  }
  std::vector<std::vector<BigRational>> kernel(N + 1, std::vector<BigRational>(N + 1));
  for (int x = 0; x <= N; ++x)
    for (int d = 0; d <= N; ++d) kernel[x][d] = BigRational(acc_counts[x][d], class_size[x]);

  std::vector<std::vector<BigRational>> keep_kernel;
  if (punctured) {
    const int n_keep = static_cast<int>(*spec.punctured_length);
    const auto keep_sets = words_of_weight(N, n_keep);
    if (static_cast<double>(all) * keep_sets.size() > 5e7) throw BudgetExceeded("oracle: puncturing enumeration too large");
    std::vector<std::vector<BigCount>> counts(N + 1, std::vector<BigCount>(n_keep + 1));
    for (Mask m = 0; m < all; ++m)
      for (Mask keep : keep_sets) ++counts[weight(m)][weight(m & keep)];
    keep_kernel.assign(N + 1, std::vector<BigRational>(n_keep + 1));
    for (int d = 0; d <= N; ++d)
      for (int dk = 0; dk <= n_keep; ++dk)
        keep_kernel[d][dk] = BigRational(counts[d][dk], class_size[d] * BigCount(keep_sets.size()));
  }

  ExactSpectrum out;
  CellKey key(1 + spec.M + (punctured ? 1 : 0));
  auto descend = [&](auto&& self, int level, int x, const BigRational& p) -> void {
    if (level == spec.M) {
      if (!punctured) {
        out.counts[key] += p;
        return;
      }
      for (std::size_t dk = 0; dk < keep_kernel[x].size(); ++dk) {
        if (keep_kernel[x][dk] == 0) continue;
        key.back() = static_cast<long long>(dk);
        out.counts[key] += p * keep_kernel[x][dk];
      }
      return;
    }
    for (int d = 0; d <= N; ++d) {
      if (kernel[x][d] == 0) continue;
      key[level + 1] = d;
      self(self, level + 1, d, p * kernel[x][d]);
    }
  };
  for (Mask u = 0; u < (Mask{1} << K); ++u) {
    key[0] = weight(u);
    descend(descend, 0, weight(repeat(u, K, spec.q)), BigRational(1));
  }
  return out;
}

}  // namespace

std::map<std::pair<int, int>, BigCount> brute_accumulator_iowe(int N) {
  if (N < 1 || N > kMaxAccumulatorLength) {
    throw BudgetExceeded("brute_accumulator_iowe: need 1 <= N <= " + std::to_string(kMaxAccumulatorLength));
  }
  std::map<std::pair<int, int>, BigCount> out;
  for (Mask u = 0; u < (Mask{1} << N); ++u) ++out[{weight(u), weight(accumulate(u, N))}];
  return out;
}

ExactSpectrum brute_uniform_interleaver(const EnsembleSpec& spec, InterleaverEnumeration mode) {
  return mode == InterleaverEnumeration::kPermutations ? by_permutations(spec, false) : by_weight_classes(spec, false);
}

ExactSpectrum brute_punctured(const EnsembleSpec& spec, InterleaverEnumeration mode) {
  if (!spec.punctured_length) throw std::invalid_argument("brute_punctured: ensemble has no puncturing");
  return mode == InterleaverEnumeration::kPermutations ? by_permutations(spec, true) : by_weight_classes(spec, true);
}

ExactSpectrum closed_form_cells(const EnsembleSpec& spec) {
  check_small(spec, 16);
  const long long N = spec.N();
  const bool punctured = spec.punctured_length.has_value();
  ExactSpectrum out;
  CellKey zero(1 + spec.M + (punctured ? 1 : 0), 0);
  out.counts[zero] = 1;

  IoweQuery query;
  query.d.assign(spec.M, 0);
  CellKey key(zero.size());
  auto descend = [&](auto&& self, int level) -> void {
    if (level == spec.M) {
      if (!punctured) {
        const BigRational e = exact_expected_iowe(spec, query);
        if (e != 0) out.counts[key] = e;
        return;
      }
      for (long long dk = 0; dk <= *spec.punctured_length; ++dk) {
        query.d_prime = dk;
        key.back() = dk;
        const BigRational e = exact_expected_iowe(spec, query);
        if (e != 0) out.counts[key] = e;
      }
      return;
    }
    for (long long d = 0; d <= N; ++d) {
      query.d[level] = d;
      key[level + 1] = d;
      self(self, level + 1);
    }
  };
  for (long long w = 1; w <= spec.K; ++w) {
    query.w = w;
    key[0] = w;
    descend(descend, 0);
  }
  return out;
}

std::vector<BigRational> output_weight_marginal(const ExactSpectrum& s, long long max_weight) {
  std::vector<BigRational> out(static_cast<std::size_t>(max_weight + 1));
  for (const auto& [key, value] : s.counts) out.at(static_cast<std::size_t>(key.back())) += value;
  return out;
}

std::optional<std::string> first_mismatch(const ExactSpectrum& a, const ExactSpectrum& b) {
  auto describe = [](const CellKey& key, const BigRational& x, const BigRational& y) {
    std::ostringstream os;
    os << "cell [";
    for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
    os << "]: " << x << " vs " << y;
    return os.str();
  };
  for (const auto& [key, x] : a.counts) {
    auto it = b.counts.find(key);
    const BigRational y = it == b.counts.end() ? BigRational(0) : it->second;
    if (x != y) return describe(key, x, y);
  }
  for (const auto& [key, y] : b.counts) {
    if (y != 0 && !a.counts.contains(key)) return describe(key, BigRational(0), y);
  }
  return std::nullopt;
}

std::vector<CheckOutcome> run_oracle_suite() {
  std::vector<CheckOutcome> out;

  {
    CheckOutcome c{"accumulator tally equals closed-form numerator, N = 1..12", true, ""};
    for (int N = 1; N <= 12 && c.passed; ++N) {
      const auto tally = brute_accumulator_iowe(N);
      for (int w = 0; w <= N && c.passed; ++w) {
        for (int d = 0; d <= N; ++d) {
          BigCount expected = 0;
          if (w == 0) {
            expected = d == 0 ? 1 : 0;
          } else if (d >= 1) {
            expected = exact_binomial(d - 1, (w + 1) / 2 - 1) * exact_binomial(N - d, w / 2);
          }
          auto it = tally.find({w, d});
          const BigCount got = it == tally.end() ? BigCount(0) : it->second;
          if (got != expected) {
            c.passed = false;
            c.detail = "N=" + std::to_string(N) + " w=" + std::to_string(w) + " d=" + std::to_string(d);
            break;
          }
        }
      }
    }
    out.push_back(c);
  }

  auto compare = [&](const std::string& name, const EnsembleSpec& spec, InterleaverEnumeration mode) {
    const ExactSpectrum brute =
        spec.punctured_length ? brute_punctured(spec, mode) : brute_uniform_interleaver(spec, mode);
    const auto mismatch = first_mismatch(brute, closed_form_cells(spec));
    out.push_back({name, !mismatch, mismatch.value_or("")});
  };

  for (auto [q, K] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {7, 1}}) {
    EnsembleSpec spec{q, 1, K, std::nullopt};
    const std::string tag = "RA q=" + std::to_string(q) + " K=" + std::to_string(K);
    compare(tag + " over all N! interleavers", spec, InterleaverEnumeration::kPermutations);
    compare(tag + " over weight classes", spec, InterleaverEnumeration::kWeightClasses);
  }
  compare("RAA q=3 K=2 over all (6!)^2 interleaver pairs", EnsembleSpec{3, 2, 2, std::nullopt},
          InterleaverEnumeration::kPermutations);
  compare("punctured RAA q=3 K=2 N'=4 over interleaver pairs and keep-sets", EnsembleSpec{3, 2, 2, 4},
          InterleaverEnumeration::kPermutations);
  return out;
}

}  // namespace rma::oracle
