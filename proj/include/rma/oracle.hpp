#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rma/combinatorics.hpp"
#include "rma/enumerators.hpp"

// Brute-force ground truth at tiny block lengths. The brute_* routines count
// on bit vectors and never touch the closed-form kernels.
namespace rma::oracle {

/// [w, d_1, ..., d_M] or, for punctured ensembles, [w, d_1, ..., d_M, d'].
using CellKey = std::vector<long long>;

/// Exact expected number of codewords per cell, averaged over the
/// interleaver (and puncturing-pattern) ensemble. Absent cells are zero.
struct ExactSpectrum {
  std::map<CellKey, BigRational> counts;
};

/// Tally of (input weight, output weight) over all 2^N inputs of one
/// accumulator with zero initial state. N <= 14.
std::map<std::pair<int, int>, BigCount> brute_accumulator_iowe(int N);

enum class InterleaverEnumeration {
  /// Each stage draws uniformly from all words of its input weight; stage
  /// kernels are tallied over every length-N word.
  kWeightClasses,
  /// Every tuple of permutations, each with probability 1/(N!)^M.
  kPermutations,
};

ExactSpectrum brute_uniform_interleaver(const EnsembleSpec& spec,
                                        InterleaverEnumeration mode = InterleaverEnumeration::kWeightClasses);

/// As above, additionally averaged over all C(N, N') kept-position sets.
ExactSpectrum brute_punctured(const EnsembleSpec& spec,
                              InterleaverEnumeration mode = InterleaverEnumeration::kWeightClasses);

/// The closed-form enumerator evaluated exactly on every cell, including
/// the all-zero input, for comparison with the brute-force tallies.
ExactSpectrum closed_form_cells(const EnsembleSpec& spec);

/// Sums cells by their last key entry (output weight, or d' if punctured).
std::vector<BigRational> output_weight_marginal(const ExactSpectrum& s, long long max_weight);

/// Description of the first cell where the two disagree, if any.
std::optional<std::string> first_mismatch(const ExactSpectrum& a, const ExactSpectrum& b);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The standard equivalence suite: accumulator counts for N <= 12, RA for
/// N = qK <= 7, RAA and punctured RAA at N = 6.
std::vector<CheckOutcome> run_oracle_suite();

}  // namespace rma::oracle
