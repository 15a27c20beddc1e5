#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fockborn {

/// i.i.d. outcome indices from a categorical distribution. Draw n uses
/// counter n of the seeded counter-based generator, so the sequence does not
/// depend on how generation is split across threads.
struct OutcomeSequence {
  std::vector<std::uint32_t> outcomes;
  std::size_t outcome_count = 0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return outcomes.size(); }
};

/// Running counts of one outcome: counts[n-1] = #{j <= n : outcome_j = alpha}.
/// Frequencies are derived on demand so n * nu_n stays an exact integer.
struct FrequencyTrace {
  std::uint32_t outcome = 0;
  std::vector<std::uint64_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  /// nu_n for 1 <= n <= size().
  double frequency(std::size_t n) const;
  double final_frequency() const { return frequency(size()); }
};

/// Throws BadDistribution unless entries are finite, nonnegative and sum to 1
/// within 1e-10; InvalidArgument when draws < 1. `threads` only affects speed.
OutcomeSequence sample_outcomes(const std::vector<double>& probabilities, std::size_t draws,
                                std::uint64_t seed, unsigned threads = 1);

FrequencyTrace frequency_trace(const OutcomeSequence& seq, std::uint32_t outcome);

/// max_{n,m in tail} |nu_n - nu_m| over the last `window` prefix lengths
/// (n, m >= N - window). Throws WindowTooLarge when window > N.
double cauchy_diagnostic(const FrequencyTrace& trace, std::size_t window);

/// Fisher-Yates shuffle driven by `perm_seed`.
OutcomeSequence shuffled(const OutcomeSequence& seq, std::uint64_t perm_seed);

/// True iff every outcome's final frequency is identical for the sequence
/// and a random permutation of it.
bool permutation_invariance_check(const OutcomeSequence& seq, std::uint64_t perm_seed);

struct BornComparison {
  double deviation;
  double bound;
  bool within_bound;
};

/// deviation = |nu_N - p|, bound = sigmas * sqrt(p(1-p)/N) + 1/N.
BornComparison compare_to_born(const FrequencyTrace& trace, double p_born,
                               double sigmas = 3.0);

/// CSV with header `n,outcome_label,count,frequency`, one row per prefix
/// length and outcome. `labels[trace.outcome]` names each trace.
void write_traces_csv(std::ostream& out, const std::vector<FrequencyTrace>& traces,
                      const std::vector<std::string>& labels);

}  // namespace fockborn
