#include "fockborn/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <thread>

#include "fockborn/errors.hpp"
#include "fockborn/random.hpp"

namespace fockborn {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

double FrequencyTrace::frequency(std::size_t n) const {
  if (n < 1 || n > counts.size()) throw InvalidArgument("frequency index out of range");
  return static_cast<double>(counts[n - 1]) / static_cast<double>(n);
}

OutcomeSequence sample_outcomes(const std::vector<double>& probabilities, std::size_t draws,
                                std::uint64_t seed, unsigned threads) {
  if (probabilities.empty()) throw BadDistribution("empty distribution");
  if (draws < 1) throw InvalidArgument("sample_outcomes: need at least one draw");
  double total = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) throw BadDistribution("probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw BadDistribution("probabilities sum to " + shortest(total) + ", not 1");
  }

  std::vector<double> cumulative(probabilities.size());
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cumulative[i] = acc;
    if (probabilities[i] > 0.0) last_positive = i;
  }

  OutcomeSequence seq;
  seq.outcomes.resize(draws);
  seq.outcome_count = probabilities.size();
  seq.seed = seed;

  const CounterRng rng(seed);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const double u = rng.uniform(n);
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
      if (idx > last_positive) idx = last_positive;  // rounding at the top end
      seq.outcomes[n] = static_cast<std::uint32_t>(idx);
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(draws)));
  if (threads == 1) {
    fill(0, draws);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (draws + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(draws, b + chunk);
      if (b < e) pool.emplace_back(fill, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return seq;
}

FrequencyTrace frequency_trace(const OutcomeSequence& seq, std::uint32_t outcome) {
  if (outcome >= seq.outcome_count) throw InvalidArgument("outcome index out of range");
  FrequencyTrace trace;
  trace.outcome = outcome;
  trace.counts.resize(seq.size());
  std::uint64_t count = 0;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if (seq.outcomes[n] == outcome) ++count;
    trace.counts[n] = count;
  }
  return trace;
}

double cauchy_diagnostic(const FrequencyTrace& trace, std::size_t window) {
  const std::size_t n = trace.size();
  if (window > n) {
    throw WindowTooLarge("window " + std::to_string(window) + " exceeds trace length " +
                         std::to_string(n));
  }
  if (n == 0) return 0.0;
  const std::size_t first = std::max<std::size_t>(1, n - window);
  double lo = trace.frequency(first);
  double hi = lo;
  for (std::size_t k = first + 1; k <= n; ++k) {
    const double f = trace.frequency(k);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return hi - lo;
}

OutcomeSequence shuffled(const OutcomeSequence& seq, std::uint64_t perm_seed) {
  OutcomeSequence out = seq;
  RngStream rng(perm_seed);
  for (std::size_t i = out.outcomes.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(out.outcomes[i - 1], out.outcomes[j]);
  }
  return out;
}

bool permutation_invariance_check(const OutcomeSequence& seq, std::uint64_t perm_seed) {
  if (seq.size() == 0) return true;
  const OutcomeSequence perm = shuffled(seq, perm_seed);
  for (std::uint32_t a = 0; a < seq.outcome_count; ++a) {
    if (frequency_trace(seq, a).final_frequency() != frequency_trace(perm, a).final_frequency()) {
      return false;
    }
  }
  return true;
}

BornComparison compare_to_born(const FrequencyTrace& trace, double p_born, double sigmas) {
  if (trace.size() == 0) throw InvalidArgument("compare_to_born: empty trace");
  const double n = static_cast<double>(trace.size());
  const double deviation = std::abs(trace.final_frequency() - p_born);
  const double variance = std::max(0.0, p_born * (1.0 - p_born));
  const double bound = sigmas * std::sqrt(variance / n) + 1.0 / n;
  return {deviation, bound, deviation <= bound};
}

void write_traces_csv(std::ostream& out, const std::vector<FrequencyTrace>& traces,
                      const std::vector<std::string>& labels) {
  out << "n,outcome_label,count,frequency\n";
  if (traces.empty()) return;
  const std::size_t n = traces.front().size();
  for (const auto& t : traces) {
    if (t.size() != n) throw DimMismatch("write_traces_csv: traces of different lengths");
    if (t.outcome >= labels.size()) throw InvalidArgument("write_traces_csv: missing label");
  }
  for (std::size_t k = 1; k <= n; ++k) {
    for (const auto& t : traces) {
      out << k << ',' << labels[t.outcome] << ',' << t.counts[k - 1] << ','
          << shortest(t.frequency(k)) << '\n';
    }
  }
}

}  // namespace fockborn
