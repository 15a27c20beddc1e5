#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fockborn/ensemble.hpp"
#include "fockborn/report.hpp"
#include "fockborn/scenario.hpp"

namespace fockborn {

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Multiplies every tolerance and statistical threshold.
  double tolerance_scale = 1.0;
  std::optional<std::string> timestamp;
};

/// Fixed parameters of the orchestrated checks.
inline constexpr int kConjugationSamples = 20;
inline constexpr int kPueSamples = 100;
inline constexpr int kIntertwiningSamples = 100;
inline constexpr double kIntertwiningTolerance = 1e-9;
inline constexpr std::size_t kCauchyWindow = 1000;
inline constexpr double kCauchyThreshold = 0.01;
inline constexpr double kDerivativeStepCoarse = 1e-3;
inline constexpr double kDerivativeStepFine = 1e-4;
inline constexpr double kDerivativeRatioLow = 50.0;
inline constexpr double kDerivativeRatioHigh = 200.0;

Report run_verify(const Scenario& scenario, const RunOptions& options);

struct SimulationResult {
  Report report;
  std::vector<FrequencyTrace> traces;
  std::vector<std::string> labels;
};

SimulationResult run_simulate(const Scenario& scenario, const RunOptions& options);

Report run_equivalence(const Scenario& scenario, const RunOptions& options);

/// Born probabilities of every outcome of A for the scenario's initial
/// condition, computed through the invariant average at M = 1 and clamped to
/// [0, 1].
std::vector<double> scenario_born_probabilities(const Scenario& scenario);

}  // namespace fockborn
