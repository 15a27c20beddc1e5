#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fockborn/representation.hpp"

namespace fockborn {

struct Tolerances {
  double structural = kStructuralTolerance;
  double cross_term = 1e-12;
  double statistical_sigma = 3.0;
};

/// A validated experiment: an initial outcome of Psi, then a measurement of A.
struct Scenario {
  std::string name;
  int dim = 0;
  ObservableSpec observable_a;
  ObservableSpec observable_psi;
  std::vector<int> psi_weights;
  std::size_t initial_index = 0;
  int fock_cutoff = 3;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  Tolerances tolerances;

  const std::string& initial_outcome() const { return observable_psi.labels().at(initial_index); }
  TorusRepresentation psi_representation() const {
    return TorusRepresentation(psi_weights, observable_psi.projectors());
  }
};

inline constexpr int kDefaultFockCutoff = 3;
inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Parses and validates a scenario document. `source` names the input in
/// error messages. Throws ParseError (with line/field context) or
/// ValidationError (naming the violated invariant).
Scenario parse_scenario(const std::string& text, const std::string& source = "<memory>");

Scenario load_scenario(const std::filesystem::path& path);

/// --seed beats the scenario's seed, which beats FOCKBORN_SEED, which beats
/// kDefaultSeed. Throws ValidationError on a malformed environment value.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed, const Scenario& scenario,
                           const char* env_value);

namespace testing {
/// Replaces the projectors of A (or Psi) with an unvalidated family, for
/// negative controls.
void inject_projectors(Scenario& scenario, bool observable_a, std::vector<COperator> projectors);
}  // namespace testing

}  // namespace fockborn
