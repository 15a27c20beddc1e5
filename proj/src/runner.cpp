#include "fockborn/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "fockborn/born.hpp"
#include "fockborn/errors.hpp"
#include "fockborn/fock.hpp"
#include "fockborn/random.hpp"

namespace fockborn {

namespace {

// Stream ids for seed splitting; one per consumer so checks stay independent.
enum Stream : std::uint64_t {
  kStreamConjugation = 1,
  kStreamPue = 2,
  kStreamFunctor = 3,
  kStreamIntertwinerPhases = 4,
  kStreamIntertwining = 5,
  kStreamSampling = 6,
  kStreamShuffle = 7,
};

constexpr const char* kAnchorProjectors = "observable as complete family of rank-1 projectors";
constexpr const char* kAnchorNormalization = "probability axioms: normalization";
constexpr const char* kAnchorNonnegativity = "probability axioms: nonnegativity";
constexpr const char* kAnchorInitial = "probability axioms: initial condition";
constexpr const char* kAnchorBorn = "Born's rule from the invariant average";
constexpr const char* kAnchorTrace = "Born's rule in trace form";
constexpr const char* kAnchorEnsembleSize = "ensemble-size independence of probability";
constexpr const char* kAnchorCrossTerms = "cross-term vanishing under invariant average";
constexpr const char* kAnchorDecomposition = "conjugation decomposition of number operator";
constexpr const char* kAnchorPue = "unitary-equivalence invariance of the average";
constexpr const char* kAnchorFunctor = "second quantization is multiplicative";
constexpr const char* kAnchorGammaUnitary = "second quantization preserves unitarity";
constexpr const char* kAnchorDerivation = "derivative of second quantized one-parameter group";
constexpr const char* kAnchorFrequency = "frequency of occurrence as probability";
constexpr const char* kAnchorCauchy = "frequency series is Cauchy";
constexpr const char* kAnchorPermutation = "ensemble outcomes are permutation invariant";
constexpr const char* kAnchorReproducible = "outcome sequence reproducible from seed";
constexpr const char* kAnchorEquivalence = "quantum-mechanical equivalence is commutativity";
constexpr const char* kAnchorIntertwiner = "intertwining isomorphism";
constexpr const char* kAnchorNonPreservation = "intertwiners do not preserve probabilities";

using Check = std::function<CheckRecord()>;

CheckRecord guarded(const std::string& section, const std::string& name, const std::string& anchor,
                    const Check& check) {
  try {
    return check();
  } catch (const Error& e) {
    return failed(section, name, anchor, e.kind() + ": " + e.what());
  } catch (const std::exception& e) {
    return failed(section, name, anchor, e.what());
  }
}

Provenance provenance_for(const RunOptions& options) {
  Provenance p;
  p.seed = options.seed;
  p.timestamp = options.timestamp;
  return p;
}

std::uint64_t stream_seed(std::uint64_t seed, Stream s) { return CounterRng(seed).split(s).seed(); }

// Probe Hamiltonian for the derivation and functor spot-checks: dense, with
// spectrum spread so the third-order Taylor term does not vanish.
COperator probe_hamiltonian(const Scenario& s) {
  const Eigen::Index d = s.dim;
  return s.observable_a.self_adjoint() + 0.5 * s.observable_psi.self_adjoint() +
         0.25 * COperator::Identity(d, d);
}

}  // namespace

std::vector<double> scenario_born_probabilities(const Scenario& scenario) {
  const FockSpace space(scenario.dim, 1);
  const InvariantAverage avg(scenario.observable_psi, scenario.initial_index, 1, space);
  std::vector<double> p;
  for (std::size_t a = 0; a < scenario.observable_a.size(); ++a) {
    p.push_back(std::clamp(born_probability(avg, scenario.observable_a, a), 0.0, 1.0));
  }
  return p;
}

Report run_verify(const Scenario& s, const RunOptions& options) {
  const std::string section = "verify";
  Report report("verify", s.name, provenance_for(options));
  const double tol = s.tolerances.structural * options.tolerance_scale;
  const double cross_tol = s.tolerances.cross_term * options.tolerance_scale;
  const FockSpace space(s.dim, s.fock_cutoff);
  const ObservableSpec& obs_a = s.observable_a;
  const ObservableSpec& psi = s.observable_psi;
  const std::size_t k0 = s.initial_index;

  report.add(guarded(section, "projectors_A_valid", kAnchorProjectors, [&] {
    return at_most(section, "projectors_A_valid", kAnchorProjectors,
                   obs_a.projectors().check().worst(), tol);
  }));
  report.add(guarded(section, "projectors_Psi_valid", kAnchorProjectors, [&] {
    return at_most(section, "projectors_Psi_valid", kAnchorProjectors,
                   psi.projectors().check().worst(), tol);
  }));

  // Axioms, worst case over every ensemble size M.
  {
    double worst_norm = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    double worst_delta = 0.0;
    std::optional<std::string> error;
    try {
      for (int m = 1; m <= s.fock_cutoff; ++m) {
        const InvariantAverage avg(psi, k0, m, space);
        const auto r = probability_axioms_report(avg, obs_a, tol, cross_tol);
        worst_norm = std::max(worst_norm, r.normalization.measured);
        lowest = std::min(lowest, r.nonnegativity.measured);
        worst_delta = std::max(worst_delta, r.initial_condition.measured);
      }
    } catch (const Error& e) {
      error = e.kind() + ": " + e.what();
    }
    if (error) {
      report.add(failed(section, "axiom_normalization", kAnchorNormalization, *error));
      report.add(failed(section, "axiom_nonnegativity", kAnchorNonnegativity, *error));
      report.add(failed(section, "axiom_initial_condition", kAnchorInitial, *error));
    } else {
      report.add(at_most(section, "axiom_normalization", kAnchorNormalization, worst_norm, tol));
      report.add(at_least(section, "axiom_nonnegativity", kAnchorNonnegativity, lowest,
                          -cross_tol));
      report.add(at_most(section, "axiom_initial_condition", kAnchorInitial, worst_delta, tol));
    }
  }

  // Born's rule: average vs overlap vs trace, and independence of M.
  {
    double worst_overlap = 0.0;
    double worst_trace = 0.0;
    double worst_m_drift = 0.0;
    nlohmann::ordered_json probs = nlohmann::ordered_json::object();
    std::optional<std::string> error;
    try {
      std::vector<double> first;
      for (int m = 1; m <= s.fock_cutoff; ++m) {
        const InvariantAverage avg(psi, k0, m, space);
        for (std::size_t a = 0; a < obs_a.size(); ++a) {
          const double p = born_probability(avg, obs_a, a);
          worst_overlap = std::max(worst_overlap, std::abs(p - overlap_probability(obs_a, a, psi, k0)));
          worst_trace = std::max(worst_trace, std::abs(p - trace_probability(obs_a, a, psi, k0)));
          if (m == 1) {
            first.push_back(p);
            probs[obs_a.labels()[a]] = p;
          } else {
            worst_m_drift = std::max(worst_m_drift, std::abs(p - first[a]));
          }
        }
      }
    } catch (const Error& e) {
      error = e.kind() + ": " + e.what();
    }
    if (error) {
      report.add(failed(section, "born_rule_overlap", kAnchorBorn, *error));
      report.add(failed(section, "born_rule_trace", kAnchorTrace, *error));
      report.add(failed(section, "born_rule_ensemble_size", kAnchorEnsembleSize, *error));
    } else {
      report.add(at_most(section, "born_rule_overlap", kAnchorBorn, worst_overlap, tol));
      report.add(at_most(section, "born_rule_trace", kAnchorTrace, worst_trace, tol));
      report.add(at_most(section, "born_rule_ensemble_size", kAnchorEnsembleSize, worst_m_drift, tol));
      nlohmann::ordered_json detail;
      detail["initial_outcome"] = s.initial_outcome();
      detail["probabilities"] = probs;
      report.set_detail("born", detail);
    }
  }

  const TorusRepresentation rep_psi = s.psi_representation();

  report.add(guarded(section, "cross_term_vanishing", kAnchorCrossTerms, [&] {
    double worst = 0.0;
    const auto g = random_torus_point(rep_psi.size(), stream_seed(options.seed, kStreamConjugation), 0);
    for (std::size_t a = 0; a < obs_a.size(); ++a) {
      const auto conj = conjugate_number_operator(rep_psi, g, obs_a, a, space);
      for (int m = 1; m <= s.fock_cutoff; ++m) {
        const InvariantAverage avg(psi, k0, m, space);
        for (const auto& c : cross_term_averages(avg, conj.decomposition)) {
          worst = std::max(worst, std::abs(c));
        }
      }
    }
    return at_most(section, "cross_term_vanishing", kAnchorCrossTerms, worst, cross_tol);
  }));

  report.add(guarded(section, "conjugation_decomposition", kAnchorDecomposition, [&] {
    double worst = 0.0;
    const auto seed = stream_seed(options.seed, kStreamConjugation);
    for (int sample = 0; sample < kConjugationSamples; ++sample) {
      const auto g = random_torus_point(rep_psi.size(), seed, static_cast<std::uint64_t>(sample));
      for (std::size_t a = 0; a < obs_a.size(); ++a) {
        const auto conj = conjugate_number_operator(rep_psi, g, obs_a, a, space);
        worst = std::max(worst, max_norm_diff(conj.direct, conj.decomposition.reassemble()));
      }
    }
    return at_most(section, "conjugation_decomposition", kAnchorDecomposition, worst, tol);
  }));

  report.add(guarded(section, "pue_invariance", kAnchorPue, [&] {
    double worst = 0.0;
    const InvariantAverage avg(psi, k0, s.fock_cutoff, space);
    for (std::size_t a = 0; a < obs_a.size(); ++a) {
      const auto n_a = number_operator(obs_a.projector(a), space);
      worst = std::max(worst, check_pue(avg, rep_psi, n_a, kPueSamples,
                                        stream_seed(options.seed, kStreamPue)));
    }
    return at_most(section, "pue_invariance", kAnchorPue, worst, tol);
  }));

  report.add(guarded(section, "gamma_functoriality", kAnchorFunctor, [&] {
    const auto g = random_torus_point(rep_psi.size(), stream_seed(options.seed, kStreamFunctor), 0);
    const COperator o1 = evaluate(rep_psi, g) * obs_a.projectors().basis();
    const COperator o2 = probe_hamiltonian(s);
    const double err = max_norm_diff(gamma(o1 * o2, space), gamma(o1, space) * gamma(o2, space));
    return at_most(section, "gamma_functoriality", kAnchorFunctor, err, tol);
  }));

  report.add(guarded(section, "gamma_unitarity", kAnchorGammaUnitary, [&] {
    const auto g = random_torus_point(rep_psi.size(), stream_seed(options.seed, kStreamFunctor), 1);
    const auto big_u = gamma(evaluate(rep_psi, g) * obs_a.projectors().basis(), space);
    const double err = max_norm_diff(big_u.adjoint() * big_u, SectoredOperator::identity(space));
    return at_most(section, "gamma_unitarity", kAnchorGammaUnitary, err, tol);
  }));

  report.add(guarded(section, "derivation_property_ratio", kAnchorDerivation, [&] {
    const COperator h = probe_hamiltonian(s);
    const double coarse = derivation_residual(h, space, kDerivativeStepCoarse);
    const double fine = derivation_residual(h, space, kDerivativeStepFine);
    return in_range(section, "derivation_property_ratio", kAnchorDerivation, coarse / fine,
                    kDerivativeRatioLow, kDerivativeRatioHigh);
  }));

  return report;
}

SimulationResult run_simulate(const Scenario& s, const RunOptions& options) {
  const std::string section = "simulate";
  SimulationResult result{Report("simulate", s.name, provenance_for(options)), {}, s.observable_a.labels()};
  Report& report = result.report;
  const double sigma = s.tolerances.statistical_sigma * options.tolerance_scale;
  const double cauchy_threshold = kCauchyThreshold * options.tolerance_scale;

  std::vector<double> p;
  try {
    p = scenario_born_probabilities(s);
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
  } catch (const Error& e) {
    report.add(failed(section, "born_distribution", kAnchorBorn, e.kind() + ": " + e.what()));
    return result;
  }

  const auto n = static_cast<std::size_t>(s.trials);
  const auto sampling_seed = stream_seed(options.seed, kStreamSampling);
  OutcomeSequence seq;
  try {
    seq = sample_outcomes(p, n, sampling_seed, std::max(1u, std::thread::hardware_concurrency()));
  } catch (const Error& e) {
    report.add(failed(section, "sampling", kAnchorFrequency, e.kind() + ": " + e.what()));
    return result;
  }

  const std::size_t window = std::min(kCauchyWindow, n);
  nlohmann::ordered_json freq_detail = nlohmann::ordered_json::object();
  for (std::uint32_t a = 0; a < s.observable_a.size(); ++a) {
    const std::string& label = s.observable_a.labels()[a];
    auto trace = frequency_trace(seq, a);
    const auto cmp = compare_to_born(trace, p[a], sigma);
    CheckRecord rec = at_most(section, "frequency_vs_born[" + label + "]", kAnchorFrequency,
                              cmp.deviation, cmp.bound);
    rec.pass = cmp.within_bound;
    report.add(std::move(rec));
    report.add(at_most(section, "cauchy_tail[" + label + "]", kAnchorCauchy,
                       cauchy_diagnostic(trace, window), cauchy_threshold));
    nlohmann::ordered_json d;
    d["born"] = p[a];
    d["final_frequency"] = trace.final_frequency();
    d["count"] = trace.counts.back();
    freq_detail[label] = d;
    result.traces.push_back(std::move(trace));
  }

  report.add(flag(section, "permutation_invariance", kAnchorPermutation,
                  permutation_invariance_check(seq, stream_seed(options.seed, kStreamShuffle))));

  const auto serial = sample_outcomes(p, n, sampling_seed, 1);
  report.add(flag(section, "sequence_reproducible", kAnchorReproducible,
                  serial.outcomes == seq.outcomes));

  nlohmann::ordered_json detail;
  detail["trials"] = s.trials;
  detail["cauchy_window"] = window;
  detail["outcomes"] = freq_detail;
  report.set_detail("simulate", detail);
  return result;
}

Report run_equivalence(const Scenario& s, const RunOptions& options) {
  const std::string section = "equivalence";
  Report report("equivalence", s.name, provenance_for(options));
  const double tol = s.tolerances.structural * options.tolerance_scale;
  const ObservableSpec& obs_a = s.observable_a;
  const ObservableSpec& obs_b = s.observable_psi;

  bool equivalent = false;
  double proj_comm = std::nan("");
  try {
    proj_comm = max_projector_commutator(obs_a, obs_b);
    equivalent = proj_comm <= tol;
  } catch (const Error& e) {
    report.add(failed(section, "equivalence_cross_check", kAnchorEquivalence, e.kind() + ": " + e.what()));
    return report;
  }

  report.add(guarded(section, "equivalence_cross_check", kAnchorEquivalence, [&] {
    const double op_comm = max_norm(commutator(obs_a.self_adjoint(), obs_b.self_adjoint()));
    return flag(section, "equivalence_cross_check", kAnchorEquivalence,
                equivalent == (op_comm <= tol));
  }));

  const std::size_t n = obs_a.size();
  std::vector<Permutation> sigmas =
      n <= 6 ? Permutation::all(n) : std::vector<Permutation>{Permutation::identity(n)};
  const CounterRng phase_rng(stream_seed(options.seed, kStreamIntertwinerPhases));

  std::vector<COperator> intertwiners;
  std::vector<std::vector<double>> all_phases;
  report.add(guarded(section, "intertwiner_unitary", kAnchorIntertwiner, [&] {
    double worst = 0.0;
    std::uint64_t counter = 0;
    for (const auto& sigma : sigmas) {
      std::vector<double> phases(n);
      for (auto& ph : phases) ph = 2.0 * std::numbers::pi * phase_rng.uniform(counter++);
      COperator t = intertwiner(obs_a, obs_b, sigma, phases);
      worst = std::max(worst, max_norm(t.adjoint() * t - COperator::Identity(t.rows(), t.cols())));
      intertwiners.push_back(std::move(t));
      all_phases.push_back(std::move(phases));
    }
    return at_most(section, "intertwiner_unitary", kAnchorIntertwiner, worst, tol);
  }));

  report.add(guarded(section, "intertwiner_transition_delta", kAnchorNonPreservation, [&] {
    if (intertwiners.size() != sigmas.size()) throw InvalidArgument("intertwiners unavailable");
    double worst = 0.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
          const double t = std::norm(obs_b.ket(m).dot(intertwiners[i] * obs_a.ket(k)));
          worst = std::max(worst, std::abs(t - (sigmas[i](k) == m ? 1.0 : 0.0)));
        }
      }
    }
    return at_most(section, "intertwiner_transition_delta", kAnchorNonPreservation, worst, tol);
  }));

  report.add(guarded(section, "intertwining_relation", kAnchorIntertwiner, [&] {
    if (intertwiners.size() != sigmas.size()) throw InvalidArgument("intertwiners unavailable");
    const auto rep_a = canonical_representation(obs_a);
    const auto rep_b = canonical_representation(obs_b);
    const auto seed = stream_seed(options.seed, kStreamIntertwining);
    double worst = 0.0;
    for (int sample = 0; sample < kIntertwiningSamples; ++sample) {
      const auto theta = random_torus_point(n, seed, static_cast<std::uint64_t>(sample));
      const std::size_t i = static_cast<std::size_t>(sample) % sigmas.size();
      const COperator lhs = intertwiners[i] * evaluate(rep_a, theta);
      const COperator rhs = evaluate(rep_b, permute_point(theta, sigmas[i])) * intertwiners[i];
      worst = std::max(worst, max_norm_diff(lhs, rhs));
    }
    return at_most(section, "intertwining_relation", kAnchorIntertwiner, worst,
                   kIntertwiningTolerance * options.tolerance_scale);
  }));

  nlohmann::ordered_json witness = nullptr;
  report.add(guarded(section, "probability_non_preservation", kAnchorNonPreservation, [&] {
    // Non-equivalent pairs must show a mismatch for every sigma.
    std::size_t missing = 0;
    for (const auto& sigma : sigmas) {
      const auto w = probability_mismatch_witness(obs_a, obs_b, sigma, tol);
      if (!w) ++missing;
      if (w && witness.is_null() && sigma.image() == Permutation::identity(n).image()) {
        witness = {{"m", obs_b.labels()[w->first]}, {"n", obs_a.labels()[w->second]}};
      }
    }
    return flag(section, "probability_non_preservation", kAnchorNonPreservation,
                equivalent || missing == 0);
  }));

  nlohmann::ordered_json detail;
  detail["equivalent"] = equivalent;
  detail["max_projector_commutator"] = proj_comm;
  detail["permutations_checked"] = sigmas.size();
  detail["witness"] = witness;
  report.set_detail("equivalence", detail);
  return report;
}

}  // namespace fockborn
