// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Inputs are drawn from fixed seeds so every run is identical.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fockborn/born.hpp"
#include "fockborn/ensemble.hpp"
#include "fockborn/runner.hpp"
#include "fockborn/scenario.hpp"
#include "oracles.hpp"

using namespace fockborn;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Sample {
  ObservableSpec psi;
  ObservableSpec a;
  TorusRepresentation rep_psi;
  FockSpace space;
};

constexpr int kScenarioCount = 50;
constexpr int kCutoff = 3;

ObservableSpec observable_from_basis(const COperator& basis) {
  std::vector<double> values;
  for (Eigen::Index n = 0; n < basis.cols(); ++n) values.push_back(static_cast<double>(n));
  return ObservableSpec(ObservableSpec::default_labels(static_cast<std::size_t>(basis.cols())),
                        values, ProjectorFamily::from_basis(basis));
}

std::vector<Sample> make_sweep() {
  std::vector<Sample> sweep;
  oracle::Inputs in(20240501);
  for (int s = 0; s < kScenarioCount; ++s) {
    const Eigen::Index d = 2 + s % 3;
    auto psi = observable_from_basis(haar_unitary(d, 1000 + 2 * static_cast<std::uint64_t>(s)));
    auto a = observable_from_basis(haar_unitary(d, 1001 + 2 * static_cast<std::uint64_t>(s)));
    std::vector<int> weights(static_cast<std::size_t>(d));
    for (auto& w : weights) w = (in.uniform() < 0.5 ? -1 : 1) * (1 + static_cast<int>(in.uniform(0.0, 3.0)));
    TorusRepresentation rep(weights, psi.projectors());
    sweep.push_back({std::move(psi), std::move(a), std::move(rep), FockSpace(static_cast<int>(d), kCutoff)});
  }
  return sweep;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome born_rule(const std::vector<Sample>& sweep) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& s : sweep) {
    for (std::size_t k0 = 0; k0 < s.psi.size(); ++k0) {
      const CVector psi = s.psi.projectors().basis().col(static_cast<Eigen::Index>(k0));
      const COperator p_psi = psi * psi.adjoint();
      for (int m = 1; m <= kCutoff; ++m) {
        const InvariantAverage avg(s.psi, k0, m, s.space);
        for (std::size_t a = 0; a < s.a.size(); ++a) {
          const double p = born_probability(avg, s.a, a);
          const CVector ket = s.a.projectors().basis().col(static_cast<Eigen::Index>(a));
          const double overlap = std::norm(ket.dot(psi));
          const double trace = (ket * ket.adjoint() * p_psi).trace().real();
          worst = std::max({worst, std::abs(p - overlap), std::abs(p - trace)});
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && secs <= 30.0,
          "max |<N_a> - overlap|, |<N_a> - trace| = " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome cross_terms(const std::vector<Sample>& sweep) {
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& s = sweep[i];
    const auto g = random_torus_point(s.psi.size(), 77, i);
    for (std::size_t a = 0; a < s.a.size(); ++a) {
      const auto dec = conjugate_number_operator(s.rep_psi, g, s.a, a, s.space).decomposition;
      for (std::size_t k0 = 0; k0 < s.psi.size(); ++k0) {
        for (int m = 1; m <= kCutoff; ++m) {
          const InvariantAverage avg(s.psi, k0, m, s.space);
          for (const auto& v : cross_term_averages(avg, dec)) {
            worst = std::max(worst, std::abs(v));
            ++count;
          }
        }
      }
    }
  }
  return {count > 0 && worst <= 1e-12,
          std::to_string(count) + " cross-term averages, max magnitude " + fmt("%.3g", worst)};
}

Outcome decomposition(const std::vector<Sample>& sweep) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& s = sweep[i];
    for (std::uint64_t j = 0; j < 50; ++j) {
      const auto g = random_torus_point(s.psi.size(), 1000 + i, j);
      const std::size_t a = j % s.a.size();
      const auto conj = conjugate_number_operator(s.rep_psi, g, s.a, a, s.space);
      // Direct side rebuilt here from Gamma and N_a, not taken from the library pair.
      const auto big_u = gamma(evaluate(s.rep_psi, g), s.space);
      const auto direct = big_u.adjoint() * number_operator(s.a.projector(a), s.space) * big_u;
      worst = std::max(worst, max_norm_diff(direct, conj.decomposition.reassemble()));
    }
  }
  return {worst <= 1e-10, "50 g per scenario, max reassembly error " + fmt("%.3g", worst)};
}

Outcome pue(const std::vector<Sample>& sweep) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& s = sweep[i];
    const InvariantAverage avg(s.psi, i % s.psi.size(), kCutoff, s.space);
    for (std::size_t a = 0; a < s.a.size(); ++a) {
      worst = std::max(worst, check_pue(avg, s.rep_psi, number_operator(s.a.projector(a), s.space),
                                        100, 500 + i));
    }
  }
  return {worst <= 1e-10, "100 torus points per scenario, max deviation " + fmt("%.3g", worst)};
}

Outcome axioms(const std::vector<Sample>& sweep) {
  double norm = 0.0;
  double lowest = 1.0;
  double delta = 0.0;
  for (const auto& s : sweep) {
    for (std::size_t k0 = 0; k0 < s.psi.size(); ++k0) {
      for (int m = 1; m <= kCutoff; ++m) {
        const InvariantAverage avg(s.psi, k0, m, s.space);
        const auto r = probability_axioms_report(avg, s.a);
        norm = std::max(norm, r.normalization.measured);
        lowest = std::min(lowest, r.nonnegativity.measured);
        delta = std::max(delta, r.initial_condition.measured);
      }
    }
  }
  return {norm <= 1e-10 && lowest >= -1e-12 && delta <= 1e-10,
          "|sum - 1| " + fmt("%.3g", norm) + ", min " + fmt("%.3g", lowest) + ", |delta err| " +
              fmt("%.3g", delta)};
}

Outcome functor() {
  oracle::Inputs in(606);
  double mult = 0.0;
  double unit = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int cutoff = 1; cutoff <= 4; ++cutoff) {
      const FockSpace space(d, cutoff);
      for (int trial = 0; trial < 5; ++trial) {
        const COperator o1 = in.dense(d);
        const COperator o2 = in.dense(d);
        mult = std::max(mult, max_norm_diff(gamma(o1 * o2, space), gamma(o1, space) * gamma(o2, space)));
        const auto u = gamma(in.unitary(d), space);
        unit = std::max(unit, max_norm_diff(u.adjoint() * u, SectoredOperator::identity(space)));
      }
    }
  }
  return {mult <= 1e-10 && unit <= 1e-10,
          "multiplicativity " + fmt("%.3g", mult) + ", unitarity " + fmt("%.3g", unit)};
}

Outcome derivation() {
  oracle::Inputs in(707);
  double lo = 1e300;
  double hi = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const FockSpace space(d, kCutoff);
    for (int trial = 0; trial < 3; ++trial) {
      const COperator h = in.hermitian(d);
      const double ratio = derivation_residual(h, space, 1e-3) / derivation_residual(h, space, 1e-4);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {lo >= 50.0 && hi <= 200.0, "residual ratio h=1e-3 / h=1e-4 in [" + fmt("%.2f", lo) + ", " +
                                         fmt("%.2f", hi) + "]"};
}

Outcome intertwiners() {
  oracle::Inputs in(808);
  double unit = 0.0;
  double delta = 0.0;
  bool witnesses = true;
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const auto a = observable_from_basis(in.unitary(d));
    const auto b = observable_from_basis(in.unitary(d));
    for (const auto& sigma : Permutation::all(a.size())) {
      const COperator t = intertwiner(a, b, sigma, in.angles(a.size()));
      unit = std::max(unit, max_norm_diff(t.adjoint() * t, COperator::Identity(d, d)));
      for (std::size_t m = 0; m < b.size(); ++m) {
        for (std::size_t n = 0; n < a.size(); ++n) {
          const double p = std::norm(b.ket(m).dot(t * a.ket(n)));
          delta = std::max(delta, std::abs(p - (sigma(n) == m ? 1.0 : 0.0)));
        }
      }
      if (!quantum_equivalent(a, b) && !probability_mismatch_witness(a, b, sigma)) witnesses = false;
    }
  }
  return {unit <= 1e-10 && delta <= 1e-10 && witnesses,
          "unitarity " + fmt("%.3g", unit) + ", delta identity " + fmt("%.3g", delta) +
              (witnesses ? ", witness found for every sigma" : ", missing witness")};
}

Outcome generator_round_trip() {
  oracle::Inputs in(909);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    std::vector<double> values;
    for (Eigen::Index n = 0; n < d; ++n) values.push_back(in.uniform(-10.0, 10.0));
    const COperator u = in.unitary(d);
    const COperator h = u * CVector(Eigen::Map<Eigen::VectorXd>(values.data(), d).cast<Complex>()).asDiagonal() *
                        u.adjoint();
    const auto obs = observable_from_selfadjoint(0.5 * (h + h.adjoint()));
    const auto rep = canonical_representation(obs);
    const COperator g = generator(rep, direction_for_values(rep, obs.values()));
    const COperator& expect = h;
    worst = std::max(worst, max_norm_diff(g, expect));
  }
  return {worst <= 1e-10, "max reconstruction error " + fmt("%.3g", worst)};
}

Outcome frequency_convergence() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Scenario> scenarios;
  for (const char* f : {"hadamard_d2.json", "random_d3.json"}) {
    scenarios.push_back(load_scenario(std::string(FOCKBORN_SCENARIO_DIR) + "/" + f));
  }
  std::size_t pairs = 0;
  std::size_t within = 0;
  double worst_cauchy = 0.0;
  for (const auto& s : scenarios) {
    const auto p = scenario_born_probabilities(s);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto seq = sample_outcomes(p, 100000, seed, 4);
      for (std::uint32_t a = 0; a < p.size(); ++a) {
        const auto trace = frequency_trace(seq, a);
        ++pairs;
        if (compare_to_born(trace, p[a]).within_bound) ++within;
        worst_cauchy = std::max(worst_cauchy, cauchy_diagnostic(trace, 1000));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rate = static_cast<double>(within) / static_cast<double>(pairs);
  return {rate >= 0.95 && worst_cauchy <= 0.01 && secs <= 60.0,
          std::to_string(within) + "/" + std::to_string(pairs) + " within bound, max tail oscillation " +
              fmt("%.3g", worst_cauchy) + ", " + fmt("%.2f", secs) + " s"};
}

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& out_path) {
  const std::string cmd = std::string(FOCKBORN_CLI_PATH) + " " + args + " --output " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

Outcome end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const char* f : {"hadamard_d2.json", "random_d3.json"}) {
    const std::string args = std::string("all --config ") + FOCKBORN_SCENARIO_DIR + "/" + f;
    const auto first = run_cli(args, (std::filesystem::temp_directory_path() / "fockborn_acceptance_1.json").string());
    const auto second = run_cli(args, (std::filesystem::temp_directory_path() / "fockborn_acceptance_2.json").string());
    const bool identical = !first.out.empty() && first.out == second.out;
    const bool passed = first.code == 0 && second.code == 0 &&
                        first.out.find("\"overall_pass\": true") != std::string::npos &&
                        first.out.find("\"pass\": false") == std::string::npos;
    ok = ok && identical && passed;
    detail += std::string(f) + ": exit " + std::to_string(first.code) +
              (identical ? ", identical" : ", DIFFERENT") + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {ok && secs <= 60.0, detail + fmt("%.2f", secs) + " s"};
}

}  // namespace

int main() {
  const auto sweep = make_sweep();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Born rule from the invariant average", [&] { return born_rule(sweep); }},
      {"cross-term vanishing", [&] { return cross_terms(sweep); }},
      {"conjugation decomposition", [&] { return decomposition(sweep); }},
      {"unitary-equivalence invariance", [&] { return pue(sweep); }},
      {"probability axioms", [&] { return axioms(sweep); }},
      {"second quantization functor", functor},
      {"derivation property", derivation},
      {"intertwiner properties", intertwiners},
      {"generator reconstruction", generator_round_trip},
      {"frequency convergence", frequency_convergence},
      {"end-to-end CLI", end_to_end},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %-40s %s  (%s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
