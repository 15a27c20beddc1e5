#pragma once

#include <cstdint>
#include <vector>

#include "fockborn/fock.hpp"
#include "fockborn/representation.hpp"

namespace fockborn {

/// Cross-terms vanish exactly in exact arithmetic, hence the tighter bound.
inline constexpr double kCrossTermTolerance = 1e-12;

/// The invariant average
///
///   <X>_psi = <psi^{vee M}| X |psi^{vee M}> / <psi^{vee M}| N_psi |psi^{vee M}>
///
/// where psi is the representative ket of outcome k0 of the reference
/// observable and N_psi its number operator. The denominator equals M for a
/// normalized psi, so <dgamma(O)>_psi = <psi|O|psi>: the per-trial average.
class InvariantAverage {
 public:
  /// Throws InvalidArgument unless 1 <= particles <= space.cutoff() and
  /// k0 indexes an outcome of `reference`.
  InvariantAverage(ObservableSpec reference, std::size_t k0, int particles, FockSpace space);

  const ObservableSpec& reference() const noexcept { return reference_; }
  std::size_t reference_outcome() const noexcept { return k0_; }
  int particles() const noexcept { return particles_; }
  const FockSpace& space() const noexcept { return space_; }
  const FockVector& reference_state() const noexcept { return state_; }
  Complex denominator() const noexcept { return denominator_; }

  Complex operator()(const SectoredOperator& x) const;

 private:
  ObservableSpec reference_;
  std::size_t k0_;
  int particles_;
  FockSpace space_;
  FockVector state_;
  Complex denominator_;
};

Complex average(const InvariantAverage& avg, const SectoredOperator& x);

struct CrossTerm {
  std::size_t m;
  std::size_t k;
  SectoredOperator op;  // dgamma(p_{psi_m} p_a p_{psi_k})
  Complex phase;        // e^{i(theta_k - theta_m)}
};

/// Analytic expansion of Gamma(U_Psi(g))^dag N_a Gamma(U_Psi(g)):
///   sum_k |<a|psi_k>|^2 N_{psi_k} + sum_{m != k} e^{i(theta_k - theta_m)}
///   dgamma(p_{psi_m} p_a p_{psi_k}),  theta_k = k_k g_k.
struct ConjugationDecomposition {
  std::vector<double> diagonal_coeffs;
  std::vector<SectoredOperator> diagonal_ops;  // N_{psi_k}
  std::vector<CrossTerm> cross_terms;          // ordered pairs, m-major

  SectoredOperator reassemble() const;
};

struct ConjugatedNumberOperator {
  SectoredOperator direct;  // computed by conjugation
  ConjugationDecomposition decomposition;
};

ConjugatedNumberOperator conjugate_number_operator(const TorusRepresentation& rep_psi,
                                                   const TorusPoint& g,
                                                   const ObservableSpec& obs_a,
                                                   std::size_t outcome, const FockSpace& space);

/// Uniform point of [0, 2pi)^n.
TorusPoint random_torus_point(std::size_t n, std::uint64_t seed, std::uint64_t sample);

/// max over `samples` uniform points g of
///   |<Gamma(U(g))^dag X Gamma(U(g))> - <X>|.
double check_pue(const InvariantAverage& avg, const TorusRepresentation& rep_psi,
                 const SectoredOperator& x, int samples, std::uint64_t seed);

/// <dgamma(p_{psi_m} p_a p_{psi_k})>_psi for every cross term, in order.
std::vector<Complex> cross_term_averages(const InvariantAverage& avg,
                                         const ConjugationDecomposition& decomposition);

/// <N_a>_psi (real part; the imaginary part is rounding noise).
double born_probability(const InvariantAverage& avg, const ObservableSpec& obs_a,
                        std::size_t outcome);

/// |<a|psi>|^2
double overlap_probability(const ObservableSpec& obs_a, std::size_t outcome,
                           const ObservableSpec& psi, std::size_t k0);

/// Tr{p_a p_psi}
double trace_probability(const ObservableSpec& obs_a, std::size_t outcome,
                         const ObservableSpec& psi, std::size_t k0);

struct AxiomCheck {
  double measured;
  double threshold;
  bool pass;
};

struct ProbabilityAxiomsReport {
  std::vector<double> probabilities;   // <N_a> per outcome of A
  std::vector<double> reference_row;   // <N_{psi_k'}> per outcome of Psi
  AxiomCheck normalization;            // |sum_a <N_a> - 1|
  AxiomCheck nonnegativity;            // min_a <N_a>, pass iff >= -threshold
  AxiomCheck initial_condition;        // max_k' |<N_{psi_k'}> - delta|

  bool pass() const noexcept {
    return normalization.pass && nonnegativity.pass && initial_condition.pass;
  }
};

ProbabilityAxiomsReport probability_axioms_report(const InvariantAverage& avg,
                                                  const ObservableSpec& obs_a,
                                                  double tol = kStructuralTolerance,
                                                  double nonneg_tol = kCrossTermTolerance);

}  // namespace fockborn
