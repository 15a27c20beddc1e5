#include "fockborn/born.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fockborn/errors.hpp"
#include "fockborn/random.hpp"

namespace fockborn {

InvariantAverage::InvariantAverage(ObservableSpec reference, std::size_t k0, int particles,
                                   FockSpace space)
    : reference_(std::move(reference)),
      k0_(k0),
      particles_(particles),
      space_(std::move(space)),
      state_(FockVector::zero(space_)),
      denominator_(0.0) {
  if (k0_ >= reference_.size()) {
    throw InvalidArgument("reference outcome " + std::to_string(k0_) + " out of range");
  }
  if (particles_ < 1 || particles_ > space_.cutoff()) {
    throw InvalidArgument("particle count " + std::to_string(particles_) + " outside 1.." +
                          std::to_string(space_.cutoff()));
  }
  if (reference_.dim() != space_.single_particle_dim()) {
    throw DimMismatch("reference observable and Fock space disagree on the single-particle dim");
  }
  state_ = FockVector::in_sector(space_, particles_,
                                 symmetric_power_state(reference_.ket(k0_), particles_));
  const auto n_psi = number_operator(reference_.projector(k0_), space_);
  denominator_ = fock_inner(state_, apply(n_psi, state_));
  if (std::abs(denominator_) < 1e-300) {
    throw ZeroDenominator("<psi|N_psi|psi> vanishes");
  }
}

Complex InvariantAverage::operator()(const SectoredOperator& x) const {
  if (!same_shape(x, space_)) throw DimMismatch("average: operator lives on another Fock space");
  return fock_inner(state_, apply(x, state_)) / denominator_;
}

Complex average(const InvariantAverage& avg, const SectoredOperator& x) { return avg(x); }

SectoredOperator ConjugationDecomposition::reassemble() const {
  if (diagonal_ops.empty()) throw InvalidArgument("empty decomposition");
  SectoredOperator sum = diagonal_coeffs[0] * diagonal_ops[0];
  for (std::size_t k = 1; k < diagonal_ops.size(); ++k) {
    sum = sum + Complex(diagonal_coeffs[k]) * diagonal_ops[k];
  }
  for (const auto& t : cross_terms) sum = sum + t.phase * t.op;
  return sum;
}

ConjugatedNumberOperator conjugate_number_operator(const TorusRepresentation& rep_psi,
                                                   const TorusPoint& g,
                                                   const ObservableSpec& obs_a,
                                                   std::size_t outcome, const FockSpace& space) {
  if (rep_psi.dim() != obs_a.dim() || obs_a.dim() != space.single_particle_dim()) {
    throw DimMismatch("conjugate_number_operator: single-particle dims disagree");
  }
  if (outcome >= obs_a.size()) throw InvalidArgument("outcome index out of range");

  const COperator& p_a = obs_a.projector(outcome);
  const auto n_a = number_operator(p_a, space);
  const auto big_u = gamma(evaluate(rep_psi, g), space);
  SectoredOperator direct = big_u.adjoint() * n_a * big_u;

  ConjugationDecomposition dec;
  const CVector a_ket = obs_a.ket(outcome);
  std::vector<double> theta(rep_psi.size());
  for (std::size_t k = 0; k < rep_psi.size(); ++k) theta[k] = rep_psi.weights()[k] * g[k];

  for (std::size_t k = 0; k < rep_psi.size(); ++k) {
    const COperator& p_k = rep_psi.projectors()[k];
    dec.diagonal_coeffs.push_back(std::norm(rep_psi.projectors().representative(k).dot(a_ket)));
    dec.diagonal_ops.push_back(dgamma(p_k, space));
  }
  for (std::size_t m = 0; m < rep_psi.size(); ++m) {
    for (std::size_t k = 0; k < rep_psi.size(); ++k) {
      if (m == k) continue;
      const COperator sandwich = rep_psi.projectors()[m] * p_a * rep_psi.projectors()[k];
      dec.cross_terms.push_back(
          {m, k, dgamma(sandwich, space), std::polar(1.0, theta[k] - theta[m])});
    }
  }
  return {std::move(direct), std::move(dec)};
}

TorusPoint random_torus_point(std::size_t n, std::uint64_t seed, std::uint64_t sample) {
  const CounterRng rng = CounterRng(seed).split(sample);
  std::vector<double> angles(n);
  for (std::size_t i = 0; i < n; ++i) angles[i] = 2.0 * std::numbers::pi * rng.uniform(i);
  return TorusPoint(std::move(angles));
}

double check_pue(const InvariantAverage& avg, const TorusRepresentation& rep_psi,
                 const SectoredOperator& x, int samples, std::uint64_t seed) {
  const Complex base = avg(x);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto g = random_torus_point(rep_psi.size(), seed, static_cast<std::uint64_t>(s));
    const auto big_u = gamma(evaluate(rep_psi, g), avg.space());
    worst = std::max(worst, std::abs(avg(big_u.adjoint() * x * big_u) - base));
  }
  return worst;
}

std::vector<Complex> cross_term_averages(const InvariantAverage& avg,
                                         const ConjugationDecomposition& decomposition) {
  std::vector<Complex> out;
  out.reserve(decomposition.cross_terms.size());
  for (const auto& t : decomposition.cross_terms) out.push_back(avg(t.op));
  return out;
}

double born_probability(const InvariantAverage& avg, const ObservableSpec& obs_a,
                        std::size_t outcome) {
  if (obs_a.dim() != avg.space().single_particle_dim()) {
    throw DimMismatch("born_probability: observable and average disagree on dims");
  }
  if (outcome >= obs_a.size()) throw InvalidArgument("outcome index out of range");
  return std::real(avg(number_operator(obs_a.projector(outcome), avg.space())));
}

double overlap_probability(const ObservableSpec& obs_a, std::size_t outcome,
                           const ObservableSpec& psi, std::size_t k0) {
  if (obs_a.dim() != psi.dim()) throw DimMismatch("overlap_probability: dims disagree");
  return std::norm(obs_a.ket(outcome).dot(psi.ket(k0)));
}

double trace_probability(const ObservableSpec& obs_a, std::size_t outcome,
                         const ObservableSpec& psi, std::size_t k0) {
  return std::real(trace_product(obs_a.projector(outcome), psi.projector(k0)));
}

ProbabilityAxiomsReport probability_axioms_report(const InvariantAverage& avg,
                                                  const ObservableSpec& obs_a, double tol,
                                                  double nonneg_tol) {
  ProbabilityAxiomsReport r;
  double sum = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < obs_a.size(); ++a) {
    const double p = born_probability(avg, obs_a, a);
    r.probabilities.push_back(p);
    sum += p;
    lowest = std::min(lowest, p);
  }
  double delta_err = 0.0;
  for (std::size_t k = 0; k < avg.reference().size(); ++k) {
    const double p = born_probability(avg, avg.reference(), k);
    r.reference_row.push_back(p);
    delta_err = std::max(delta_err, std::abs(p - (k == avg.reference_outcome() ? 1.0 : 0.0)));
  }
  const double norm_err = std::abs(sum - 1.0);
  r.normalization = {norm_err, tol, norm_err <= tol};
  r.nonnegativity = {lowest, nonneg_tol, lowest >= -nonneg_tol};
  r.initial_condition = {delta_err, tol, delta_err <= tol};
  return r;
}

}  // namespace fockborn
