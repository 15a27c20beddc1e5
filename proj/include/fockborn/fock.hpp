#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fockborn/linalg.hpp"

namespace fockborn {

/// Mode occupation numbers (n_1, ..., n_d) of a symmetric M-particle state.
class OccupationVector {
 public:
  explicit OccupationVector(std::vector<int> counts);

  const std::vector<int>& counts() const noexcept { return counts_; }
  std::size_t modes() const noexcept { return counts_.size(); }
  int operator[](std::size_t i) const { return counts_.at(i); }
  int total() const noexcept { return total_; }

  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

/// All occupation vectors of d modes with total M, reverse-lexicographic:
/// (M,0,...,0) first, (0,...,0,M) last. Length C(M+d-1, d-1).
std::vector<OccupationVector> enumerate_basis(int modes, int particles);

/// C(M+d-1, d-1).
std::size_t symmetric_sector_dim(int modes, int particles);

/// Truncated symmetric Fock space: sectors M = 0..cutoff over C^d.
///
/// Each sector is coordinatized by the orthonormal occupation basis
///   |n> = sqrt(prod n_i! / M!) * sum of all distinct words with occupation n,
/// which is the isometry used to restrict tensor-power operators.
class FockSpace {
 public:
  FockSpace(int single_particle_dim, int cutoff);

  int single_particle_dim() const noexcept { return modes_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t sector_count() const noexcept { return sectors_->size(); }
  Eigen::Index sector_dim(int particles) const;
  std::vector<Eigen::Index> sector_dims() const;

  const std::vector<OccupationVector>& basis(int particles) const;
  /// Position of `occ` inside its sector basis. Throws InvalidArgument.
  Eigen::Index index_of(const OccupationVector& occ) const;

  /// sqrt(prod n_i! / M!) for basis element `index` of sector M.
  double word_amplitude(int particles, Eigen::Index index) const;

  /// Sector-basis index of the basis state containing tensor word `word`
  /// (flat index, first factor most significant).
  Eigen::Index word_to_index(int particles, std::size_t word) const;
  std::size_t tensor_dim(int particles) const;

  /// Occupation coordinates of the projection of a tensor-power vector of
  /// length d^M onto the symmetric subspace, i.e. V^dag x.
  CVector restrict_tensor(int particles, std::span<const Complex> tensor) const;

  /// V e_index as a tensor-power vector.
  CVector embed_basis_state(int particles, Eigen::Index index) const;

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.modes_ == b.modes_ && a.cutoff_ == b.cutoff_;
  }

 private:
  struct Sector {
    std::vector<OccupationVector> basis;
    std::vector<double> amplitude;
    std::vector<Eigen::Index> word_index;  // size d^M
  };
  int modes_;
  int cutoff_;
  std::shared_ptr<const std::vector<Sector>> sectors_;
};

/// State with one coordinate block per particle-number sector.
class FockVector {
 public:
  explicit FockVector(std::vector<CVector> blocks) : blocks_(std::move(blocks)) {}
  static FockVector zero(const FockSpace& space);
  /// Zero everywhere except sector `particles`.
  static FockVector in_sector(const FockSpace& space, int particles, CVector block);
  static FockVector basis_state(const FockSpace& space, const OccupationVector& occ);

  std::size_t sector_count() const noexcept { return blocks_.size(); }
  const CVector& block(std::size_t m) const { return blocks_.at(m); }
  CVector& block(std::size_t m) { return blocks_.at(m); }
  const std::vector<CVector>& blocks() const noexcept { return blocks_; }
  double norm() const;

 private:
  std::vector<CVector> blocks_;
};

/// Particle-number conserving operator: block M acts on sector M.
class SectoredOperator {
 public:
  explicit SectoredOperator(std::vector<COperator> blocks);
  static SectoredOperator identity(const FockSpace& space);
  static SectoredOperator zero(const FockSpace& space);

  std::size_t sector_count() const noexcept { return blocks_.size(); }
  const COperator& block(std::size_t m) const { return blocks_.at(m); }
  const std::vector<COperator>& blocks() const noexcept { return blocks_; }

  SectoredOperator adjoint() const;

  friend SectoredOperator operator*(const SectoredOperator& a, const SectoredOperator& b);
  friend SectoredOperator operator+(const SectoredOperator& a, const SectoredOperator& b);
  friend SectoredOperator operator-(const SectoredOperator& a, const SectoredOperator& b);
  friend SectoredOperator operator*(Complex s, const SectoredOperator& a);

 private:
  std::vector<COperator> blocks_;
};

/// Largest entry magnitude of a - b over all blocks.
double max_norm_diff(const SectoredOperator& a, const SectoredOperator& b);
double max_norm(const SectoredOperator& op);
bool is_unitary(const SectoredOperator& op, double tol = kStructuralTolerance);
bool same_shape(const SectoredOperator& op, const FockSpace& space);

/// phi^{vee M} in the occupation basis:
///   coordinate(n) = sqrt(M! / prod n_i!) * prod phi_i^{n_i}.
/// Throws NotNormalized unless |phi| = 1 within 1e-10.
CVector symmetric_power_state(const CVector& phi, int particles);

/// Occupation coordinates of the symmetric projection of
/// factors[0] (x) ... (x) factors[M-1]; for M copies of phi this equals
/// symmetric_power_state(phi, M).
CVector symmetric_product(const FockSpace& space, std::span<const CVector> factors);

/// Second quantization: block M is O^{(x)M} restricted to the symmetric
/// subspace; the vacuum block is 1.
SectoredOperator gamma(const COperator& op, const FockSpace& space);

/// Derivation lift: block M is sum_j I^{(x)(j-1)} (x) O (x) I^{(x)(M-j)}
/// restricted to the symmetric subspace; the vacuum block is 0.
SectoredOperator dgamma(const COperator& op, const FockSpace& space);

/// N_p = dgamma(p) for a rank-1 orthogonal projector p. Throws NotProjector.
SectoredOperator number_operator(const COperator& projector, const FockSpace& space,
                                 double tol = kStructuralTolerance);

/// Max-norm residual of the central difference
///   (Gamma(e^{i step H}) - Gamma(e^{-i step H})) / (2 step) - i dgamma(H),
/// which is O(step^2) for self-adjoint H.
double derivation_residual(const COperator& hamiltonian, const FockSpace& space, double step);

FockVector apply(const SectoredOperator& op, const FockVector& v);
Complex fock_inner(const FockVector& u, const FockVector& v);

}  // namespace fockborn
