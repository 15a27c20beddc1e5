#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fockborn {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using COperator = Eigen::MatrixXcd;

/// Default tolerance for structural checks (unitarity, projector algebra).
inline constexpr double kStructuralTolerance = 1e-10;

COperator adjoint(const COperator& op);

/// Max-norm, max |entry|.
double max_norm(const COperator& op);
double max_norm_diff(const COperator& a, const COperator& b);

bool is_unitary(const COperator& op, double tol = kStructuralTolerance);
bool is_self_adjoint(const COperator& op, double tol = kStructuralTolerance);

COperator commutator(const COperator& a, const COperator& b);

/// Tr(AB) without forming the product. Throws DimMismatch.
Complex trace_product(const COperator& a, const COperator& b);

/// |v><v| for a (presumed normalized) vector.
COperator ket_bra(const CVector& v);

/// Measured deviations of a projector list from being a complete family of
/// rank-1 orthogonal projectors; every field is a max-norm residual.
struct ProjectorFamilyCheck {
  double idempotency = 0.0;    // ||P^2 - P||
  double hermiticity = 0.0;    // ||P^dag - P||
  double orthogonality = 0.0;  // ||P_m P_n||, m != n
  double completeness = 0.0;   // ||sum P - I||
  double rank_one = 0.0;       // |Tr P - 1|

  double worst() const;
  bool passes(double tol) const { return worst() <= tol; }
};

/// Ordered complete family of rank-1 orthogonal projectors on C^dim.
///
/// The public constructors validate; `unchecked` exists only to build
/// deliberately broken families for negative controls.
class ProjectorFamily {
 public:
  explicit ProjectorFamily(std::vector<COperator> projectors,
                           double tol = kStructuralTolerance);

  /// Projectors onto the columns of a unitary matrix. Throws NotUnitary.
  static ProjectorFamily from_basis(const COperator& basis,
                                    double tol = kStructuralTolerance);

  static ProjectorFamily unchecked(std::vector<COperator> projectors);

  std::size_t size() const noexcept { return projectors_.size(); }
  Eigen::Index dim() const noexcept;
  const COperator& operator[](std::size_t n) const { return projectors_.at(n); }
  auto begin() const noexcept { return projectors_.begin(); }
  auto end() const noexcept { return projectors_.end(); }

  ProjectorFamilyCheck check() const;

  /// Unit vector spanning the range of projector n: its largest column,
  /// normalized, with the phase fixed so that the largest-magnitude entry is
  /// real and positive.
  CVector representative(std::size_t n) const;

  /// Family {U^dag P_n U}.
  ProjectorFamily conjugated(const COperator& unitary) const;

  /// All representatives as the columns of one matrix.
  COperator basis() const;

 private:
  ProjectorFamily() = default;
  std::vector<COperator> projectors_;
};

/// Rank-1 spectral data: `values[n]` pairs with `projectors[n]`.
struct SpectralDecomposition {
  ProjectorFamily projectors;
  std::vector<double> values;
};

/// Eigenphases in (-pi, pi], sorted ascending, of a non-degenerate unitary.
/// Throws NotUnitary or DegenerateSpectrum.
SpectralDecomposition spectral_projectors(const COperator& unitary,
                                          double tol = kStructuralTolerance);

/// Eigenvalues sorted ascending of a non-degenerate self-adjoint operator.
/// Throws NotSelfAdjoint or DegenerateSpectrum.
SpectralDecomposition self_adjoint_spectrum(const COperator& op,
                                            double tol = kStructuralTolerance);

/// Sum_n e^{i phase_n} P_n.
COperator reconstruct_unitary(const SpectralDecomposition& spectrum);

/// Haar-distributed unitary from a seed (QR of a complex Ginibre matrix with
/// the diagonal-phase fix). Reproducible across platforms.
COperator haar_unitary(Eigen::Index dim, std::uint64_t seed);

/// Matrix exponential of i*t*H for self-adjoint H, through its eigenbasis.
COperator exp_i_hermitian(const COperator& h, double t);

}  // namespace fockborn
