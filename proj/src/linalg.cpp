#include "fockborn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "fockborn/errors.hpp"
#include "fockborn/random.hpp"

namespace fockborn {

namespace {

void require_square(const COperator& op, const char* what) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw DimMismatch(std::string(what) + ": operator must be square and non-empty, got " +
                      std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
  }
}

std::vector<std::size_t> argsort(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

}  // namespace

COperator adjoint(const COperator& op) { return op.adjoint(); }

double max_norm(const COperator& op) {
  return op.size() == 0 ? 0.0 : op.cwiseAbs().maxCoeff();
}

double max_norm_diff(const COperator& a, const COperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimMismatch("max_norm_diff: shapes differ");
  }
  return max_norm(a - b);
}

bool is_unitary(const COperator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  const COperator residual = op.adjoint() * op - COperator::Identity(op.rows(), op.cols());
  return max_norm(residual) <= tol;
}

bool is_self_adjoint(const COperator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  return max_norm(op - op.adjoint()) <= tol;
}

COperator commutator(const COperator& a, const COperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimMismatch("commutator: shapes differ");
  }
  return a * b - b * a;
}

Complex trace_product(const COperator& a, const COperator& b) {
  require_square(a, "trace_product");
  require_square(b, "trace_product");
  if (a.rows() != b.rows()) {
    throw DimMismatch("trace_product: dims " + std::to_string(a.rows()) + " and " +
                      std::to_string(b.rows()));
  }
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).sum();
}

COperator ket_bra(const CVector& v) { return v * v.adjoint(); }

double ProjectorFamilyCheck::worst() const {
  return std::max({idempotency, hermiticity, orthogonality, completeness, rank_one});
}

ProjectorFamily::ProjectorFamily(std::vector<COperator> projectors, double tol)
    : projectors_(std::move(projectors)) {
  if (projectors_.empty()) {
    throw InvalidProjectorFamily("projector family is empty");
  }
  for (const auto& p : projectors_) {
    require_square(p, "ProjectorFamily");
    if (p.rows() != projectors_.front().rows()) {
      throw DimMismatch("ProjectorFamily: projectors of different dims");
    }
  }
  if (static_cast<Eigen::Index>(projectors_.size()) != dim()) {
    throw InvalidProjectorFamily("a complete rank-1 family on C^" + std::to_string(dim()) +
                                 " needs " + std::to_string(dim()) + " projectors, got " +
                                 std::to_string(projectors_.size()));
  }
  const auto c = check();
  if (!c.passes(tol)) {
    throw InvalidProjectorFamily(
        "not a complete family of rank-1 orthogonal projectors (idempotency " +
        std::to_string(c.idempotency) + ", hermiticity " + std::to_string(c.hermiticity) +
        ", orthogonality " + std::to_string(c.orthogonality) + ", completeness " +
        std::to_string(c.completeness) + ", rank " + std::to_string(c.rank_one) + ")");
  }
}

ProjectorFamily ProjectorFamily::from_basis(const COperator& basis, double tol) {
  require_square(basis, "ProjectorFamily::from_basis");
  if (!is_unitary(basis, tol)) {
    throw NotUnitary("basis not unitary");
  }
  std::vector<COperator> ps;
  ps.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index n = 0; n < basis.cols(); ++n) {
    ps.push_back(ket_bra(basis.col(n)));
  }
  return ProjectorFamily(std::move(ps), tol);
}

ProjectorFamily ProjectorFamily::unchecked(std::vector<COperator> projectors) {
  ProjectorFamily f;
  f.projectors_ = std::move(projectors);
  return f;
}

Eigen::Index ProjectorFamily::dim() const noexcept {
  return projectors_.empty() ? 0 : projectors_.front().rows();
}

ProjectorFamilyCheck ProjectorFamily::check() const {
  ProjectorFamilyCheck c;
  const Eigen::Index d = dim();
  COperator sum = COperator::Zero(d, d);
  for (std::size_t m = 0; m < projectors_.size(); ++m) {
    const auto& p = projectors_[m];
    c.idempotency = std::max(c.idempotency, max_norm(p * p - p));
    c.hermiticity = std::max(c.hermiticity, max_norm(p - p.adjoint()));
    c.rank_one = std::max(c.rank_one, std::abs(p.trace() - Complex(1.0)));
    for (std::size_t n = 0; n < projectors_.size(); ++n) {
      if (n != m) c.orthogonality = std::max(c.orthogonality, max_norm(p * projectors_[n]));
    }
    sum += p;
  }
  c.completeness = max_norm(sum - COperator::Identity(d, d));
  return c;
}

CVector ProjectorFamily::representative(std::size_t n) const {
  const COperator& p = projectors_.at(n);
  Eigen::Index col = 0;
  p.colwise().norm().maxCoeff(&col);
  CVector v = p.col(col);
  const double norm = v.norm();
  if (norm == 0.0) {
    throw NotProjector("projector " + std::to_string(n) + " is zero");
  }
  v /= norm;
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  const Complex phase = v(lead) / std::abs(v(lead));
  return v / phase;
}

ProjectorFamily ProjectorFamily::conjugated(const COperator& unitary) const {
  std::vector<COperator> ps;
  ps.reserve(projectors_.size());
  for (const auto& p : projectors_) ps.push_back(unitary.adjoint() * p * unitary);
  return ProjectorFamily(std::move(ps));
}

COperator ProjectorFamily::basis() const {
  COperator b(dim(), static_cast<Eigen::Index>(size()));
  for (std::size_t n = 0; n < size(); ++n) b.col(static_cast<Eigen::Index>(n)) = representative(n);
  return b;
}

SpectralDecomposition spectral_projectors(const COperator& unitary, double tol) {
  require_square(unitary, "spectral_projectors");
  if (!is_unitary(unitary, tol)) {
    throw NotUnitary("spectral_projectors: operator is not unitary within " + std::to_string(tol));
  }
  // A unitary is normal, so its Schur form is diagonal and the Schur vectors
  // are an orthonormal eigenbasis.
  Eigen::ComplexSchur<COperator> schur(unitary);
  const COperator& q = schur.matrixU();
  const COperator& t = schur.matrixT();
  const Eigen::Index d = unitary.rows();

  std::vector<double> phases(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) phases[static_cast<std::size_t>(i)] = std::arg(t(i, i));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::abs(t(i, i) - t(j, j)) <= tol) {
        throw DegenerateSpectrum("eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                                 " coincide within " + std::to_string(tol));
      }
    }
  }

  std::vector<COperator> ps;
  std::vector<double> values;
  for (std::size_t i : argsort(phases)) {
    ps.push_back(ket_bra(q.col(static_cast<Eigen::Index>(i))));
    values.push_back(phases[i]);
  }
  return {ProjectorFamily(std::move(ps), std::max(tol, kStructuralTolerance)), std::move(values)};
}

SpectralDecomposition self_adjoint_spectrum(const COperator& op, double tol) {
  require_square(op, "self_adjoint_spectrum");
  if (!is_self_adjoint(op, tol)) {
    throw NotSelfAdjoint("operator is not self-adjoint within " + std::to_string(tol));
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const COperator h = 0.5 * (op + op.adjoint());
  Eigen::SelfAdjointEigenSolver<COperator> solver(h);
  const auto& evals = solver.eigenvalues();
  for (Eigen::Index i = 0; i + 1 < evals.size(); ++i) {
    if (evals(i + 1) - evals(i) <= tol) {
      throw DegenerateSpectrum("eigenvalues " + std::to_string(evals(i)) + " and " +
                               std::to_string(evals(i + 1)) + " coincide within " +
                               std::to_string(tol));
    }
  }
  std::vector<COperator> ps;
  std::vector<double> values;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    ps.push_back(ket_bra(solver.eigenvectors().col(i)));
    values.push_back(evals(i));
  }
  return {ProjectorFamily(std::move(ps), std::max(tol, kStructuralTolerance)), std::move(values)};
}

COperator reconstruct_unitary(const SpectralDecomposition& spectrum) {
  const Eigen::Index d = spectrum.projectors.dim();
  COperator u = COperator::Zero(d, d);
  for (std::size_t n = 0; n < spectrum.projectors.size(); ++n) {
    u += std::polar(1.0, spectrum.values[n]) * spectrum.projectors[n];
  }
  return u;
}

COperator haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("haar_unitary: dim must be >= 1");
  RngStream rng(seed);
  COperator z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<COperator> qr(z);
  COperator q = qr.householderQ() * COperator::Identity(dim, dim);
  const COperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

COperator exp_i_hermitian(const COperator& h, double t) {
  require_square(h, "exp_i_hermitian");
  Eigen::SelfAdjointEigenSolver<COperator> solver(0.5 * (h + h.adjoint()));
  const auto& v = solver.eigenvectors();
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, t * solver.eigenvalues()(i));
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace fockborn
