#include "fockborn/fock.hpp"

#include <cmath>
#include <map>
#include <string>

#include "fockborn/errors.hpp"

namespace fockborn {

namespace {

constexpr std::size_t kMaxTensorDim = std::size_t{1} << 22;

std::size_t checked_power(int base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    r *= static_cast<std::size_t>(base);
    if (r > kMaxTensorDim) {
      throw InvalidArgument("tensor power " + std::to_string(base) + "^" +
                            std::to_string(exponent) + " exceeds the dense working limit");
    }
  }
  return r;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// sqrt(prod n_i! / M!)
double occupation_amplitude(const OccupationVector& occ) {
  double s = -log_factorial(occ.total());
  for (int n : occ.counts()) s += log_factorial(n);
  return std::exp(0.5 * s);
}

void enumerate_into(int modes, int particles, std::vector<int>& prefix,
                    std::vector<OccupationVector>& out) {
  if (modes == 1) {
    prefix.push_back(particles);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = particles; first >= 0; --first) {
    prefix.push_back(first);
    enumerate_into(modes - 1, particles - first, prefix, out);
    prefix.pop_back();
  }
}

// Applies `op` to tensor factor `leg` of an M-fold tensor over C^d.
void apply_on_leg(const COperator& op, int leg, int modes, int particles,
                  const CVector& in, CVector& out) {
  const auto d = static_cast<std::size_t>(modes);
  std::size_t stride = 1;
  for (int j = leg + 1; j < particles; ++j) stride *= d;
  const std::size_t outer = static_cast<std::size_t>(in.size()) / (stride * d);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * d * stride + s;
      for (std::size_t i = 0; i < d; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          acc += op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                 in(static_cast<Eigen::Index>(base + k * stride));
        }
        out(static_cast<Eigen::Index>(base + i * stride)) = acc;
      }
    }
  }
}

void require_single_particle(const COperator& op, const FockSpace& space, const char* what) {
  if (op.rows() != space.single_particle_dim() || op.cols() != space.single_particle_dim()) {
    throw DimMismatch(std::string(what) + ": operator is " + std::to_string(op.rows()) + "x" +
                      std::to_string(op.cols()) + ", single-particle dim is " +
                      std::to_string(space.single_particle_dim()));
  }
}

void require_same_sectors(const SectoredOperator& a, const SectoredOperator& b, const char* what) {
  if (a.sector_count() != b.sector_count()) {
    throw DimMismatch(std::string(what) + ": sector counts differ");
  }
  for (std::size_t m = 0; m < a.sector_count(); ++m) {
    if (a.block(m).rows() != b.block(m).rows()) {
      throw DimMismatch(std::string(what) + ": sector " + std::to_string(m) + " dims differ");
    }
  }
}

}  // namespace

OccupationVector::OccupationVector(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw InvalidArgument("occupation vector needs at least one mode");
  for (int n : counts_) {
    if (n < 0) throw InvalidArgument("occupation counts must be nonnegative");
    total_ += n;
  }
}

std::vector<OccupationVector> enumerate_basis(int modes, int particles) {
  if (modes < 1) throw InvalidArgument("enumerate_basis: need d >= 1");
  if (particles < 0) throw InvalidArgument("enumerate_basis: need M >= 0");
  std::vector<OccupationVector> out;
  out.reserve(symmetric_sector_dim(modes, particles));
  std::vector<int> prefix;
  enumerate_into(modes, particles, prefix, out);
  return out;
}

std::size_t symmetric_sector_dim(int modes, int particles) {
  // C(M+d-1, d-1), built incrementally so every partial value is an integer.
  std::size_t c = 1;
  for (int k = 1; k < modes; ++k) {
    c = c * static_cast<std::size_t>(particles + k) / static_cast<std::size_t>(k);
  }
  return c;
}

FockSpace::FockSpace(int single_particle_dim, int cutoff)
    : modes_(single_particle_dim), cutoff_(cutoff) {
  if (modes_ < 1) throw InvalidArgument("FockSpace: single-particle dim must be >= 1");
  if (cutoff_ < 0) throw InvalidArgument("FockSpace: cutoff must be >= 0");
  auto sectors = std::make_shared<std::vector<Sector>>();
  for (int m = 0; m <= cutoff_; ++m) {
    Sector s;
    s.basis = enumerate_basis(modes_, m);
    std::map<std::vector<int>, Eigen::Index> lookup;
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
      lookup.emplace(s.basis[i].counts(), static_cast<Eigen::Index>(i));
      s.amplitude.push_back(occupation_amplitude(s.basis[i]));
    }
    const std::size_t words = checked_power(modes_, m);
    s.word_index.resize(words);
    std::vector<int> counts(static_cast<std::size_t>(modes_));
    for (std::size_t w = 0; w < words; ++w) {
      std::fill(counts.begin(), counts.end(), 0);
      std::size_t rest = w;
      for (int j = 0; j < m; ++j) {
        ++counts[rest % static_cast<std::size_t>(modes_)];
        rest /= static_cast<std::size_t>(modes_);
      }
      s.word_index[w] = lookup.at(counts);
    }
    sectors->push_back(std::move(s));
  }
  sectors_ = std::move(sectors);
}

Eigen::Index FockSpace::sector_dim(int particles) const {
  return static_cast<Eigen::Index>(basis(particles).size());
}

std::vector<Eigen::Index> FockSpace::sector_dims() const {
  std::vector<Eigen::Index> dims;
  for (int m = 0; m <= cutoff_; ++m) dims.push_back(sector_dim(m));
  return dims;
}

const std::vector<OccupationVector>& FockSpace::basis(int particles) const {
  if (particles < 0 || particles > cutoff_) {
    throw InvalidArgument("sector " + std::to_string(particles) + " outside 0.." +
                          std::to_string(cutoff_));
  }
  return (*sectors_)[static_cast<std::size_t>(particles)].basis;
}

Eigen::Index FockSpace::index_of(const OccupationVector& occ) const {
  if (static_cast<int>(occ.modes()) != modes_) {
    throw InvalidArgument("occupation vector has the wrong number of modes");
  }
  const auto& b = basis(occ.total());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == occ) return static_cast<Eigen::Index>(i);
  }
  throw InvalidArgument("occupation vector not in basis");
}

double FockSpace::word_amplitude(int particles, Eigen::Index index) const {
  basis(particles);
  return (*sectors_)[static_cast<std::size_t>(particles)].amplitude.at(
      static_cast<std::size_t>(index));
}

Eigen::Index FockSpace::word_to_index(int particles, std::size_t word) const {
  basis(particles);
  return (*sectors_)[static_cast<std::size_t>(particles)].word_index.at(word);
}

std::size_t FockSpace::tensor_dim(int particles) const {
  basis(particles);
  return (*sectors_)[static_cast<std::size_t>(particles)].word_index.size();
}

CVector FockSpace::restrict_tensor(int particles, std::span<const Complex> tensor) const {
  basis(particles);
  const Sector& s = (*sectors_)[static_cast<std::size_t>(particles)];
  if (tensor.size() != s.word_index.size()) {
    throw DimMismatch("restrict_tensor: tensor length " + std::to_string(tensor.size()) +
                      ", expected " + std::to_string(s.word_index.size()));
  }
  CVector out = CVector::Zero(static_cast<Eigen::Index>(s.basis.size()));
  for (std::size_t w = 0; w < tensor.size(); ++w) {
    const Eigen::Index i = s.word_index[w];
    out(i) += s.amplitude[static_cast<std::size_t>(i)] * tensor[w];
  }
  return out;
}

CVector FockSpace::embed_basis_state(int particles, Eigen::Index index) const {
  basis(particles);
  const Sector& s = (*sectors_)[static_cast<std::size_t>(particles)];
  const double amp = s.amplitude.at(static_cast<std::size_t>(index));
  CVector x = CVector::Zero(static_cast<Eigen::Index>(s.word_index.size()));
  for (std::size_t w = 0; w < s.word_index.size(); ++w) {
    if (s.word_index[w] == index) x(static_cast<Eigen::Index>(w)) = amp;
  }
  return x;
}

FockVector FockVector::zero(const FockSpace& space) {
  std::vector<CVector> blocks;
  for (int m = 0; m <= space.cutoff(); ++m) blocks.push_back(CVector::Zero(space.sector_dim(m)));
  return FockVector(std::move(blocks));
}

FockVector FockVector::in_sector(const FockSpace& space, int particles, CVector block) {
  if (block.size() != space.sector_dim(particles)) {
    throw DimMismatch("FockVector::in_sector: block has dim " + std::to_string(block.size()) +
                      ", sector " + std::to_string(particles) + " has dim " +
                      std::to_string(space.sector_dim(particles)));
  }
  FockVector v = zero(space);
  v.blocks_[static_cast<std::size_t>(particles)] = std::move(block);
  return v;
}

FockVector FockVector::basis_state(const FockSpace& space, const OccupationVector& occ) {
  CVector block = CVector::Zero(space.sector_dim(occ.total()));
  block(space.index_of(occ)) = 1.0;
  return in_sector(space, occ.total(), std::move(block));
}

double FockVector::norm() const { return std::sqrt(std::real(fock_inner(*this, *this))); }

SectoredOperator::SectoredOperator(std::vector<COperator> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.rows() != b.cols()) throw DimMismatch("sector blocks must be square");
  }
}

SectoredOperator SectoredOperator::identity(const FockSpace& space) {
  std::vector<COperator> blocks;
  for (int m = 0; m <= space.cutoff(); ++m) {
    blocks.push_back(COperator::Identity(space.sector_dim(m), space.sector_dim(m)));
  }
  return SectoredOperator(std::move(blocks));
}

SectoredOperator SectoredOperator::zero(const FockSpace& space) {
  std::vector<COperator> blocks;
  for (int m = 0; m <= space.cutoff(); ++m) {
    blocks.push_back(COperator::Zero(space.sector_dim(m), space.sector_dim(m)));
  }
  return SectoredOperator(std::move(blocks));
}

SectoredOperator SectoredOperator::adjoint() const {
  std::vector<COperator> blocks;
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return SectoredOperator(std::move(blocks));
}

SectoredOperator operator*(const SectoredOperator& a, const SectoredOperator& b) {
  require_same_sectors(a, b, "SectoredOperator product");
  std::vector<COperator> blocks;
  for (std::size_t m = 0; m < a.sector_count(); ++m) blocks.push_back(a.block(m) * b.block(m));
  return SectoredOperator(std::move(blocks));
}

SectoredOperator operator+(const SectoredOperator& a, const SectoredOperator& b) {
  require_same_sectors(a, b, "SectoredOperator sum");
  std::vector<COperator> blocks;
  for (std::size_t m = 0; m < a.sector_count(); ++m) blocks.push_back(a.block(m) + b.block(m));
  return SectoredOperator(std::move(blocks));
}

SectoredOperator operator-(const SectoredOperator& a, const SectoredOperator& b) {
  require_same_sectors(a, b, "SectoredOperator difference");
  std::vector<COperator> blocks;
  for (std::size_t m = 0; m < a.sector_count(); ++m) blocks.push_back(a.block(m) - b.block(m));
  return SectoredOperator(std::move(blocks));
}

SectoredOperator operator*(Complex s, const SectoredOperator& a) {
  std::vector<COperator> blocks;
  for (const auto& b : a.blocks()) blocks.push_back(s * b);
  return SectoredOperator(std::move(blocks));
}

double max_norm_diff(const SectoredOperator& a, const SectoredOperator& b) {
  require_same_sectors(a, b, "max_norm_diff");
  double worst = 0.0;
  for (std::size_t m = 0; m < a.sector_count(); ++m) {
    worst = std::max(worst, max_norm_diff(a.block(m), b.block(m)));
  }
  return worst;
}

double max_norm(const SectoredOperator& op) {
  double worst = 0.0;
  for (const auto& b : op.blocks()) worst = std::max(worst, max_norm(b));
  return worst;
}

bool is_unitary(const SectoredOperator& op, double tol) {
  for (const auto& b : op.blocks()) {
    if (!is_unitary(b, tol)) return false;
  }
  return true;
}

bool same_shape(const SectoredOperator& op, const FockSpace& space) {
  if (op.sector_count() != space.sector_count()) return false;
  for (int m = 0; m <= space.cutoff(); ++m) {
    if (op.block(static_cast<std::size_t>(m)).rows() != space.sector_dim(m)) return false;
  }
  return true;
}

CVector symmetric_power_state(const CVector& phi, int particles) {
  if (phi.size() < 1) throw InvalidArgument("symmetric_power_state: empty vector");
  if (particles < 0) throw InvalidArgument("symmetric_power_state: need M >= 0");
  if (std::abs(phi.norm() - 1.0) > kStructuralTolerance) {
    throw NotNormalized("symmetric_power_state: |phi| = " + std::to_string(phi.norm()));
  }
  const auto basis = enumerate_basis(static_cast<int>(phi.size()), particles);
  CVector out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Complex c = 1.0 / occupation_amplitude(basis[b]);
    for (std::size_t i = 0; i < basis[b].modes(); ++i) {
      for (int k = 0; k < basis[b][i]; ++k) c *= phi(static_cast<Eigen::Index>(i));
    }
    out(static_cast<Eigen::Index>(b)) = c;
  }
  return out;
}

CVector symmetric_product(const FockSpace& space, std::span<const CVector> factors) {
  const int particles = static_cast<int>(factors.size());
  CVector tensor = CVector::Ones(1);
  for (const auto& f : factors) {
    if (f.size() != space.single_particle_dim()) {
      throw DimMismatch("symmetric_product: factor dim differs from single-particle dim");
    }
    CVector next(tensor.size() * f.size());
    for (Eigen::Index i = 0; i < tensor.size(); ++i) {
      next.segment(i * f.size(), f.size()) = tensor(i) * f;
    }
    tensor = std::move(next);
  }
  return space.restrict_tensor(particles, std::span<const Complex>(tensor.data(), tensor.size()));
}

SectoredOperator gamma(const COperator& op, const FockSpace& space) {
  require_single_particle(op, space, "gamma");
  std::vector<COperator> blocks;
  for (int m = 0; m <= space.cutoff(); ++m) {
    const Eigen::Index n = space.sector_dim(m);
    COperator block(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      CVector x = space.embed_basis_state(m, col);
      CVector y(x.size());
      for (int leg = 0; leg < m; ++leg) {
        apply_on_leg(op, leg, space.single_particle_dim(), m, x, y);
        std::swap(x, y);
      }
      block.col(col) = space.restrict_tensor(m, std::span<const Complex>(x.data(), x.size()));
    }
    blocks.push_back(std::move(block));
  }
  return SectoredOperator(std::move(blocks));
}

SectoredOperator dgamma(const COperator& op, const FockSpace& space) {
  require_single_particle(op, space, "dgamma");
  std::vector<COperator> blocks;
  for (int m = 0; m <= space.cutoff(); ++m) {
    const Eigen::Index n = space.sector_dim(m);
    COperator block = COperator::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      const CVector x = space.embed_basis_state(m, col);
      CVector sum = CVector::Zero(x.size());
      CVector y(x.size());
      for (int leg = 0; leg < m; ++leg) {
        apply_on_leg(op, leg, space.single_particle_dim(), m, x, y);
        sum += y;
      }
      block.col(col) = space.restrict_tensor(m, std::span<const Complex>(sum.data(), sum.size()));
    }
    blocks.push_back(std::move(block));
  }
  return SectoredOperator(std::move(blocks));
}

SectoredOperator number_operator(const COperator& projector, const FockSpace& space, double tol) {
  require_single_particle(projector, space, "number_operator");
  const double idem = max_norm(projector * projector - projector);
  const double herm = max_norm(projector - projector.adjoint());
  const double rank = std::abs(projector.trace() - Complex(1.0));
  if (idem > tol || herm > tol || rank > tol) {
    throw NotProjector("number_operator: not a rank-1 orthogonal projector (idempotency " +
                       std::to_string(idem) + ", hermiticity " + std::to_string(herm) +
                       ", |Tr-1| " + std::to_string(rank) + ")");
  }
  return dgamma(projector, space);
}

double derivation_residual(const COperator& hamiltonian, const FockSpace& space, double step) {
  if (!(step > 0.0)) throw InvalidArgument("derivation_residual: step must be positive");
  const auto forward = gamma(exp_i_hermitian(hamiltonian, step), space);
  const auto backward = gamma(exp_i_hermitian(hamiltonian, -step), space);
  const auto central = Complex(1.0 / (2.0 * step)) * (forward - backward);
  return max_norm_diff(central, Complex(0.0, 1.0) * dgamma(hamiltonian, space));
}

FockVector apply(const SectoredOperator& op, const FockVector& v) {
  if (op.sector_count() != v.sector_count()) throw DimMismatch("apply: sector counts differ");
  std::vector<CVector> blocks;
  for (std::size_t m = 0; m < v.sector_count(); ++m) {
    if (op.block(m).cols() != v.block(m).size()) {
      throw DimMismatch("apply: sector " + std::to_string(m) + " dims differ");
    }
    blocks.push_back(op.block(m) * v.block(m));
  }
  return FockVector(std::move(blocks));
}

Complex fock_inner(const FockVector& u, const FockVector& v) {
  if (u.sector_count() != v.sector_count()) throw DimMismatch("fock_inner: sector counts differ");
  Complex acc = 0.0;
  for (std::size_t m = 0; m < u.sector_count(); ++m) {
    if (u.block(m).size() != v.block(m).size()) {
      throw DimMismatch("fock_inner: sector " + std::to_string(m) + " dims differ");
    }
    acc += u.block(m).dot(v.block(m));
  }
  return acc;
}

}  // namespace fockborn
