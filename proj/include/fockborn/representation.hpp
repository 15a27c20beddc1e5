#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockborn/linalg.hpp"

namespace fockborn {

/// A non-degenerate observable: one label, one real value and one rank-1
/// projector per outcome.
class ObservableSpec {
 public:
  ObservableSpec(std::vector<std::string> labels, std::vector<double> values,
                 ProjectorFamily projectors);

  /// Labels "0", "1", ... for callers that do not care.
  static std::vector<std::string> default_labels(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  Eigen::Index dim() const noexcept { return projectors_.dim(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const ProjectorFamily& projectors() const noexcept { return projectors_; }
  const COperator& projector(std::size_t n) const { return projectors_[n]; }
  CVector ket(std::size_t n) const { return projectors_.representative(n); }

  /// Index of a label; std::nullopt when absent.
  std::optional<std::size_t> index_of(const std::string& label) const;

  /// Sum_n a_n P_n.
  COperator self_adjoint() const;

  /// Same labels and values, projectors U^dag P_n U.
  ObservableSpec conjugated(const COperator& unitary) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  ProjectorFamily projectors_;
};

/// Point of the torus U(1)^N, angles in radians.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> angles);
  static TorusPoint zero(std::size_t n) { return TorusPoint(std::vector<double>(n, 0.0)); }

  const std::vector<double>& angles() const noexcept { return angles_; }
  std::size_t size() const noexcept { return angles_.size(); }
  double operator[](std::size_t n) const { return angles_.at(n); }

  friend TorusPoint operator+(const TorusPoint& a, const TorusPoint& b);

 private:
  std::vector<double> angles_;
};

/// Tangent vector at the identity of U(1)^N (angle rates).
class PathDirection {
 public:
  explicit PathDirection(std::vector<double> rates);

  const std::vector<double>& rates() const noexcept { return rates_; }
  std::size_t size() const noexcept { return rates_.size(); }
  double operator[](std::size_t n) const { return rates_.at(n); }

  /// alpha*a + beta*b
  static PathDirection combine(double alpha, const PathDirection& a, double beta,
                               const PathDirection& b);

 private:
  std::vector<double> rates_;
};

/// U(theta) = Sum_n e^{i k_n theta_n} P_n with nonzero integer weights k_n.
class TorusRepresentation {
 public:
  /// Throws ZeroWeight when some k_n = 0, DimMismatch on a size mismatch.
  TorusRepresentation(std::vector<int> weights, ProjectorFamily projectors);

  std::size_t size() const noexcept { return weights_.size(); }
  Eigen::Index dim() const noexcept { return projectors_.dim(); }
  const std::vector<int>& weights() const noexcept { return weights_; }
  const ProjectorFamily& projectors() const noexcept { return projectors_; }

 private:
  std::vector<int> weights_;
  ProjectorFamily projectors_;
};

/// Explicit index array: sigma[n] is the image of n.
class Permutation {
 public:
  /// Throws InvalidArgument unless `image` is a bijection on {0..n-1}.
  explicit Permutation(std::vector<std::size_t> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t n) const { return image_.at(n); }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  /// All permutations of n elements in lexicographic order.
  static std::vector<Permutation> all(std::size_t n);

 private:
  std::vector<std::size_t> image_;
};

COperator evaluate(const TorusRepresentation& rep, const TorusPoint& point);

/// -i d/dt U(theta(t)) at t = 0, i.e. Sum_n k_n rate_n P_n.
COperator generator(const TorusRepresentation& rep, const PathDirection& dir);

/// Rates a_n / k_n, so that `generator` has eigenvalue a_n on P_n.
PathDirection direction_for_values(const TorusRepresentation& rep,
                                   const std::vector<double>& values);

/// Eigen-decomposition of a non-degenerate self-adjoint operator as an
/// observable; values ascending. `labels` defaults to "0", "1", ...
ObservableSpec observable_from_selfadjoint(const COperator& h, double tol = kStructuralTolerance,
                                           std::vector<std::string> labels = {});

/// Weight-1 representation on the observable's projectors.
TorusRepresentation canonical_representation(const ObservableSpec& obs);

/// T = Sum_n e^{i phase_n} |b_sigma(n)><a_n|.
COperator intertwiner(const ObservableSpec& obs_a, const ObservableSpec& obs_b,
                      const Permutation& sigma, const std::vector<double>& phases);

/// Angles theta' with theta'_{sigma(n)} = theta_n. With this convention
/// T U_A(theta) = U_B(theta') T holds for weight-1 representations.
TorusPoint permute_point(const TorusPoint& point, const Permutation& sigma);

/// Largest ||[P_m, Q_n]|| over all pairs of projectors.
double max_projector_commutator(const ObservableSpec& obs_a, const ObservableSpec& obs_b);

/// True iff every projector of A commutes with every projector of B.
bool quantum_equivalent(const ObservableSpec& obs_a, const ObservableSpec& obs_b,
                        double tol = kStructuralTolerance);

/// A pair (m, n) where the intertwiner's transition probability
/// delta_{m,sigma(n)} differs from |<b_m|a_n>|^2 by more than `tol`,
/// or std::nullopt when sigma preserves every transition probability.
std::optional<std::pair<std::size_t, std::size_t>> probability_mismatch_witness(
    const ObservableSpec& obs_a, const ObservableSpec& obs_b, const Permutation& sigma,
    double tol = kStructuralTolerance);

}  // namespace fockborn
