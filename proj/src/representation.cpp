#include "fockborn/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fockborn/errors.hpp"

namespace fockborn {

namespace {

void require_finite(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " must be finite");
  }
}

}  // namespace

ObservableSpec::ObservableSpec(std::vector<std::string> labels, std::vector<double> values,
                               ProjectorFamily projectors)
    : labels_(std::move(labels)), values_(std::move(values)), projectors_(std::move(projectors)) {
  if (labels_.size() != projectors_.size() || values_.size() != projectors_.size()) {
    throw DimMismatch("observable needs one label and one value per projector (" +
                      std::to_string(labels_.size()) + " labels, " +
                      std::to_string(values_.size()) + " values, " +
                      std::to_string(projectors_.size()) + " projectors)");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError("duplicate outcome label '" + l + "'");
  }
  require_finite(values_, "outcome values");
}

std::vector<std::string> ObservableSpec::default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::optional<std::size_t> ObservableSpec::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

COperator ObservableSpec::self_adjoint() const {
  COperator h = COperator::Zero(dim(), dim());
  for (std::size_t n = 0; n < size(); ++n) h += values_[n] * projectors_[n];
  return h;
}

ObservableSpec ObservableSpec::conjugated(const COperator& unitary) const {
  return ObservableSpec(labels_, values_, projectors_.conjugated(unitary));
}

TorusPoint::TorusPoint(std::vector<double> angles) : angles_(std::move(angles)) {
  require_finite(angles_, "torus angles");
}

TorusPoint operator+(const TorusPoint& a, const TorusPoint& b) {
  if (a.size() != b.size()) throw DimMismatch("TorusPoint addition: sizes differ");
  std::vector<double> s(a.size());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] = a[n] + b[n];
  return TorusPoint(std::move(s));
}

PathDirection::PathDirection(std::vector<double> rates) : rates_(std::move(rates)) {
  require_finite(rates_, "path rates");
}

PathDirection PathDirection::combine(double alpha, const PathDirection& a, double beta,
                                     const PathDirection& b) {
  if (a.size() != b.size()) throw DimMismatch("PathDirection::combine: sizes differ");
  std::vector<double> r(a.size());
  for (std::size_t n = 0; n < r.size(); ++n) r[n] = alpha * a[n] + beta * b[n];
  return PathDirection(std::move(r));
}

TorusRepresentation::TorusRepresentation(std::vector<int> weights, ProjectorFamily projectors)
    : weights_(std::move(weights)), projectors_(std::move(projectors)) {
  if (weights_.size() != projectors_.size()) {
    throw DimMismatch("representation needs one weight per projector");
  }
  for (std::size_t n = 0; n < weights_.size(); ++n) {
    if (weights_[n] == 0) throw ZeroWeight("weight k_" + std::to_string(n) + " is zero");
  }
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || hit[v]) throw InvalidArgument("not a permutation");
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  return Permutation(std::move(image));
}

std::vector<Permutation> Permutation::all(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

COperator evaluate(const TorusRepresentation& rep, const TorusPoint& point) {
  if (point.size() != rep.size()) {
    throw DimMismatch("evaluate: torus point has " + std::to_string(point.size()) +
                      " angles, representation has " + std::to_string(rep.size()) + " factors");
  }
  COperator u = COperator::Zero(rep.dim(), rep.dim());
  for (std::size_t n = 0; n < rep.size(); ++n) {
    u += std::polar(1.0, rep.weights()[n] * point[n]) * rep.projectors()[n];
  }
  return u;
}

COperator generator(const TorusRepresentation& rep, const PathDirection& dir) {
  if (dir.size() != rep.size()) throw DimMismatch("generator: direction size mismatch");
  COperator x = COperator::Zero(rep.dim(), rep.dim());
  for (std::size_t n = 0; n < rep.size(); ++n) {
    x += (rep.weights()[n] * dir[n]) * rep.projectors()[n];
  }
  return x;
}

PathDirection direction_for_values(const TorusRepresentation& rep,
                                   const std::vector<double>& values) {
  if (values.size() != rep.size()) throw DimMismatch("direction_for_values: size mismatch");
  std::vector<double> rates(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    const int k = rep.weights()[n];
    if (k == 0) throw ZeroWeight("k_" + std::to_string(n) + " = 0 admits no rate");
    rates[n] = values[n] / k;
  }
  return PathDirection(std::move(rates));
}

ObservableSpec observable_from_selfadjoint(const COperator& h, double tol,
                                           std::vector<std::string> labels) {
  auto spectrum = self_adjoint_spectrum(h, tol);
  if (labels.empty()) labels = ObservableSpec::default_labels(spectrum.values.size());
  return ObservableSpec(std::move(labels), std::move(spectrum.values),
                        std::move(spectrum.projectors));
}

TorusRepresentation canonical_representation(const ObservableSpec& obs) {
  return TorusRepresentation(std::vector<int>(obs.size(), 1), obs.projectors());
}

COperator intertwiner(const ObservableSpec& obs_a, const ObservableSpec& obs_b,
                      const Permutation& sigma, const std::vector<double>& phases) {
  if (obs_a.dim() != obs_b.dim() || obs_a.size() != obs_b.size()) {
    throw DimMismatch("intertwiner: observables act on different spaces");
  }
  if (sigma.size() != obs_a.size() || phases.size() != obs_a.size()) {
    throw DimMismatch("intertwiner: permutation and phases need one entry per outcome");
  }
  COperator t = COperator::Zero(obs_a.dim(), obs_a.dim());
  for (std::size_t n = 0; n < obs_a.size(); ++n) {
    t += std::polar(1.0, phases[n]) * obs_b.ket(sigma(n)) * obs_a.ket(n).adjoint();
  }
  return t;
}

TorusPoint permute_point(const TorusPoint& point, const Permutation& sigma) {
  if (point.size() != sigma.size()) throw DimMismatch("permute_point: size mismatch");
  std::vector<double> out(point.size());
  for (std::size_t n = 0; n < point.size(); ++n) out[sigma(n)] = point[n];
  return TorusPoint(std::move(out));
}

double max_projector_commutator(const ObservableSpec& obs_a, const ObservableSpec& obs_b) {
  if (obs_a.dim() != obs_b.dim()) throw DimMismatch("observables act on different spaces");
  double worst = 0.0;
  for (const auto& p : obs_a.projectors()) {
    for (const auto& q : obs_b.projectors()) worst = std::max(worst, max_norm(commutator(p, q)));
  }
  return worst;
}

bool quantum_equivalent(const ObservableSpec& obs_a, const ObservableSpec& obs_b, double tol) {
  return max_projector_commutator(obs_a, obs_b) <= tol;
}

std::optional<std::pair<std::size_t, std::size_t>> probability_mismatch_witness(
    const ObservableSpec& obs_a, const ObservableSpec& obs_b, const Permutation& sigma,
    double tol) {
  if (obs_a.dim() != obs_b.dim() || sigma.size() != obs_a.size() ||
      obs_a.size() != obs_b.size()) {
    throw DimMismatch("probability_mismatch_witness: size mismatch");
  }
  for (std::size_t m = 0; m < obs_b.size(); ++m) {
    for (std::size_t n = 0; n < obs_a.size(); ++n) {
      const double transported = sigma(n) == m ? 1.0 : 0.0;
      const double born = std::norm(obs_b.ket(m).dot(obs_a.ket(n)));
      if (std::abs(transported - born) > tol) return std::make_pair(m, n);
    }
  }
  return std::nullopt;
}

}  // namespace fockborn
