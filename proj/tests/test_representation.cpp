#include <doctest.h>

#include "fockborn/errors.hpp"
#include "fockborn/representation.hpp"
#include "oracles.hpp"

using namespace fockborn;

namespace {

ObservableSpec random_observable(oracle::Inputs& in, Eigen::Index d) {
  std::vector<double> values;
  for (Eigen::Index n = 0; n < d; ++n) values.push_back(static_cast<double>(n) + in.uniform());
  return ObservableSpec(ObservableSpec::default_labels(static_cast<std::size_t>(d)), values,
                        ProjectorFamily::from_basis(in.unitary(d)));
}

ObservableSpec diagonal_observable(std::vector<double> values) {
  const auto d = static_cast<Eigen::Index>(values.size());
  auto labels = ObservableSpec::default_labels(values.size());
  return ObservableSpec(std::move(labels), std::move(values),
                        ProjectorFamily::from_basis(COperator::Identity(d, d)));
}

ObservableSpec hadamard_observable() {
  const double r = 1.0 / std::sqrt(2.0);
  COperator h(2, 2);
  h << r, r, r, -r;
  return ObservableSpec({"+", "-"}, {1.0, -1.0}, ProjectorFamily::from_basis(h));
}

std::vector<int> random_weights(oracle::Inputs& in, std::size_t n) {
  std::vector<int> k(n);
  for (auto& w : k) {
    w = static_cast<int>(in.uniform(1.0, 4.0));
    if (in.uniform() < 0.5) w = -w;
  }
  return k;
}

}  // namespace

TEST_CASE("ObservableSpec validation") {
  const auto family = ProjectorFamily::from_basis(COperator::Identity(2, 2));
  CHECK_THROWS_AS(ObservableSpec({"a"}, {0.0, 1.0}, family), DimMismatch);
  CHECK_THROWS_AS(ObservableSpec({"a", "a"}, {0.0, 1.0}, family), ValidationError);
  CHECK_THROWS_AS(ObservableSpec({"a", "b"}, {0.0, std::nan("")}, family), InvalidArgument);
  const ObservableSpec ok({"a", "b"}, {0.0, 1.0}, family);
  CHECK(ok.index_of("b") == 1u);
  CHECK_FALSE(ok.index_of("c").has_value());
}

TEST_CASE("evaluate: identity, homomorphism and global phase") {
  oracle::Inputs in(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 1 + trial % 6;
    const TorusRepresentation rep(random_weights(in, static_cast<std::size_t>(d)),
                                  ProjectorFamily::from_basis(in.unitary(d)));
    CHECK(max_norm_diff(evaluate(rep, TorusPoint::zero(rep.size())), COperator::Identity(d, d)) <=
          1e-12);
    const TorusPoint t1(in.angles(rep.size()));
    const TorusPoint t2(in.angles(rep.size()));
    CHECK(max_norm_diff(evaluate(rep, t1 + t2), evaluate(rep, t1) * evaluate(rep, t2)) <= 1e-10);
    CHECK(is_unitary(evaluate(rep, t1)));
  }
  const double phi = 0.37;
  const TorusRepresentation ones(std::vector<int>(3, 1), ProjectorFamily::from_basis(in.unitary(3)));
  CHECK(max_norm_diff(evaluate(ones, TorusPoint(std::vector<double>(3, phi))),
                      std::polar(1.0, phi) * COperator::Identity(3, 3)) <= 1e-12);
}

TEST_CASE("TorusRepresentation rejects zero weights") {
  const auto family = ProjectorFamily::from_basis(COperator::Identity(2, 2));
  CHECK_THROWS_AS(TorusRepresentation({1, 0}, family), ZeroWeight);
  CHECK_THROWS_AS(TorusRepresentation({1}, family), DimMismatch);
}

TEST_CASE("generator") {
  oracle::Inputs in(22);
  const auto family = ProjectorFamily::from_basis(COperator::Identity(3, 3));
  const TorusRepresentation diag_rep({1, 1, 1}, family);
  CHECK(max_norm(generator(diag_rep, PathDirection({0.0, 0.0, 0.0}))) == 0.0);
  const COperator expect = CVector(Eigen::Vector3cd(1.5, -2.0, 0.25)).asDiagonal();
  CHECK(max_norm_diff(generator(diag_rep, PathDirection({1.5, -2.0, 0.25})), expect) == 0.0);

  // -i d/dt evaluate(t * dir) at t = 0 by central difference, h = 1e-5.
  const TorusRepresentation rep(random_weights(in, 4), ProjectorFamily::from_basis(in.unitary(4)));
  const PathDirection dir(in.angles(4));
  const double h = 1e-5;
  std::vector<double> fwd(4), bwd(4);
  for (int n = 0; n < 4; ++n) {
    fwd[n] = h * dir[n];
    bwd[n] = -h * dir[n];
  }
  const COperator fd = Complex(0.0, -1.0 / (2.0 * h)) *
                       (evaluate(rep, TorusPoint(fwd)) - evaluate(rep, TorusPoint(bwd)));
  CHECK(max_norm_diff(fd, generator(rep, dir)) <= 1e-6);
}

TEST_CASE("generator is linear in the direction") {
  oracle::Inputs in(23);
  const TorusRepresentation rep(random_weights(in, 5), ProjectorFamily::from_basis(in.unitary(5)));
  const PathDirection d1(in.angles(5));
  const PathDirection d2(in.angles(5));
  const double alpha = 0.7;
  const double beta = -1.3;
  const COperator lhs = generator(rep, PathDirection::combine(alpha, d1, beta, d2));
  const COperator rhs = alpha * generator(rep, d1) + beta * generator(rep, d2);
  CHECK(max_norm_diff(lhs, rhs) <= 1e-13);
}

TEST_CASE("direction_for_values") {
  const auto family = ProjectorFamily::from_basis(COperator::Identity(2, 2));
  CHECK(direction_for_values(TorusRepresentation({1, 1}, family), {0.0, 1.0}).rates() ==
        std::vector<double>{0.0, 1.0});
  const TorusRepresentation rep({2, 3}, family);
  const auto dir = direction_for_values(rep, {4.0, 6.0});
  CHECK(dir.rates() == std::vector<double>{2.0, 2.0});
  const COperator g = generator(rep, dir);
  CHECK(g(0, 0).real() == doctest::Approx(4.0));
  CHECK(g(1, 1).real() == doctest::Approx(6.0));
  CHECK_THROWS_AS(direction_for_values(rep, {1.0}), DimMismatch);
}

TEST_CASE("spectrum freedom: any target values are reachable") {
  oracle::Inputs in(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const TorusRepresentation rep(random_weights(in, static_cast<std::size_t>(d)),
                                  ProjectorFamily::from_basis(in.unitary(d)));
    std::vector<double> target;
    for (Eigen::Index n = 0; n < d; ++n) target.push_back(in.uniform(-5.0, 5.0));
    const COperator g = generator(rep, direction_for_values(rep, target));
    Eigen::SelfAdjointEigenSolver<COperator> es(g);
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::sort(target.begin(), target.end());
    for (Eigen::Index n = 0; n < d; ++n) CHECK(std::abs(got[n] - target[n]) <= 1e-10);
  }
}

TEST_CASE("observable_from_selfadjoint") {
  COperator d2(2, 2);
  d2 << 1.0, 0.0, 0.0, 2.0;
  const auto obs = observable_from_selfadjoint(d2);
  CHECK(obs.values()[0] == doctest::Approx(1.0));
  CHECK(obs.values()[1] == doctest::Approx(2.0));
  CHECK(max_norm_diff(obs.projector(0), COperator(Eigen::Vector2cd(1, 0).asDiagonal())) <= 1e-12);
  CHECK(max_norm_diff(obs.projector(1), COperator(Eigen::Vector2cd(0, 1).asDiagonal())) <= 1e-12);

  COperator px(2, 2);
  px << 0.0, 1.0, 1.0, 0.0;
  const auto x = observable_from_selfadjoint(px);
  const auto ref = oracle::hermitian_2x2(px);
  CHECK(x.values()[0] == doctest::Approx(ref.values[0]));
  CHECK(x.values()[1] == doctest::Approx(ref.values[1]));
  for (int k = 0; k < 2; ++k) {
    CHECK(max_norm_diff(x.projector(k), ref.vectors.col(k) * ref.vectors.col(k).adjoint()) <= 1e-10);
  }

  COperator deg(2, 2);
  deg << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(observable_from_selfadjoint(deg), DegenerateSpectrum);
}

TEST_CASE("canonical_representation round trip") {
  oracle::Inputs in(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto obs = random_observable(in, 2 + trial % 5);
    const auto rep = canonical_representation(obs);
    CHECK(rep.weights() == std::vector<int>(obs.size(), 1));
    const COperator g = generator(rep, direction_for_values(rep, obs.values()));
    CHECK(max_norm_diff(g, obs.self_adjoint()) <= 1e-10);
    const COperator u = evaluate(rep, TorusPoint(in.angles(obs.size())));
    CHECK(max_norm(commutator(u, obs.self_adjoint())) <= 1e-10);
  }
}

TEST_CASE("Permutation") {
  CHECK_THROWS_AS(Permutation({0, 0}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 2}), InvalidArgument);
  const auto all = Permutation::all(3);
  CHECK(all.size() == 6);
  CHECK(all.front().image() == Permutation::identity(3).image());
  CHECK(all.back().image() == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("intertwiner: identity case") {
  const auto obs = diagonal_observable({0.0, 1.0, 2.0});
  const COperator t = intertwiner(obs, obs, Permutation::identity(3), {0.0, 0.0, 0.0});
  CHECK(max_norm_diff(t, COperator::Identity(3, 3)) <= 1e-15);
}

TEST_CASE("intertwiner properties for random pairs") {
  oracle::Inputs in(26);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const auto a = random_observable(in, d);
    const auto b = random_observable(in, d);
    const auto rep_a = canonical_representation(a);
    const auto rep_b = canonical_representation(b);
    for (const auto& sigma : Permutation::all(static_cast<std::size_t>(d))) {
      const COperator t = intertwiner(a, b, sigma, in.angles(a.size()));
      CHECK(is_unitary(t, 1e-10));
      for (std::size_t m = 0; m < b.size(); ++m) {
        for (std::size_t n = 0; n < a.size(); ++n) {
          const double prob = std::norm(b.ket(m).dot(t * a.ket(n)));
          CHECK(std::abs(prob - (sigma(n) == m ? 1.0 : 0.0)) <= 1e-10);
        }
      }
      const TorusPoint theta(in.angles(a.size()));
      CHECK(max_norm_diff(t * evaluate(rep_a, theta),
                          evaluate(rep_b, permute_point(theta, sigma)) * t) <= 1e-9);
      // Non-commuting pair: some transition probability is not preserved.
      CHECK(probability_mismatch_witness(a, b, sigma).has_value());
    }
    CHECK_FALSE(quantum_equivalent(a, b));
  }
}

TEST_CASE("quantum_equivalent") {
  oracle::Inputs in(27);
  const auto a = random_observable(in, 3);
  CHECK(quantum_equivalent(a, a));
  const auto z = diagonal_observable({1.0, -1.0});
  const auto x = hadamard_observable();
  CHECK_FALSE(quantum_equivalent(z, x));
  CHECK(max_projector_commutator(z, x) > 0.1);
  CHECK(quantum_equivalent(diagonal_observable({0.0, 1.0, 2.0}), diagonal_observable({2.0, 0.0, 1.0})));
}

TEST_CASE("quantum_equivalent agrees with the self-adjoint commutator") {
  oracle::Inputs in(28);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 4;
    const auto a = random_observable(in, d);
    // Half the trials share A's eigenbasis with shuffled values.
    const auto b = trial % 2 == 0
                       ? random_observable(in, d)
                       : ObservableSpec(a.labels(), {a.values().rbegin(), a.values().rend()},
                                        a.projectors());
    const bool by_ops = max_norm(commutator(a.self_adjoint(), b.self_adjoint())) <= 1e-10;
    CHECK(quantum_equivalent(a, b) == by_ops);
    CHECK(quantum_equivalent(a, b) == (trial % 2 == 1));
  }
}

TEST_CASE("equivalent pairs preserve probabilities for the matching permutation") {
  const auto a = diagonal_observable({0.0, 1.0, 2.0});
  const auto b = diagonal_observable({5.0, 4.0, 3.0});
  CHECK_FALSE(probability_mismatch_witness(a, b, Permutation::identity(3)).has_value());
  CHECK(probability_mismatch_witness(a, b, Permutation({1, 0, 2})).has_value());
}
