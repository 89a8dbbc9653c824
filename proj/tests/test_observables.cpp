#include <doctest.h>

#include <cmath>

#include "qmc/ensembles.hpp"
#include "qmc/observables.hpp"

using namespace qmc;

namespace {
Observable qubit_basis() {
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return Observable::make({{"0", Effect::make(p0)}, {"1", Effect::make(p1)}});
}
}  // namespace

TEST_CASE("observable validation") {
  CHECK_NOTHROW(Observable::unit(3));
  CHECK_NOTHROW(qubit_basis());
  const Effect two_thirds = Effect::make(Matrix::Identity(2, 2) * (2.0 / 3.0));
  CHECK_THROWS_WITH_AS(
      Observable::make({{"a", two_thirds}, {"b", two_thirds}}),
      doctest::Contains("sum to identity"), ValidationError);
  CHECK_THROWS_AS(Observable::make({}), ValidationError);
  CHECK_THROWS_AS(
      Observable::make({{"a", Effect::unit(2)}, {"a", Effect::zero(2)}}), ValidationError);
}

TEST_CASE("event effects") {
  const Observable basis = qubit_basis();
  CHECK(event_effect(basis, {}).matrix().norm() == 0.0);
  CHECK(approx_eq(event_effect(basis, {"0", "1"}).matrix(), Matrix::Identity(2, 2)));
  CHECK(approx_eq(event_effect(basis, {"0"}).matrix(), basis.at("0").matrix()));
  CHECK_THROWS_AS(event_effect(basis, {"missing"}), ArgumentError);
}

TEST_CASE("sequential product observable structure") {
  Rng rng(31);
  const Observable a = random_observable(rng, 2, 2);
  const Observable single = Observable::unit(2, "u");
  const Observable right_unit = seq_prod_obs(a, single);
  CHECK(right_unit.size() == 2);
  CHECK(right_unit.label(0) == "(0,u)");
  CHECK((right_unit.effect(0).matrix() - a.effect(0).matrix()).norm() < 1e-12);

  const Observable left_unit = seq_prod_obs(single, a);
  CHECK((left_unit.at("(u,1)").matrix() - a.at("1").matrix()).norm() < 1e-12);

  const Observable b = random_observable(rng, 2, 2);
  const Observable ab = seq_prod_obs(a, b);
  CHECK(ab.size() == 4);
  // The four effects are a_x o b_y and they sum to the identity.
  Matrix sum = Matrix::Zero(2, 2);
  for (size_t i = 0; i < ab.size(); ++i) sum += ab.effect(i).matrix();
  CHECK((sum - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((ab.at("(0,1)").matrix() - seq_prod(a.at("0"), b.at("1")).matrix()).norm() < 1e-13);
}

TEST_CASE("conditioning: unit prior, commuting case, coarse-grain route") {
  Rng rng(33);
  const Observable b = random_observable(rng, 2, 3);
  const Observable cond_unit = condition_obs(b, Observable::unit(2));
  for (size_t i = 0; i < b.size(); ++i) {
    CHECK((cond_unit.effect(i).matrix() - b.effect(i).matrix()).norm() < 1e-12);
  }

  const auto [ca, cb] = random_commuting_pair(rng, 3, 2, 2);
  const Observable cond = condition_obs(cb, ca);
  for (size_t i = 0; i < cb.size(); ++i) {
    CHECK((cond.effect(i).matrix() - cb.effect(i).matrix()).norm() < 1e-9);
  }

  // (B|A) equals the y-marginal of A o B.
  const Observable a = random_observable(rng, 2, 2);
  const Observable ab = seq_prod_obs(a, b);
  const Observable via_cond = condition_obs(b, a);
  for (size_t y = 0; y < b.size(); ++y) {
    Matrix sum = Matrix::Zero(2, 2);
    for (size_t x = 0; x < a.size(); ++x) {
      sum += ab.at(pair_label(a.label(x), b.label(y))).matrix();
    }
    CHECK((via_cond.effect(y).matrix() - sum).norm() < 1e-12);
  }
}

TEST_CASE("distributions and then-probabilities") {
  Rng rng(35);
  const Observable basis = qubit_basis();
  Vector ket0 = Vector::Zero(2);
  ket0[0] = 1.0;
  const DensityState rho = DensityState::pure(ket0);
  const auto d = distribution(rho, basis);
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(0.0));

  const auto du = distribution(rho, Observable::unit(2));
  CHECK(du[0] == doctest::Approx(1.0));

  for (int i = 0; i < 10; ++i) {
    const Observable a = random_observable(rng, 3, 4);
    const DensityState s = random_state(rng, 3);
    const auto dist = distribution(s, a);
    double sum = 0.0;
    for (double p : dist) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    // Maximally mixed state reproduces the random measure.
    const auto mu = random_measure(a);
    const auto mixed = distribution(DensityState::mixed(3), a);
    for (size_t k = 0; k < mu.size(); ++k) CHECK(mu[k] == doctest::Approx(mixed[k]));
  }

  CHECK(then_probability(rho, basis, {"0", "1"}, basis, {"0", "1"}) == doctest::Approx(1.0));
  CHECK(then_probability(rho, basis, {"0"}, basis, {"0"}) == doctest::Approx(1.0));
  const Observable b = random_observable(rng, 2, 2);
  CHECK(then_probability(rho, basis, {"0"}, b, b.labels()) ==
        doctest::Approx(occurrence_prob(rho, basis.at("0"))));
}

TEST_CASE("post-processing: permutation, merge, and validation") {
  Rng rng(37);
  const Observable a = random_observable(rng, 2, 3);
  const StochasticMatrix perm = StochasticMatrix::permutation(a.labels());
  const Observable same = post_process(perm, a);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK((same.effect(i).matrix() - a.effect(i).matrix()).norm() < 1e-13);
  }

  RealMatrix ones(3, 1);
  ones.setOnes();
  const StochasticMatrix merge = StochasticMatrix::make(a.labels(), {"all"}, ones);
  const Observable merged = post_process(merge, a);
  CHECK(merged.size() == 1);
  CHECK((merged.effect(0).matrix() - Matrix::Identity(2, 2)).norm() < 1e-12);

  RealMatrix bad(3, 2);
  bad.setConstant(0.7);
  CHECK_THROWS_AS(StochasticMatrix::make(a.labels(), {"x", "y"}, bad), ValidationError);
  const StochasticMatrix wrong_rows = random_stochastic(rng, {"p", "q"}, {"r"});
  CHECK_THROWS_AS(post_process(wrong_rows, a), ArgumentError);
}

TEST_CASE("random measure") {
  const auto mu_unit = random_measure(Observable::unit(5));
  CHECK(mu_unit[0] == doctest::Approx(1.0));
  const auto mu_basis = random_measure(qubit_basis());
  CHECK(mu_basis[0] == doctest::Approx(0.5));
  CHECK(mu_basis[1] == doctest::Approx(0.5));
}

TEST_CASE("tensor observables and reductions") {
  Rng rng(39);
  const Observable u2 = Observable::unit(2);
  const Observable u3 = Observable::unit(3);
  const Observable uu = tensor_obs(u2, u3);
  CHECK(uu.size() == 1);
  CHECK(approx_eq(uu.effect(0).matrix(), Matrix::Identity(6, 6)));

  const Observable basis2 = qubit_basis();
  const Observable big = tensor_obs(basis2, basis2);
  CHECK(big.size() == 4);
  for (size_t i = 0; i < big.size(); ++i) {
    // basis (x) basis consists of rank-1 projectors
    CHECK(std::abs(big.effect(i).matrix().trace().real() - 1.0) < 1e-12);
    CHECK((big.effect(i).matrix() * big.effect(i).matrix() - big.effect(i).matrix()).norm() <
          1e-12);
  }

  const DimPair dims(2, 3);
  const Observable a = random_observable(rng, 6, 3);
  const Observable a1 = reduced_obs(a, dims, Factor::first);
  Matrix sum = Matrix::Zero(2, 2);
  for (size_t i = 0; i < a1.size(); ++i) sum += a1.effect(i).matrix();
  CHECK((sum - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("coarse graining: identity, constant, and the conditioned part") {
  Rng rng(41);
  const Observable b = random_observable(rng, 2, 4);
  const Observable same = coarse_grain(b, Surjection::identity(b.labels()));
  for (size_t i = 0; i < b.size(); ++i) {
    CHECK((same.at(b.label(i)).matrix() - b.effect(i).matrix()).norm() == 0.0);
  }
  const Observable total = coarse_grain(b, Surjection::constant(b.labels(), "all"));
  CHECK(total.size() == 1);
  CHECK((total.effect(0).matrix() - Matrix::Identity(2, 2)).norm() < 1e-12);

  // The pairing surjection that keeps the second index turns A o B into (B|A).
  const Observable a = random_observable(rng, 2, 2);
  const Observable b2 = random_observable(rng, 2, 2);
  const Observable ab = seq_prod_obs(a, b2);
  std::unordered_map<OutcomeLabel, OutcomeLabel> keep_second;
  for (const auto& x : a.labels())
    for (const auto& y : b2.labels()) keep_second[pair_label(x, y)] = y;
  const Surjection g = Surjection::make(ab.labels(), b2.labels(), std::move(keep_second));
  const Observable cond = coarse_grain(ab, g);
  const Observable expected = condition_obs(b2, a);
  for (size_t i = 0; i < cond.size(); ++i) {
    CHECK((cond.effect(i).matrix() - expected.at(cond.label(i)).matrix()).norm() < 1e-12);
  }

  std::unordered_map<OutcomeLabel, OutcomeLabel> partial_map{{"0", "x"}};
  CHECK_THROWS_AS(Surjection::make(b.labels(), {"x"}, partial_map), ArgumentError);
  std::unordered_map<OutcomeLabel, OutcomeLabel> not_onto;
  for (const auto& l : b.labels()) not_onto[l] = "x";
  CHECK_THROWS_AS(Surjection::make(b.labels(), {"x", "y"}, not_onto), ValidationError);
}
