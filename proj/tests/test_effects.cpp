#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmc/effects.hpp"
#include "qmc/ensembles.hpp"

using namespace qmc;

namespace {
Vector ket0() {
  Vector v = Vector::Zero(2);
  v[0] = 1.0;
  return v;
}
Vector ket_plus() {
  Vector v(2);
  v[0] = v[1] = 1.0 / std::sqrt(2.0);
  return v;
}
}  // namespace

TEST_CASE("effect validation accepts and rejects by spectrum") {
  CHECK_NOTHROW(Effect::make(Matrix::Zero(3, 3)));
  CHECK_THROWS_AS(Effect::make(2.0 * Matrix::Identity(2, 2)), ValidationError);
  CHECK_THROWS_AS(Effect::make(-0.5 * Matrix::Identity(2, 2)), ValidationError);

  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector u = random_unit_vector(rng, 3);
    const Vector v = random_unit_vector(rng, 3);
    const Matrix mean = 0.5 * (u * u.adjoint()) + 0.5 * (v * v.adjoint());
    CHECK_NOTHROW(Effect::make(mean));
    const auto eigs = qmc_test::jacobi_eigenvalues(mean);
    CHECK(eigs.front() >= -1e-10);
    CHECK(eigs.back() <= 1.0 + 1e-10);
  }
}

TEST_CASE("complement is an involution with the right fixed points") {
  const int n = 3;
  CHECK(approx_eq(complement(Effect::zero(n)).matrix(), Matrix::Identity(n, n)));
  const Effect half = Effect::make(0.5 * Matrix::Identity(n, n));
  CHECK(approx_eq(complement(half).matrix(), half.matrix()));
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Effect a = random_effect(rng, 2 + i % 3);
    CHECK((complement(complement(a)).matrix() - a.matrix()).norm() < 1e-12);
  }
}

TEST_CASE("sequential product on the worked qubit example") {
  const Effect p0 = Effect::atom(ket0());
  const Effect pplus = Effect::atom(ket_plus());
  // P0 o P+ = P0 P+ P0 = |<0|+>|^2 P0 = P0/2.
  CHECK((seq_prod(p0, pplus).matrix() - 0.5 * p0.matrix()).norm() < 1e-12);
  CHECK((seq_prod(Effect::unit(2), pplus).matrix() - pplus.matrix()).norm() < 1e-12);

  Matrix dp = Matrix::Zero(2, 2);
  dp(0, 0) = 0.3;
  dp(1, 1) = 0.8;
  Matrix dq = Matrix::Zero(2, 2);
  dq(0, 0) = 0.5;
  dq(1, 1) = 0.25;
  const Matrix prod = seq_prod(Effect::make(dp), Effect::make(dq)).matrix();
  CHECK(prod(0, 0).real() == doctest::Approx(0.15));
  CHECK(prod(1, 1).real() == doctest::Approx(0.2));

  CHECK_THROWS_AS(seq_prod(p0, Effect::unit(3)), DimensionError);
}

TEST_CASE("occurrence probabilities clip float noise and reject bad input") {
  const DensityState rho = DensityState::pure(ket0());
  CHECK(occurrence_prob(rho, Effect::unit(2)) == 1.0);
  CHECK(occurrence_prob(rho, Effect::zero(2)) == 0.0);
  CHECK(occurrence_prob(rho, Effect::atom(ket_plus())) == doctest::Approx(0.5));

  const DensityState partial =
      DensityState::partial(0.5 * ket0() * ket0().adjoint());
  CHECK_THROWS_AS(occurrence_prob(partial, Effect::unit(2)), ArgumentError);
}

TEST_CASE("reduced effects: identity, factorized and the bell atom") {
  const DimPair dims(2, 2);
  CHECK(approx_eq(reduced_effect(Effect::unit(4), dims, Factor::first).matrix(),
                  Matrix::Identity(2, 2)));

  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const Effect b = random_effect(rng, 2);
    const Effect c = random_effect(rng, 3);
    const Effect joint = Effect::trusted(tensor(b.matrix(), c.matrix()));
    const Matrix expected = (c.matrix().trace().real() / 3.0) * b.matrix();
    CHECK((reduced_effect(joint, DimPair(2, 3), Factor::first).matrix() - expected).norm() <
          1e-12);
  }

  Vector bell = Vector::Zero(4);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  const Effect atom = Effect::atom(bell);
  CHECK((reduced_effect(atom, dims, Factor::first).matrix() - 0.25 * Matrix::Identity(2, 2))
            .norm() < 1e-12);
}

TEST_CASE("factorization test recovers factors and rejects entanglement") {
  Rng rng(8);
  const DimPair dims(2, 3);
  for (int i = 0; i < 25; ++i) {
    const Effect b = random_effect(rng, dims.n1);
    const Effect c = random_effect(rng, dims.n2);
    const Effect joint = Effect::trusted(tensor(b.matrix(), c.matrix()));
    const auto factors = factorization_test(joint, dims);
    REQUIRE(factors.has_value());
    CHECK((tensor(factors->first.matrix(), factors->second.matrix()) - joint.matrix()).norm() <
          1e-9);
    // Factors are recovered up to a scalar: the first factor is parallel to b.
    const Matrix cross = factors->first.matrix() * b.matrix().trace() -
                         b.matrix() * factors->first.matrix().trace();
    CHECK(cross.norm() < 1e-8);
  }

  // a = a^1 (x) a^2 only for the extremes.
  const auto zero_ok = factorization_test(Effect::zero(6), dims);
  CHECK(zero_ok.has_value());
  const auto unit = factorization_test(Effect::unit(6), dims);
  REQUIRE(unit.has_value());
  CHECK((tensor(unit->first.matrix(), unit->second.matrix()) - Matrix::Identity(6, 6)).norm() <
        1e-10);

  Vector bell = Vector::Zero(4);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  CHECK_FALSE(factorization_test(Effect::atom(bell), DimPair(2, 2)).has_value());
}

TEST_CASE("factorization agrees with the schmidt rank on atoms") {
  Rng rng(10);
  const DimPair dims(2, 3);
  int factorized_count = 0;
  for (int i = 0; i < 100; ++i) {
    Vector psi;
    if (i % 2 == 0) {
      psi = tensor(random_unit_vector(rng, dims.n1), random_unit_vector(rng, dims.n2));
    } else {
      psi = random_unit_vector(rng, dims.total());
    }
    const auto dec = schmidt(psi, dims);
    int rank = 0;
    for (int k = 0; k < dec.coefficients.size(); ++k) {
      if (dec.coefficients[k] > 1e-8) ++rank;
    }
    const bool factorized = factorization_test(Effect::atom(psi), dims).has_value();
    CHECK(factorized == (rank == 1));
    if (factorized) ++factorized_count;
  }
  CHECK(factorized_count == 50);
}

TEST_CASE("indecomposable effects have numerical rank at most one") {
  Rng rng(12);
  const Vector phi = random_unit_vector(rng, 3);
  CHECK(is_indecomposable(Effect::trusted(0.5 * phi * phi.adjoint())));
  CHECK(is_indecomposable(Effect::zero(3)));
  CHECK_FALSE(is_indecomposable(Effect::unit(2)));
}

TEST_CASE("atom reduction spectra pair with the n1/n2 ratio") {
  Rng rng(14);
  const Vector product = tensor(random_unit_vector(rng, 2), random_unit_vector(rng, 3));
  const auto [a1, a2] = atom_reduction_spectrum(Effect::atom(product), DimPair(2, 3));
  REQUIRE(a1.size() == 1);
  REQUIRE(a2.size() == 1);
  CHECK(a1[0] == doctest::Approx(1.0 / 3.0));
  CHECK(a2[0] == doctest::Approx(1.0 / 2.0));

  Vector bell = Vector::Zero(4);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  const auto [b1, b2] = atom_reduction_spectrum(Effect::atom(bell), DimPair(2, 2));
  REQUIRE(b1.size() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(b1[k] == doctest::Approx(0.25));
    CHECK(b2[k] == doctest::Approx(0.25));
  }

  for (int i = 0; i < 10; ++i) {
    const Vector psi = random_unit_vector(rng, 6);
    const auto [s1, s2] = atom_reduction_spectrum(Effect::atom(psi), DimPair(3, 2));
    REQUIRE(s1.size() == s2.size());
    const auto dec = schmidt(psi, DimPair(3, 2));
    for (Eigen::Index k = 0; k < s1.size(); ++k) {
      CHECK(std::abs(s1[k] - 1.5 * s2[k]) < 1e-9);
      const double lambda_sq = dec.coefficients[k] * dec.coefficients[k];
      CHECK(std::abs(s1[k] - lambda_sq / 2.0) < 1e-9);
    }
  }

  CHECK_THROWS_AS(atom_reduction_spectrum(Effect::unit(4), DimPair(2, 2)), ArgumentError);
}
