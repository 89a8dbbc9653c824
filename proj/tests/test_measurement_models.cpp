#include <doctest.h>

#include <cmath>

#include "qmc/ensembles.hpp"
#include "qmc/measurement_models.hpp"

using namespace qmc;

namespace {

Matrix cnot() {
  // Control = base qubit, target = probe qubit.
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

Observable probe_basis() {
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return Observable::make({{"0", Effect::make(p0)}, {"1", Effect::make(p1)}});
}

DensityState probe_ground() {
  Vector v = Vector::Zero(2);
  v[0] = 1.0;
  return DensityState::pure(v);
}

}  // namespace

TEST_CASE("model validation catches mismatched pieces") {
  Rng rng(81);
  CHECK_THROWS_AS(MeasurementModel::make(2, 3, probe_ground(), Channel::identity(6),
                                         random_observable(rng, 3, 2)),
                  DimensionError);
  CHECK_THROWS_AS(MeasurementModel::make(2, 2, probe_ground(), Channel::identity(6),
                                         probe_basis()),
                  DimensionError);
  CHECK_NOTHROW(MeasurementModel::make(3, 2, probe_ground(), Channel::identity(6),
                                       probe_basis()));
}

TEST_CASE("trivial probe observable gives the induced channel") {
  Rng rng(83);
  const MeasurementModel m = MeasurementModel::make(
      2, 2, random_state(rng, 2), random_channel(rng, 4, 2), Observable::unit(2, "all"));
  const Instrument hat = model_instrument(m);
  CHECK(hat.size() == 1);
  CHECK((hat.op(0).kraus_sum() - Matrix::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("identity interaction leaves a trivially weighted instrument") {
  Rng rng(85);
  const DensityState eta = random_state(rng, 2);
  const Observable f = random_observable(rng, 2, 2);
  const MeasurementModel m =
      MeasurementModel::make(3, 2, eta, Channel::identity(6), f);
  const Instrument hat = model_instrument(m);
  const DensityState rho = random_state(rng, 3);
  for (size_t x = 0; x < f.size(); ++x) {
    const double weight = (eta.matrix() * f.effect(x).matrix()).trace().real();
    CHECK((hat.op(x).apply(rho.matrix()) - weight * rho.matrix()).norm() < 1e-10);
  }
}

TEST_CASE("cnot probe model realizes the luders basis instrument") {
  const MeasurementModel m = MeasurementModel::make(
      2, 2, probe_ground(), Channel::unitary(cnot()), probe_basis());
  const Instrument hat = model_instrument(m);
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Instrument expected = luders(Observable::make(
      {{"0", Effect::make(p0)}, {"1", Effect::make(p1)}}));
  for (const auto& label : hat.labels()) {
    CHECK(choi_distance(hat.at(label), expected.at(label)) < 1e-10);
  }
  const Observable obs = model_observable(m);
  CHECK((obs.at("0").matrix() - p0).norm() < 1e-10);
  CHECK((obs.at("1").matrix() - p1).norm() < 1e-10);
}

TEST_CASE("reduced models agree with reducing the model instrument") {
  Rng rng(87);
  const std::vector<DimPair> dim_list = {DimPair(2, 2), DimPair(2, 3)};
  for (const DimPair& dims : dim_list) {
    const MeasurementModel m = random_mm(rng, dims.total(), 2, 2);
    const Instrument hat = model_instrument(m);
    for (Factor side : {Factor::first, Factor::second}) {
      const Instrument direct = reduced_model_instrument(m, dims, side);
      const Instrument via = reduced_instr(hat, dims, side);
      for (const auto& label : direct.labels()) {
        CHECK(choi_distance(direct.at(label), via.at(label)) < 1e-9);
      }
    }
  }
}

TEST_CASE("product interaction reduces to the local model") {
  Rng rng(89);
  // nu = nu_a (x) id_2 on (H1 (x) K) (x) H2 reordered: build on H1 (x) H2 (x) K
  // with Kraus S (x) 1_2 where S acts on H1 (x) K... the swap places K last.
  const int n1 = 2, n2 = 2, k = 2;
  const Channel nu_local = random_channel(rng, n1 * k, 2);
  // Reorder S in L(H1 (x) K) into L(H1 (x) H2 (x) K) as S acting with H2 idle.
  const SwapOperator sw = swap_operator(n1, n2, k, 1);
  std::vector<Matrix> kraus;
  for (const auto& s : nu_local.op().kraus()) {
    kraus.push_back(sw.U.adjoint() * tensor(s, Matrix::Identity(n2, n2)) * sw.U);
  }
  const Channel nu = Channel::from_kraus(std::move(kraus));
  const DensityState eta = random_state(rng, k);
  const Observable f = random_observable(rng, k, 2);
  const MeasurementModel big = MeasurementModel::make(n1 * n2, k, eta, nu, f);
  const MeasurementModel local = MeasurementModel::make(n1, k, eta, nu_local, f);
  const Instrument reduced = reduced_model_instrument(big, DimPair(n1, n2), Factor::first);
  const Instrument expected = model_instrument(local);
  for (const auto& label : reduced.labels()) {
    CHECK(choi_distance(reduced.at(label), expected.at(label)) < 1e-9);
  }
}

TEST_CASE("swap operator basics") {
  const SwapOperator trivial_swap = swap_operator(1, 1, 1, 1);
  CHECK(trivial_swap.U.rows() == 1);
  CHECK(std::abs(trivial_swap.U(0, 0) - Complex(1, 0)) < 1e-15);

  const SwapOperator sw = swap_operator(2, 2, 2, 2);
  CHECK((sw.U * sw.U.adjoint() - Matrix::Identity(16, 16)).norm() < 1e-14);
  // Index formula oracle.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const int in = ((i * 2 + j) * 2 + k) * 2 + l;
          const int expected = ((i * 2 + k) * 2 + j) * 2 + l;
          CHECK(std::abs(sw.U(expected, in) - Complex(1, 0)) < 1e-15);
        }

  Rng rng(91);
  const Matrix f1 = random_effect(rng, 2).matrix();
  const Matrix f2 = random_effect(rng, 2).matrix();
  const Matrix lhs = sw.U * tensor(Matrix::Identity(4, 4), tensor(f1, f2)) * sw.U.adjoint();
  const Matrix rhs =
      tensor(Matrix::Identity(2, 2), tensor(f1, tensor(Matrix::Identity(2, 2), f2)));
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("composite models factor on product states") {
  Rng rng(93);
  const MeasurementModel m1 = random_mm(rng, 2, 2, 2);
  const MeasurementModel m2 = random_mm(rng, 2, 2, 2);
  const MeasurementModel mc = composite_mm(m1, m2);
  CHECK(mc.base_dim() == 4);
  CHECK(mc.probe_dim() == 4);

  const Instrument h1 = model_instrument(m1);
  const Instrument h2 = model_instrument(m2);
  const Instrument hc = model_instrument(mc);
  const DensityState rho1 = random_state(rng, 2);
  const DensityState rho2 = random_state(rng, 2);
  for (size_t x = 0; x < h1.size(); ++x) {
    for (size_t y = 0; y < h2.size(); ++y) {
      const Matrix lhs =
          hc.at(pair_label(h1.label(x), h2.label(y))).apply(tensor(rho1.matrix(), rho2.matrix()));
      const Matrix rhs = tensor(h1.op(x).apply(rho1.matrix()), h2.op(y).apply(rho2.matrix()));
      CHECK((lhs - rhs).norm() < 1e-9);
    }
  }

  // Composite of two trivial-probe models stays a trivial-probe model.
  const MeasurementModel u1 = MeasurementModel::make(
      2, 2, random_state(rng, 2), random_channel(rng, 4, 2), Observable::unit(2, "a"));
  const MeasurementModel u2 = MeasurementModel::make(
      2, 2, random_state(rng, 2), random_channel(rng, 4, 2), Observable::unit(2, "b"));
  const MeasurementModel uc = composite_mm(u1, u2);
  CHECK(uc.probe_observable().size() == 1);
  const Instrument huc = model_instrument(uc);
  CHECK((huc.op(0).kraus_sum() - Matrix::Identity(4, 4)).norm() < 1e-9);
}
