#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qmc/ensembles.hpp"
#include "qmc/parts.hpp"

using namespace qmc;

TEST_CASE("set partition enumeration in restricted-growth order") {
  std::vector<std::vector<int>> seen;
  for_each_partition(3, [&](const std::vector<int>& rgs) { seen.push_back(rgs); });
  const std::vector<std::vector<int>> expected = {
      {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
  CHECK(seen == expected);

  int count4 = 0;
  for_each_partition(4, [&](const std::vector<int>&) { ++count4; });
  CHECK(count4 == 15);  // Bell number B_4
}

TEST_CASE("find_part_map: identity, constant, and constructed children") {
  Rng rng(101);
  const Observable parent = random_observable(rng, 2, 4);
  const auto self = find_part_map(parent, parent);
  REQUIRE(self.has_value());
  CHECK(self->map.is_bijection());
  CHECK(replay_residual(*self) < 1e-11);

  const auto total = find_part_map(Observable::unit(2), parent);
  REQUIRE(total.has_value());
  CHECK(total->map.codomain().size() == 1);

  for (int i = 0; i < 20; ++i) {
    const Observable p = random_observable(rng, 2 + i % 2, 4 + i % 3);
    const Surjection f = random_surjection(rng, p.labels(), 1 + i % 3);
    const Observable child = coarse_grain(p, f);
    const auto cert = find_part_map(child, p);
    REQUIRE(cert.has_value());
    CHECK(replay_residual(*cert) < 1e-10);
  }

  // Negative: an unrelated observable is generically not a part.
  const Observable unrelated = random_observable(rng, 2, 3);
  CHECK_FALSE(find_part_map(unrelated, parent).has_value());
  CHECK_THROWS_AS(find_part_map(random_observable(rng, 3, 2), parent), DimensionError);
}

TEST_CASE("find_part_map agrees with the exhaustive reference search") {
  Rng rng(103);
  for (int i = 0; i < 60; ++i) {
    const int m = 3 + i % 4;
    const Observable parent = random_observable(rng, 2, m);
    Observable child = [&] {
      if (i % 2 == 0) {
        return coarse_grain(parent, random_surjection(rng, parent.labels(), 1 + i % m));
      }
      return random_observable(rng, 2, 2 + i % 2);
    }();
    const auto fast = find_part_map(child, parent);
    const auto slow = find_part_map_exhaustive(child, parent);
    CHECK(fast.has_value() == slow.has_value());
  }
}

TEST_CASE("the first certificate in search order is returned") {
  // Four copies of 1/4 against two copies of 1/2: many certificates exist;
  // depth-first assignment in label order must pick the leading blocks.
  const Effect quarter = Effect::make(Matrix::Identity(2, 2) * 0.25);
  const Observable parent = Observable::make(
      {{"p0", quarter}, {"p1", quarter}, {"p2", quarter}, {"p3", quarter}});
  const Effect half = Effect::make(Matrix::Identity(2, 2) * 0.5);
  const Observable child = Observable::make({{"c0", half}, {"c1", half}});
  const auto cert = find_part_map(child, parent);
  REQUIRE(cert.has_value());
  CHECK(cert->map("p0") == "c0");
  CHECK(cert->map("p1") == "c0");
  CHECK(cert->map("p2") == "c1");
  CHECK(cert->map("p3") == "c1");
}

TEST_CASE("instrument part search and the product-instrument example") {
  Rng rng(105);
  const Instrument parent = random_instrument(rng, 2, 4, 2);
  const Surjection f = random_surjection(rng, parent.labels(), 2);
  const Instrument child = coarse_grain_instr(parent, f);
  const auto cert = find_part_map_instr(child, parent);
  REQUIRE(cert.has_value());
  CHECK(replay_residual(*cert) < 1e-10);

  const Instrument i1 = random_kraus_instrument(rng, 2, 2);
  const Instrument j1 = random_kraus_instrument(rng, 2, 2);
  const Instrument prod = product_instr(i1, j1);
  const auto cond_cert = find_part_map_instr(condition_instr(j1, i1), prod);
  REQUIRE(cond_cert.has_value());
  for (const auto& x : i1.labels())
    for (const auto& y : j1.labels()) CHECK(cond_cert->map(pair_label(x, y)) == y);
  CHECK_FALSE(find_part_map_instr(i1, prod).has_value());
}

TEST_CASE("part_of dispatches across entity types") {
  Rng rng(107);
  const Observable a = random_observable(rng, 2, 3);
  const Instrument l = luders(a);

  // A is part of its own Lueders instrument through the identity map.
  const PartResult r1 = part_of(Entity(a), Entity(l));
  REQUIRE(r1.status == PartStatus::found);
  CHECK(r1.certificate->map.is_bijection());
  CHECK(replay_residual(*r1.certificate) < 1e-10);

  // A constructed coarse-graining of the hat is found as a part.
  const Surjection f = random_surjection(rng, a.labels(), 2);
  const Observable part = coarse_grain(a, f);
  const PartResult r2 = part_of(Entity(part), Entity(l));
  REQUIRE(r2.status == PartStatus::found);

  // Instruments are never parts of observables.
  const PartResult r3 = part_of(Entity(l), Entity(a));
  CHECK(r3.status == PartStatus::incomparable);

  // Model against model requires a shared context.
  const MeasurementModel m1 = random_mm(rng, 2, 2, 3);
  const MeasurementModel m2 =
      m1.with_probe_observable(coarse_grain(m1.probe_observable(),
                                            random_surjection(rng, m1.probe_observable().labels(), 2)));
  const PartResult r4 = part_of(Entity(m2), Entity(m1));
  CHECK(r4.status == PartStatus::found);
  const MeasurementModel unrelated = random_mm(rng, 2, 2, 3);
  const PartResult r5 = part_of(Entity(unrelated), Entity(m1));
  CHECK(r5.status == PartStatus::incomparable);

  CHECK_THROWS_AS(part_of(Entity(random_observable(rng, 3, 2)), Entity(l)), DimensionError);
}

TEST_CASE("equivalence is relabeling") {
  Rng rng(109);
  const Observable a = random_observable(rng, 2, 3);
  std::vector<std::pair<OutcomeLabel, Effect>> shuffled;
  for (size_t i = 0; i < a.size(); ++i) {
    shuffled.emplace_back("re" + a.label(a.size() - 1 - i), a.effect(a.size() - 1 - i));
  }
  const Observable relabeled = Observable::trusted(std::move(shuffled));
  CHECK(equivalent(Entity(a), Entity(relabeled)));

  const Observable merged = coarse_grain(
      a, random_surjection(rng, a.labels(), 2));
  CHECK_FALSE(equivalent(Entity(a), Entity(merged)));

  const auto [ca, cb] = random_commuting_pair(rng, 2, 2, 2);
  CHECK(equivalent(Entity(seq_prod_obs(ca, cb)), Entity(seq_prod_obs(cb, ca))));
}

TEST_CASE("enumerate_parts: unit, degenerate multiplicities, generic product") {
  Rng rng(111);
  const auto unit_parts = enumerate_parts(Observable::unit(2));
  CHECK(unit_parts.size() == 1);

  // Two equal effects merge whole families of partitions.
  const Effect third = Effect::make(Matrix::Identity(2, 2) / 3.0);
  const Observable degenerate = Observable::make(
      {{"a", third}, {"b", third}, {"c", third}});
  const auto closed = enumerate_parts(degenerate);
  // Partitions of a 3-set: 5; classes here: {a,a,a}, {2a,a}, {1}.
  CHECK(closed.size() == 3);

  const Observable a = random_observable(rng, 2, 2);
  const Observable b = random_observable(rng, 2, 2);
  const auto parts = enumerate_parts(seq_prod_obs(a, b));
  // All nine coarse-grainings named in the two-outcome catalog appear.
  bool found_a = false, found_cond = false, found_self = false, found_unit = false;
  for (const auto& entry : parts) {
    if (equivalent(Entity(entry.part), Entity(a))) found_a = true;
    if (equivalent(Entity(entry.part), Entity(condition_obs(b, a)))) found_cond = true;
    if (entry.part.size() == 4) found_self = true;
    if (entry.part.size() == 1) found_unit = true;
  }
  CHECK(found_a);
  CHECK(found_cond);
  CHECK(found_self);
  CHECK(found_unit);

  CHECK_THROWS_AS(enumerate_parts(random_observable(rng, 2, 5), Tolerance(), 4), ArgumentError);
}

TEST_CASE("marginal checks") {
  Rng rng(113);
  const Observable a1 = random_observable(rng, 2, 2);
  const Observable a2 = random_observable(rng, 2, 3);
  // A same-space joint with the right marginals: B_(x,y) built from a common
  // refinement. Use the sequential product which marginalizes to A and (B|A).
  const Observable joint = seq_prod_obs(a1, a2);
  CHECK(marginal_check(joint, {a1, condition_obs(a2, a1)}, Tolerance(1e-9)));
  CHECK_FALSE(marginal_check(joint, {a1, a2}, Tolerance(1e-9)));

  CHECK_THROWS_AS(marginal_check(joint, {a1, a1}, Tolerance()), ArgumentError);
}

TEST_CASE("joints from a common parent and for commuting pairs") {
  Rng rng(115);
  const Observable common = random_observable(rng, 2, 5);
  const Surjection f = random_surjection(rng, common.labels(), 2);
  const Surjection g = random_surjection(rng, common.labels(), 3);
  const Observable joint = joint_from_common(common, {f, g});
  CHECK(joint.size() == 6);
  CHECK(marginal_check(joint, {coarse_grain(common, f), coarse_grain(common, g)},
                       Tolerance(1e-9)));

  const Observable single = joint_from_common(common, {f});
  for (const auto& y : f.codomain()) {
    CHECK((single.at(tuple_label({y})).matrix() -
           coarse_grain(common, f).at(y).matrix())
              .norm() < 1e-12);
  }

  const auto [ca, cb] = random_commuting_pair(rng, 2, 2, 2);
  const Observable cj = joint_for_commuting(ca, cb);
  CHECK(marginal_check(cj, {ca, cb}, Tolerance(1e-8)));

  // Two copies of the identity map give a diagonal-supported joint.
  const Surjection id = Surjection::identity(common.labels());
  const Observable diag = joint_from_common(common, {id, id});
  for (const auto& x : common.labels()) {
    for (const auto& y : common.labels()) {
      const Matrix& entry = diag.at(tuple_label({x, y})).matrix();
      if (x == y) {
        CHECK((entry - common.at(x).matrix()).norm() < 1e-13);
      } else {
        CHECK(entry.norm() == 0.0);
      }
    }
  }

  // A sharp observable commutes with itself and its self-joint is
  // diagonal-supported.
  const Observable sharp = random_atomic_observable(rng, 3);
  const Observable self_joint = joint_for_commuting(sharp, sharp);
  for (const auto& x : sharp.labels()) {
    for (const auto& y : sharp.labels()) {
      if (x != y) {
        CHECK(self_joint.at(pair_label(x, y)).matrix().norm() < 1e-7);
      }
    }
  }

  const Observable na = random_observable(rng, 2, 2);
  const Observable nb = random_observable(rng, 2, 2);
  CHECK_THROWS_WITH_AS(joint_for_commuting(na, nb), doctest::Contains("commutator"),
                       ValidationError);
}

TEST_CASE("witnesses and joint distributions") {
  Rng rng(117);
  const Observable common = random_observable(rng, 2, 5);
  const Surjection f = random_surjection(rng, common.labels(), 2);
  const Surjection g = random_surjection(rng, common.labels(), 2);
  const Observable ma = coarse_grain(common, f);
  const Observable mb = coarse_grain(common, g);
  const auto attempt = make_witness(Entity(common), {Entity(ma), Entity(mb)});
  REQUIRE(attempt.witness.has_value());

  const DensityState rho = random_state(rng, 2);
  // Full events give probability one.
  CHECK(joint_distribution(*attempt.witness, rho, {ma.labels(), mb.labels()}) ==
        doctest::Approx(1.0));
  // Marginalizing one member recovers the other's distribution under the
  // witness's own map.
  const auto& map_a = attempt.witness->certificates[0].map;
  const auto x_event = std::vector<OutcomeLabel>{ma.label(0)};
  double expected = 0.0;
  for (const auto& z : common.labels()) {
    if (map_a(z) == ma.label(0)) expected += occurrence_prob(rho, common.at(z));
  }
  CHECK(joint_distribution(*attempt.witness, rho, {x_event, mb.labels()}) ==
        doctest::Approx(expected));

  // Instrument parent: the formula runs through the event operation.
  const Instrument instr = random_instrument(rng, 2, 4, 2);
  const Surjection fi = random_surjection(rng, instr.labels(), 2);
  const Instrument child = coarse_grain_instr(instr, fi);
  const auto iattempt = make_witness(Entity(instr), {Entity(child)});
  REQUIRE(iattempt.witness.has_value());
  const double p =
      joint_distribution(*iattempt.witness, rho, {{child.label(0)}});
  const double direct = child.op(0).apply(rho.matrix()).trace().real();
  CHECK(p == doctest::Approx(direct));

  // A mismatched number of event sets is rejected.
  CHECK_THROWS_AS(joint_distribution(*attempt.witness, rho, {ma.labels()}), ArgumentError);

  // A witness whose certificate no longer replays is rejected as stale:
  // swap the images of two domain points that the certificate's own map
  // sends to different outcomes.
  CoexistenceWitness corrupted = *attempt.witness;
  const Surjection& original = attempt.witness->certificates[0].map;
  std::unordered_map<OutcomeLabel, OutcomeLabel> wrong;
  for (const auto& z : common.labels()) wrong[z] = original(z);
  OutcomeLabel first_of_a = original.fiber(ma.label(0)).front();
  OutcomeLabel first_of_b = original.fiber(ma.label(1)).front();
  std::swap(wrong[first_of_a], wrong[first_of_b]);
  corrupted.certificates[0].map =
      Surjection::make(common.labels(), original.codomain(), std::move(wrong));
  CHECK_THROWS_WITH_AS(
      joint_distribution(corrupted, rho, {ma.labels(), mb.labels()}),
      doctest::Contains("stale"), ValidationError);
}

TEST_CASE("mixed-type members share an instrument parent") {
  Rng rng(119);
  const Instrument parent = random_instrument(rng, 2, 4, 2);
  const Surjection f = random_surjection(rng, parent.labels(), 2);
  const Surjection g = random_surjection(rng, parent.labels(), 2);
  const Observable member_obs = coarse_grain(measured_observable(parent), f);
  const Instrument member_instr = coarse_grain_instr(parent, g);
  const auto attempt =
      make_witness(Entity(parent), {Entity(member_obs), Entity(member_instr)});
  REQUIRE(attempt.witness.has_value());

  const DensityState rho = random_state(rng, 2);
  const std::vector<OutcomeLabel> x_event{member_obs.label(0)};
  const std::vector<OutcomeLabel> y_event{member_instr.label(1)};
  const double p = joint_distribution(*attempt.witness, rho, {x_event, y_event});

  // The intersection-fiber formula, evaluated by hand through the parent.
  const auto& fa = attempt.witness->certificates[0].map;
  const auto& fb = attempt.witness->certificates[1].map;
  std::vector<OutcomeLabel> fiber;
  for (const auto& z : parent.labels()) {
    if (fa(z) == x_event[0] && fb(z) == y_event[0]) fiber.push_back(z);
  }
  const double expected = parent.event_op(fiber).apply(rho.matrix()).trace().real();
  CHECK(p == doctest::Approx(expected).epsilon(1e-10));
}
