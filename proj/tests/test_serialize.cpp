#include <doctest.h>

#include "qmc/ensembles.hpp"
#include "qmc/serialize.hpp"

using namespace qmc;

namespace {

AnyEntity roundtrip(const AnyEntity& e) {
  return parse_entity(dump_json(serialize_entity(e)));
}

}  // namespace

TEST_CASE("simple specs parse") {
  const auto obs = parse_entity(R"({
    "kind": "observable", "dim": 1,
    "effects": { "only": [[[1, 0]]] }
  })");
  CHECK(std::holds_alternative<Observable>(obs));
  CHECK(std::get<Observable>(obs).size() == 1);

  const auto state = parse_entity(R"({
    "kind": "state", "dim": 2,
    "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]
  })");
  CHECK(std::holds_alternative<DensityState>(state));
}

TEST_CASE("rejections carry the offending path and bound") {
  // An effect with an eigenvalue beyond 1 names the upper bound.
  CHECK_THROWS_WITH_AS(parse_entity(R"({
        "kind": "effect", "dim": 1, "matrix": [[[1.5, 0]]]
      })"),
                       doctest::Contains("upper bound"), ValidationError);

  try {
    parse_entity(R"({"kind": "observable", "dim": 1, "effects": {"a": [[[2, 0]]]}})");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.path() == "/effects/a");
  }

  try {
    parse_entity(R"({"kind": "effect", "dim": 1, "matrix": [[[1, 0], [0, 0]]]})");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.path().find("/matrix") == 0);
  }
}

TEST_CASE("malformed documents surface as structured rejections") {
  const std::vector<std::string> corpus = {
      "",
      "not json",
      "[]",
      "{}",
      R"({"kind": "nonsense"})",
      R"({"kind": "effect"})",
      R"({"kind": "effect", "dim": 0, "matrix": [[[0,0]]]})",
      R"({"kind": "effect", "dim": 1, "matrix": [[[1]]]})",
      R"({"kind": "state", "dim": 1, "matrix": [[[2,0]]]})",
      R"({"kind": "observable", "dim": 1, "effects": {}})",
      R"({"kind": "instrument", "dim": 1, "operations": {"a": []}})",
      R"({"kind": "instrument", "dim": 2, "operations": {"a": [[[1,0]]]}})",
      R"({"kind": "mm", "base_dim": 2})",
      R"({"kind": "effect", "dim": 1, "matrix": [[[1e400, 0]]]})",
  };
  for (const auto& text : corpus) {
    CAPTURE(text);
    CHECK_THROWS_AS((void)parse_entity(text), Error);
  }
}

TEST_CASE("round trips preserve every entity kind") {
  Rng rng(121);
  CHECK(std::holds_alternative<Effect>(roundtrip(random_effect(rng, 3))));

  const auto state_rt = roundtrip(random_state(rng, 2));
  REQUIRE(std::holds_alternative<DensityState>(state_rt));
  CHECK(std::get<DensityState>(state_rt).is_full());

  const Observable obs = random_observable(rng, 2, 3);
  const auto obs_rt = roundtrip(obs);
  REQUIRE(std::holds_alternative<Observable>(obs_rt));
  const auto& obs2 = std::get<Observable>(obs_rt);
  REQUIRE(obs2.labels() == obs.labels());
  for (size_t i = 0; i < obs.size(); ++i) {
    CHECK((obs2.effect(i).matrix() - obs.effect(i).matrix()).norm() < 1e-14);
  }

  const Instrument instr = random_instrument(rng, 2, 2, 2);
  const auto instr_rt = roundtrip(instr);
  REQUIRE(std::holds_alternative<Instrument>(instr_rt));
  const auto& instr2 = std::get<Instrument>(instr_rt);
  REQUIRE(instr2.labels() == instr.labels());
  for (size_t i = 0; i < instr.size(); ++i) {
    CHECK(choi_distance(instr2.op(i), instr.op(i)) < 1e-12);
  }

  const MeasurementModel mm = random_mm(rng, 2, 2, 2);
  const auto mm_rt = roundtrip(mm);
  REQUIRE(std::holds_alternative<MeasurementModel>(mm_rt));
  const auto& mm2 = std::get<MeasurementModel>(mm_rt);
  CHECK(mm2.base_dim() == mm.base_dim());
  CHECK((mm2.eta().matrix() - mm.eta().matrix()).norm() < 1e-14);
  CHECK(choi_distance(mm2.nu().op(), mm.nu().op()) < 1e-12);

  // Serialization is deterministic text.
  CHECK(dump_json(serialize_entity(mm)) == dump_json(serialize_entity(mm)));
}

TEST_CASE("surjection serialization round trip") {
  Rng rng(123);
  const auto labels = index_labels(4);
  const Surjection f = random_surjection(rng, labels, 2);
  const Surjection g = parse_surjection(serialize_surjection(f), "");
  CHECK(g.domain() == f.domain());
  CHECK(g.codomain() == f.codomain());
  for (const auto& x : labels) CHECK(g(x) == f(x));
}
