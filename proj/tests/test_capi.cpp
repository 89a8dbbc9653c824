// Exercises the shared-library C surface: handles, JSON in/out, error
// codes. Deliberately avoids the C++ headers of the core.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "qmc/qmc.h"

namespace {

struct Holder {
  qmc_entity* e = nullptr;
  ~Holder() { qmc_entity_free(e); }
};

struct Text {
  char* s = nullptr;
  ~Text() { qmc_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

const char* kBasisObservable = R"({
  "kind": "observable", "dim": 2,
  "effects": {
    "0": [[[1,0],[0,0]],[[0,0],[0,0]]],
    "1": [[[0,0],[0,0]],[[0,0],[1,0]]]
  }
})";

const char* kLudersBasis = R"({
  "kind": "instrument", "dim": 2,
  "operations": {
    "0": [[[[1,0],[0,0]],[[0,0],[0,0]]]],
    "1": [[[[0,0],[0,0]],[[0,0],[1,0]]]]
  }
})";

}  // namespace

TEST_CASE("parse, describe, serialize") {
  Holder obs;
  Text err;
  REQUIRE(qmc_entity_parse(kBasisObservable, 1e-9, &obs.e, &err.s) == QMC_OK);
  CHECK(err.s == nullptr);

  Text description;
  REQUIRE(qmc_entity_describe(obs.e, &description.s) == QMC_OK);
  CHECK(description.str().find("\"observable\"") != std::string::npos);
  CHECK(description.str().find("\"dim\": 2") != std::string::npos);

  Text serialized;
  REQUIRE(qmc_entity_serialize(obs.e, &serialized.s) == QMC_OK);
  Holder again;
  Text err2;
  REQUIRE(qmc_entity_parse(serialized.s, 1e-9, &again.e, &err2.s) == QMC_OK);
}

TEST_CASE("parse failures return codes and structured errors") {
  Holder bad;
  Text err;
  CHECK(qmc_entity_parse("{", 1e-9, &bad.e, &err.s) == QMC_ERR_PARSE);
  CHECK(err.str().find("\"error\"") != std::string::npos);
  CHECK(bad.e == nullptr);

  Holder invalid;
  Text err2;
  const char* too_big = R"({"kind":"effect","dim":1,"matrix":[[[1.5,0]]]})";
  CHECK(qmc_entity_parse(too_big, 1e-9, &invalid.e, &err2.s) == QMC_ERR_VALIDATION);
  CHECK(err2.str().find("upper bound") != std::string::npos);

  CHECK(std::string(qmc_status_name(QMC_ERR_VALIDATION)) == "validation_error");
}

TEST_CASE("measure maps the luders instrument back to its observable") {
  Holder instr;
  Text err;
  REQUIRE(qmc_entity_parse(kLudersBasis, 1e-9, &instr.e, &err.s) == QMC_OK);

  Holder hat;
  Text err2;
  REQUIRE(qmc_measure(instr.e, 1e-9, &hat.e, &err2.s) == QMC_OK);
  Text serialized;
  REQUIRE(qmc_entity_serialize(hat.e, &serialized.s) == QMC_OK);
  CHECK(serialized.str().find("\"observable\"") != std::string::npos);

  // Measuring an observable is unsupported: it is already at the lowest type.
  Holder obs;
  Text err3;
  REQUIRE(qmc_entity_parse(kBasisObservable, 1e-9, &obs.e, &err3.s) == QMC_OK);
  Holder nothing;
  Text err4;
  CHECK(qmc_measure(obs.e, 1e-9, &nothing.e, &err4.s) == QMC_ERR_UNSUPPORTED);
}

TEST_CASE("part check and enumerate parts through the C surface") {
  Holder obs;
  Text err;
  REQUIRE(qmc_entity_parse(kBasisObservable, 1e-9, &obs.e, &err.s) == QMC_OK);
  Holder instr;
  Text err2;
  REQUIRE(qmc_entity_parse(kLudersBasis, 1e-9, &instr.e, &err2.s) == QMC_OK);

  Text result;
  Text err3;
  REQUIRE(qmc_part_check(obs.e, instr.e, 1e-9, &result.s, &err3.s) == QMC_OK);
  CHECK(result.str().find("\"found\"") != std::string::npos);

  Text parts;
  Text err4;
  REQUIRE(qmc_enumerate_parts(obs.e, 1e-9, 8, &parts.s, &err4.s) == QMC_OK);
  CHECK(parts.str().find("\"count\": 2") != std::string::npos);

  // Coexistence of both basis restrictions inside the observable itself.
  const qmc_entity* members[2] = {obs.e, obs.e};
  Text witness;
  Text err5;
  REQUIRE(qmc_coexist(obs.e, members, 2, 1e-9, &witness.s, &err5.s) == QMC_OK);
  CHECK(witness.str().find("\"coexistent\": true") != std::string::npos);
}

TEST_CASE("tensor and reduce round trip through handles") {
  Holder obs;
  Text err;
  REQUIRE(qmc_entity_parse(kBasisObservable, 1e-9, &obs.e, &err.s) == QMC_OK);

  Holder big;
  Text err2;
  REQUIRE(qmc_tensor(obs.e, obs.e, 1e-9, &big.e, &err2.s) == QMC_OK);
  Text desc;
  REQUIRE(qmc_entity_describe(big.e, &desc.s) == QMC_OK);
  CHECK(desc.str().find("\"dim\": 4") != std::string::npos);

  Holder back;
  Text err3;
  REQUIRE(qmc_reduce(big.e, 2, 2, 1, 1e-9, &back.e, &err3.s) == QMC_OK);
  Text desc2;
  REQUIRE(qmc_entity_describe(back.e, &desc2.s) == QMC_OK);
  CHECK(desc2.str().find("\"dim\": 2") != std::string::npos);

  Holder bad;
  Text err4;
  CHECK(qmc_reduce(obs.e, 2, 2, 1, 1e-9, &bad.e, &err4.s) == QMC_ERR_DIMENSION);
}

TEST_CASE("joint probability through a common parent") {
  Holder obs;
  Text err;
  REQUIRE(qmc_entity_parse(kBasisObservable, 1e-9, &obs.e, &err.s) == QMC_OK);
  Holder state;
  Text err2;
  const char* mixed = R"({"kind":"state","dim":2,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]})";
  REQUIRE(qmc_entity_parse(mixed, 1e-9, &state.e, &err2.s) == QMC_OK);

  const qmc_entity* members[1] = {obs.e};
  Text result;
  Text err3;
  REQUIRE(qmc_joint_probability(obs.e, members, 1, state.e, R"([["0"]])", 1e-9, &result.s,
                                &err3.s) == QMC_OK);
  CHECK(result.str().find("\"probability\": 0.5") != std::string::npos);
}
