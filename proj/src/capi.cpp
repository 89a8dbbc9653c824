#include "qmc/qmc.h"

#include <cstring>
#include <new>
#include <string>

#include "qmc/serialize.hpp"
#include "qmc/theorem_suite.hpp"

struct qmc_entity {
  qmc::AnyEntity value;
};

namespace {

using qmc::AnyEntity;
using qmc::Json;

char* copy_string(const std::string& text) {
  char* out = new (std::nothrow) char[text.size() + 1];
  if (!out) return nullptr;
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

qmc_status status_of(const qmc::Error& err) {
  switch (err.code()) {
    case qmc::ErrorCode::parse: return QMC_ERR_PARSE;
    case qmc::ErrorCode::validation: return QMC_ERR_VALIDATION;
    case qmc::ErrorCode::dimension_mismatch: return QMC_ERR_DIMENSION;
    case qmc::ErrorCode::numeric: return QMC_ERR_NUMERIC;
    case qmc::ErrorCode::argument: return QMC_ERR_ARGUMENT;
    case qmc::ErrorCode::unsupported: return QMC_ERR_UNSUPPORTED;
  }
  return QMC_ERR_INTERNAL;
}

void fill_error(char** error_json, const Json& body) {
  if (error_json) *error_json = copy_string(qmc::dump_json(body));
}

// Runs the body, mapping every thrown error to a status + error document.
template <typename Fn>
qmc_status guarded(char** error_json, Fn&& fn) {
  if (error_json) *error_json = nullptr;
  try {
    return fn();
  } catch (const qmc::Error& e) {
    fill_error(error_json, qmc::error_json(e));
    return status_of(e);
  } catch (const std::exception& e) {
    Json body;
    body["error"]["code"] = "internal";
    body["error"]["message"] = e.what();
    fill_error(error_json, body);
    return QMC_ERR_INTERNAL;
  }
}

qmc::Entity to_measurement_entity(const AnyEntity& any) {
  if (std::holds_alternative<qmc::Observable>(any)) {
    return std::get<qmc::Observable>(any);
  }
  if (std::holds_alternative<qmc::Instrument>(any)) {
    return std::get<qmc::Instrument>(any);
  }
  if (std::holds_alternative<qmc::MeasurementModel>(any)) {
    return std::get<qmc::MeasurementModel>(any);
  }
  throw qmc::ArgumentError(std::string("a ") + qmc::any_entity_kind(any) +
                           " is not a measurement entity (observable, instrument or mm)");
}

qmc_status emit_entity(AnyEntity value, qmc_entity** out_entity) {
  *out_entity = new qmc_entity{std::move(value)};
  return QMC_OK;
}

qmc::Factor side_of(int side) {
  if (side == 1) return qmc::Factor::first;
  if (side == 2) return qmc::Factor::second;
  throw qmc::ArgumentError("side must be 1 or 2");
}

}  // namespace

extern "C" {

const char* qmc_status_name(qmc_status status) {
  switch (status) {
    case QMC_OK: return "ok";
    case QMC_ERR_PARSE: return "parse_error";
    case QMC_ERR_VALIDATION: return "validation_error";
    case QMC_ERR_DIMENSION: return "dimension_mismatch";
    case QMC_ERR_NUMERIC: return "numeric_error";
    case QMC_ERR_ARGUMENT: return "argument_error";
    case QMC_ERR_UNSUPPORTED: return "unsupported";
    case QMC_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void qmc_string_free(char* text) { delete[] text; }

void qmc_entity_free(qmc_entity* entity) { delete entity; }

qmc_status qmc_entity_parse(const char* json_text, double tol, qmc_entity** out_entity,
                            char** error_json) {
  if (!json_text || !out_entity) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&] {
    return emit_entity(qmc::parse_entity(json_text, qmc::Tolerance(tol)), out_entity);
  });
}

qmc_status qmc_entity_serialize(const qmc_entity* entity, char** out_json) {
  if (!entity || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(nullptr, [&] {
    *out_json = copy_string(qmc::dump_json(qmc::serialize_entity(entity->value)));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_entity_describe(const qmc_entity* entity, char** out_json) {
  if (!entity || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(nullptr, [&] {
    *out_json = copy_string(qmc::dump_json(qmc::describe_entity(entity->value)));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_measure(const qmc_entity* entity, double tol, qmc_entity** out_entity,
                       char** error_json) {
  if (!entity || !out_entity) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    if (std::holds_alternative<qmc::Instrument>(entity->value)) {
      return emit_entity(qmc::measured_observable(std::get<qmc::Instrument>(entity->value)),
                         out_entity);
    }
    if (std::holds_alternative<qmc::MeasurementModel>(entity->value)) {
      return emit_entity(
          qmc::model_instrument(std::get<qmc::MeasurementModel>(entity->value), t), out_entity);
    }
    throw qmc::Error(qmc::ErrorCode::unsupported,
                     std::string("measure expects an instrument or mm, got ") +
                         qmc::any_entity_kind(entity->value));
  });
}

qmc_status qmc_reduce(const qmc_entity* entity, int n1, int n2, int side, double tol,
                      qmc_entity** out_entity, char** error_json) {
  if (!entity || !out_entity) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    const qmc::DimPair dims(n1, n2);
    const qmc::Factor factor = side_of(side);
    const auto& value = entity->value;
    if (std::holds_alternative<qmc::Effect>(value)) {
      return emit_entity(qmc::reduced_effect(std::get<qmc::Effect>(value), dims, factor),
                         out_entity);
    }
    if (std::holds_alternative<qmc::DensityState>(value)) {
      const auto& rho = std::get<qmc::DensityState>(value);
      if (rho.dim() != dims.total()) {
        throw qmc::DimensionError("state dimension does not factor as n1*n2");
      }
      const qmc::Matrix reduced = qmc::partial_trace(
          rho.matrix(), dims,
          factor == qmc::Factor::first ? qmc::Factor::second : qmc::Factor::first);
      return emit_entity(qmc::DensityState::trusted(reduced, rho.kind()), out_entity);
    }
    if (std::holds_alternative<qmc::Observable>(value)) {
      return emit_entity(qmc::reduced_obs(std::get<qmc::Observable>(value), dims, factor),
                         out_entity);
    }
    if (std::holds_alternative<qmc::Instrument>(value)) {
      return emit_entity(qmc::reduced_instr(std::get<qmc::Instrument>(value), dims, factor, t),
                         out_entity);
    }
    // Reduced models are delivered through their model instrument; the
    // reduced interaction itself is only defined on product arguments.
    return emit_entity(qmc::reduced_model_instrument(std::get<qmc::MeasurementModel>(value),
                                                     dims, factor, t),
                       out_entity);
  });
}

qmc_status qmc_tensor(const qmc_entity* left, const qmc_entity* right, double tol,
                      qmc_entity** out_entity, char** error_json) {
  if (!left || !right || !out_entity) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    const auto& a = left->value;
    const auto& b = right->value;
    if (a.index() != b.index()) {
      throw qmc::ArgumentError(std::string("tensor expects matching kinds, got ") +
                               qmc::any_entity_kind(a) + " and " + qmc::any_entity_kind(b));
    }
    if (std::holds_alternative<qmc::Effect>(a)) {
      return emit_entity(
          qmc::Effect::trusted(qmc::tensor(std::get<qmc::Effect>(a).matrix(),
                                           std::get<qmc::Effect>(b).matrix())),
          out_entity);
    }
    if (std::holds_alternative<qmc::DensityState>(a)) {
      const auto& sa = std::get<qmc::DensityState>(a);
      const auto& sb = std::get<qmc::DensityState>(b);
      const auto kind = (sa.is_full() && sb.is_full()) ? qmc::DensityState::Kind::full
                                                       : qmc::DensityState::Kind::partial;
      return emit_entity(
          qmc::DensityState::trusted(qmc::tensor(sa.matrix(), sb.matrix()), kind), out_entity);
    }
    if (std::holds_alternative<qmc::Observable>(a)) {
      return emit_entity(
          qmc::tensor_obs(std::get<qmc::Observable>(a), std::get<qmc::Observable>(b)),
          out_entity);
    }
    if (std::holds_alternative<qmc::Instrument>(a)) {
      return emit_entity(
          qmc::tensor_instr(std::get<qmc::Instrument>(a), std::get<qmc::Instrument>(b)),
          out_entity);
    }
    return emit_entity(qmc::composite_mm(std::get<qmc::MeasurementModel>(a),
                                         std::get<qmc::MeasurementModel>(b), t),
                       out_entity);
  });
}

qmc_status qmc_enumerate_parts(const qmc_entity* observable, double tol, int max_outcomes,
                               char** out_json, char** error_json) {
  if (!observable || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    if (!std::holds_alternative<qmc::Observable>(observable->value)) {
      throw qmc::Error(qmc::ErrorCode::unsupported,
                       "part enumeration is implemented for observables");
    }
    const auto& obs = std::get<qmc::Observable>(observable->value);
    const auto parts = qmc::enumerate_parts(obs, qmc::Tolerance(tol), max_outcomes);
    Json out;
    out["count"] = parts.size();
    Json list = Json::array();
    for (const auto& entry : parts) {
      Json item;
      item["part"] = qmc::serialize_entity(qmc::AnyEntity(entry.part));
      item["map"] = qmc::serialize_surjection(entry.map);
      list.push_back(std::move(item));
    }
    out["parts"] = std::move(list);
    *out_json = copy_string(qmc::dump_json(out));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_part_check(const qmc_entity* child, const qmc_entity* parent, double tol,
                          char** out_json, char** error_json) {
  if (!child || !parent || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    const qmc::PartResult result =
        qmc::part_of(to_measurement_entity(child->value), to_measurement_entity(parent->value), t);
    *out_json = copy_string(qmc::dump_json(qmc::serialize_part_result(result, t)));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_coexist(const qmc_entity* parent, const qmc_entity* const* members,
                       int member_count, double tol, char** out_json, char** error_json) {
  if (!parent || !members || member_count < 1 || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    std::vector<qmc::Entity> entities;
    entities.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      if (!members[i]) throw qmc::ArgumentError("null member entity");
      entities.push_back(to_measurement_entity(members[i]->value));
    }
    const auto attempt = qmc::make_witness(to_measurement_entity(parent->value), entities, t);
    *out_json = copy_string(qmc::dump_json(qmc::serialize_witness(attempt, t)));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_coexist_commuting(const qmc_entity* a, const qmc_entity* b, double tol,
                                 char** out_json, char** error_json) {
  if (!a || !b || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    if (!std::holds_alternative<qmc::Observable>(a->value) ||
        !std::holds_alternative<qmc::Observable>(b->value)) {
      throw qmc::Error(qmc::ErrorCode::unsupported,
                       "the commuting-joint construction expects two observables");
    }
    const auto& obs_a = std::get<qmc::Observable>(a->value);
    const auto& obs_b = std::get<qmc::Observable>(b->value);
    const qmc::Observable joint = qmc::joint_for_commuting(obs_a, obs_b, t);
    const auto attempt =
        qmc::make_witness(qmc::Entity(joint), {qmc::Entity(obs_a), qmc::Entity(obs_b)}, t);
    Json out;
    out["joint"] = qmc::serialize_entity(qmc::AnyEntity(joint));
    out["witness"] = qmc::serialize_witness(attempt, t);
    *out_json = copy_string(qmc::dump_json(out));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_joint_probability(const qmc_entity* parent, const qmc_entity* const* members,
                                 int member_count, const qmc_entity* state,
                                 const char* events_json, double tol, char** out_json,
                                 char** error_json) {
  if (!parent || !members || member_count < 1 || !state || !events_json || !out_json) {
    return QMC_ERR_ARGUMENT;
  }
  return guarded(error_json, [&]() -> qmc_status {
    const qmc::Tolerance t(tol);
    if (!std::holds_alternative<qmc::DensityState>(state->value)) {
      throw qmc::ArgumentError("joint probability expects a state entity");
    }
    std::vector<qmc::Entity> entities;
    entities.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      if (!members[i]) throw qmc::ArgumentError("null member entity");
      entities.push_back(to_measurement_entity(members[i]->value));
    }
    Json events_doc;
    try {
      events_doc = Json::parse(events_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw qmc::ParseError(std::string("invalid events JSON: ") + e.what(), "");
    }
    if (!events_doc.is_array() || events_doc.size() != static_cast<size_t>(member_count)) {
      throw qmc::ParseError("events must be one label array per member", "");
    }
    std::vector<std::vector<qmc::OutcomeLabel>> events;
    for (const auto& entry : events_doc) {
      if (!entry.is_array()) throw qmc::ParseError("each event must be an array of labels", "");
      events.push_back(entry.get<std::vector<std::string>>());
    }
    const auto attempt = qmc::make_witness(to_measurement_entity(parent->value), entities, t);
    if (!attempt.witness) {
      throw qmc::ValidationError("members do not coexist inside the given parent");
    }
    const double p = qmc::joint_distribution(
        *attempt.witness, std::get<qmc::DensityState>(state->value), events, t);
    Json out;
    out["probability"] = p;
    out["witness"] = qmc::serialize_witness(attempt, t);
    *out_json = copy_string(qmc::dump_json(out));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_mm_run(const qmc_entity* model, double tol, char** out_json, char** error_json) {
  if (!model || !out_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    if (!std::holds_alternative<qmc::MeasurementModel>(model->value)) {
      throw qmc::Error(qmc::ErrorCode::unsupported, "mm-run expects a measurement model");
    }
    const qmc::Tolerance t(tol);
    const auto& mm = std::get<qmc::MeasurementModel>(model->value);
    const qmc::Instrument instr = qmc::model_instrument(mm, t);
    Json out;
    out["model_instrument"] = qmc::serialize_entity(qmc::AnyEntity(instr));
    out["model_observable"] =
        qmc::serialize_entity(qmc::AnyEntity(qmc::measured_observable(instr)));
    *out_json = copy_string(qmc::dump_json(out));
    return *out_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

qmc_status qmc_theorem_suite(uint64_t seed, double tol, int max_outcomes, int include_timings,
                             char** report_json, int* checks_failed, char** error_json) {
  if (!report_json) return QMC_ERR_ARGUMENT;
  return guarded(error_json, [&]() -> qmc_status {
    qmc::SuiteOptions options;
    options.seed = seed;
    options.tol = tol;
    options.max_outcomes = max_outcomes;
    const qmc::SuiteReport report = qmc::run_theorem_suite(options);
    *report_json = copy_string(qmc::emit_report(report, include_timings != 0));
    if (checks_failed) *checks_failed = report.failed;
    return *report_json ? QMC_OK : QMC_ERR_INTERNAL;
  });
}

}  // extern "C"
