#include "qmc/serialize.hpp"

#include <sstream>

namespace qmc {

namespace {

const Json& require_field(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'", path);
  }
  return *it;
}

int require_positive_int(const Json& j, const char* key, const std::string& path) {
  const Json& field = require_field(j, key, path);
  if (!field.is_number_integer() || field.get<int>() < 1) {
    throw ParseError(std::string("field '") + key + "' must be a positive integer",
                     path + "/" + key);
  }
  return field.get<int>();
}

Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex entries must be [re, im] pairs", path);
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

std::vector<Matrix> parse_kraus_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("expected a non-empty array of Kraus matrices", path);
  }
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_matrix(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

Json serialize_kraus_list(const std::vector<Matrix>& kraus) {
  Json out = Json::array();
  for (const auto& k : kraus) out.push_back(serialize_matrix(k));
  return out;
}

std::vector<std::pair<OutcomeLabel, Matrix>> parse_labeled_matrices(const Json& j,
                                                                    const std::string& path) {
  if (!j.is_object() || j.empty()) {
    throw ParseError("expected a non-empty label-to-matrix object", path);
  }
  std::vector<std::pair<OutcomeLabel, Matrix>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace_back(it.key(), parse_matrix(it.value(), path + "/" + it.key()));
  }
  return out;
}

Observable parse_observable_payload(const Json& j, const char* key, const std::string& path,
                                    Tolerance tol) {
  const auto labeled = parse_labeled_matrices(require_field(j, key, path), path + "/" + key);
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(labeled.size());
  for (const auto& [label, m] : labeled) {
    try {
      outcomes.emplace_back(label, Effect::make(m, tol));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), path + "/" + key + "/" + label);
    }
  }
  return Observable::make(std::move(outcomes), tol);
}

}  // namespace

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("expected a non-empty array of matrix rows", path);
  }
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError("matrix rows must be non-empty arrays", path + "/0");
  }
  const size_t cols = j[0].size();
  Matrix out(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    const std::string row_path = path + "/" + std::to_string(r);
    if (!row.is_array() || row.size() != cols) {
      throw ParseError("matrix rows have inconsistent lengths", row_path);
    }
    for (size_t c = 0; c < cols; ++c) {
      out(r, c) = parse_complex(row[c], row_path + "/" + std::to_string(c));
    }
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out.data()[i].real()) || !std::isfinite(out.data()[i].imag())) {
      throw ParseError("matrix entries must be finite", path);
    }
  }
  return out;
}

Json serialize_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json serialize_surjection(const Surjection& f) {
  Json map = Json::object();
  for (const auto& x : f.domain()) map[x] = f(x);
  Json out;
  out["domain"] = f.domain();
  out["codomain"] = f.codomain();
  out["map"] = std::move(map);
  return out;
}

Surjection parse_surjection(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError("expected a surjection object", path);
  const Json& dom = require_field(j, "domain", path);
  const Json& cod = require_field(j, "codomain", path);
  const Json& map = require_field(j, "map", path);
  if (!dom.is_array() || !cod.is_array() || !map.is_object()) {
    throw ParseError("surjection needs 'domain'/'codomain' arrays and a 'map' object", path);
  }
  std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
  for (auto it = map.begin(); it != map.end(); ++it) {
    if (!it.value().is_string()) {
      throw ParseError("surjection values must be labels", path + "/map/" + it.key());
    }
    assignment[it.key()] = it.value().get<std::string>();
  }
  try {
    return Surjection::make(dom.get<std::vector<std::string>>(),
                            cod.get<std::vector<std::string>>(), std::move(assignment));
  } catch (const Error& e) {
    throw ParseError(e.what(), path);
  }
}

const char* any_entity_kind(const AnyEntity& e) {
  switch (e.index()) {
    case 0: return "effect";
    case 1: return "state";
    case 2: return "observable";
    case 3: return "instrument";
    default: return "mm";
  }
}

AnyEntity parse_entity_json(const Json& j, Tolerance tol) {
  if (!j.is_object()) throw ParseError("entity spec must be an object", "");
  const Json& kind_field = require_field(j, "kind", "");
  if (!kind_field.is_string()) throw ParseError("field 'kind' must be a string", "/kind");
  const std::string kind = kind_field.get<std::string>();

  if (kind == "effect") {
    const int dim = require_positive_int(j, "dim", "");
    const Matrix m = parse_matrix(require_field(j, "matrix", ""), "/matrix");
    if (m.rows() != dim || m.cols() != dim) {
      throw ParseError("matrix shape does not match 'dim'", "/matrix");
    }
    return Effect::make(m, tol);
  }
  if (kind == "state") {
    const int dim = require_positive_int(j, "dim", "");
    const Matrix m = parse_matrix(require_field(j, "matrix", ""), "/matrix");
    if (m.rows() != dim || m.cols() != dim) {
      throw ParseError("matrix shape does not match 'dim'", "/matrix");
    }
    bool partial = false;
    if (auto it = j.find("normalization"); it != j.end()) {
      if (!it->is_string() || (*it != "full" && *it != "partial")) {
        throw ParseError("field 'normalization' must be 'full' or 'partial'", "/normalization");
      }
      partial = (*it == "partial");
    }
    return partial ? DensityState::partial(m, tol) : DensityState::full(m, tol);
  }
  if (kind == "observable") {
    const int dim = require_positive_int(j, "dim", "");
    Observable obs = parse_observable_payload(j, "effects", "", tol);
    if (obs.dim() != dim) throw ParseError("effects do not match 'dim'", "/effects");
    return obs;
  }
  if (kind == "instrument") {
    const int dim = require_positive_int(j, "dim", "");
    const Json& ops_json = require_field(j, "operations", "");
    if (!ops_json.is_object() || ops_json.empty()) {
      throw ParseError("field 'operations' must map labels to Kraus lists", "/operations");
    }
    std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
    for (auto it = ops_json.begin(); it != ops_json.end(); ++it) {
      const std::string path = std::string("/operations/") + it.key();
      auto kraus = parse_kraus_list(it.value(), path);
      for (const auto& k : kraus) {
        if (k.rows() != dim || k.cols() != dim) {
          throw ParseError("Kraus matrix shape does not match 'dim'", path);
        }
      }
      ops.emplace_back(it.key(), QuantumOperation::from_kraus(std::move(kraus), tol));
    }
    return Instrument::make(std::move(ops), tol);
  }
  if (kind == "mm") {
    const int base_dim = require_positive_int(j, "base_dim", "");
    const int probe_dim = require_positive_int(j, "probe_dim", "");
    const Matrix eta = parse_matrix(require_field(j, "probe_state", ""), "/probe_state");
    auto kraus = parse_kraus_list(require_field(j, "interaction_kraus", ""),
                                  "/interaction_kraus");
    Observable f = parse_observable_payload(j, "probe_observable", "", tol);
    return MeasurementModel::make(base_dim, probe_dim, DensityState::full(eta, tol),
                                  Channel::from_kraus(std::move(kraus), tol), std::move(f), tol);
  }
  throw ParseError("unknown entity kind '" + kind + "'", "/kind");
}

AnyEntity parse_entity(const std::string& text, Tolerance tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  try {
    return parse_entity_json(j, tol);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed entity spec: ") + e.what(), "");
  }
}

Json serialize_entity(const AnyEntity& e) {
  Json out;
  out["kind"] = any_entity_kind(e);
  if (std::holds_alternative<Effect>(e)) {
    const auto& v = std::get<Effect>(e);
    out["dim"] = v.dim();
    out["matrix"] = serialize_matrix(v.matrix());
  } else if (std::holds_alternative<DensityState>(e)) {
    const auto& v = std::get<DensityState>(e);
    out["dim"] = v.dim();
    out["normalization"] = v.is_full() ? "full" : "partial";
    out["matrix"] = serialize_matrix(v.matrix());
  } else if (std::holds_alternative<Observable>(e)) {
    const auto& v = std::get<Observable>(e);
    out["dim"] = v.dim();
    Json effects = Json::object();
    for (size_t i = 0; i < v.size(); ++i) {
      effects[v.label(i)] = serialize_matrix(v.effect(i).matrix());
    }
    out["effects"] = std::move(effects);
  } else if (std::holds_alternative<Instrument>(e)) {
    const auto& v = std::get<Instrument>(e);
    out["dim"] = v.dim();
    Json ops = Json::object();
    for (size_t i = 0; i < v.size(); ++i) {
      ops[v.label(i)] = serialize_kraus_list(v.op(i).kraus());
    }
    out["operations"] = std::move(ops);
  } else {
    const auto& v = std::get<MeasurementModel>(e);
    out["base_dim"] = v.base_dim();
    out["probe_dim"] = v.probe_dim();
    out["probe_state"] = serialize_matrix(v.eta().matrix());
    out["interaction_kraus"] = serialize_kraus_list(v.nu().op().kraus());
    Json effects = Json::object();
    const auto& f = v.probe_observable();
    for (size_t i = 0; i < f.size(); ++i) {
      effects[f.label(i)] = serialize_matrix(f.effect(i).matrix());
    }
    out["probe_observable"] = std::move(effects);
  }
  return out;
}

Json describe_entity(const AnyEntity& e) {
  Json out;
  out["kind"] = any_entity_kind(e);
  if (std::holds_alternative<Effect>(e)) {
    out["dim"] = std::get<Effect>(e).dim();
  } else if (std::holds_alternative<DensityState>(e)) {
    const auto& v = std::get<DensityState>(e);
    out["dim"] = v.dim();
    out["trace"] = v.trace();
  } else if (std::holds_alternative<Observable>(e)) {
    const auto& v = std::get<Observable>(e);
    out["dim"] = v.dim();
    out["outcomes"] = v.labels();
  } else if (std::holds_alternative<Instrument>(e)) {
    const auto& v = std::get<Instrument>(e);
    out["dim"] = v.dim();
    out["outcomes"] = v.labels();
  } else {
    const auto& v = std::get<MeasurementModel>(e);
    out["base_dim"] = v.base_dim();
    out["probe_dim"] = v.probe_dim();
    out["outcomes"] = v.probe_observable().labels();
  }
  return out;
}

Json error_json(const Error& err) {
  Json out;
  const char* code = "internal";
  switch (err.code()) {
    case ErrorCode::dimension_mismatch: code = "dimension_mismatch"; break;
    case ErrorCode::validation: code = "validation"; break;
    case ErrorCode::numeric: code = "numeric"; break;
    case ErrorCode::parse: code = "parse"; break;
    case ErrorCode::argument: code = "argument"; break;
    case ErrorCode::unsupported: code = "unsupported"; break;
  }
  Json body;
  body["code"] = code;
  body["message"] = err.what();
  if (const auto* pe = dynamic_cast<const ParseError*>(&err)) {
    body["path"] = pe->path();
  }
  out["error"] = std::move(body);
  return out;
}

namespace {

Json certificate_json(const PartCertificate& cert, Tolerance tol) {
  Json out;
  out["child_kind"] = entity_kind_name(cert.child);
  out["parent_kind"] = entity_kind_name(cert.parent);
  out["map"] = serialize_surjection(cert.map);
  std::ostringstream res;
  res.setf(std::ios::scientific);
  res.precision(5);
  res << replay_residual(cert, tol);
  out["residual"] = res.str();
  return out;
}

}  // namespace

Json serialize_part_result(const PartResult& r, Tolerance tol) {
  Json out;
  switch (r.status) {
    case PartStatus::found: out["status"] = "found"; break;
    case PartStatus::not_found: out["status"] = "not_found"; break;
    case PartStatus::incomparable: out["status"] = "incomparable"; break;
  }
  if (!r.detail.empty()) out["detail"] = r.detail;
  if (r.certificate) out["certificate"] = certificate_json(*r.certificate, tol);
  return out;
}

Json serialize_witness(const WitnessAttempt& attempt, Tolerance tol) {
  Json out;
  out["coexistent"] = attempt.witness.has_value();
  Json members = Json::array();
  for (const auto& r : attempt.member_results) {
    members.push_back(serialize_part_result(r, tol));
  }
  out["members"] = std::move(members);
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qmc
