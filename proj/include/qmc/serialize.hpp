// JSON serialization of entities. Complex numbers are [re, im] pairs and
// matrices row-major nested arrays, so files are language-neutral and
// lossless at double precision. Parse errors carry the path of the
// offending field.
#ifndef QMC_SERIALIZE_HPP
#define QMC_SERIALIZE_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <variant>

#include "qmc/parts.hpp"

namespace qmc {

using Json = nlohmann::ordered_json;

// Any value the CLI can read or write.
using AnyEntity = std::variant<Effect, DensityState, Observable, Instrument, MeasurementModel>;

const char* any_entity_kind(const AnyEntity& e);

// Parses and validates a JSON entity spec; throws ParseError with the
// offending path, or the domain module's validation error.
AnyEntity parse_entity(const std::string& text, Tolerance tol = {});
AnyEntity parse_entity_json(const Json& j, Tolerance tol = {});

Json serialize_entity(const AnyEntity& e);

Json serialize_matrix(const Matrix& m);
Matrix parse_matrix(const Json& j, const std::string& path);

Json serialize_surjection(const Surjection& f);
Surjection parse_surjection(const Json& j, const std::string& path);

// Summary of a parsed entity: kind, dimensions, outcome labels.
Json describe_entity(const AnyEntity& e);

// Structured error payload used by the C API and the CLI.
Json error_json(const Error& err);

// Converts between the part/coexistence results and JSON.
Json serialize_part_result(const PartResult& r, Tolerance tol);
Json serialize_witness(const WitnessAttempt& attempt, Tolerance tol);

std::string dump_json(const Json& j);

}  // namespace qmc

#endif  // QMC_SERIALIZE_HPP
