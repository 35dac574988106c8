#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pluri/boundary.hpp"
#include "pluri/capacity.hpp"
#include "pluri/discs.hpp"
#include "pluri/envelope.hpp"
#include "pluri/geometry.hpp"

namespace pluri {

using Json = nlohmann::json;  // std::map keys, canonical alphabetical dumps

inline constexpr const char* kVersion = "0.1.0";

// Tagged-record serialization. Parsers report the offending field path.
Json to_json(const DomainSpec& d);
DomainSpec domain_from_json(const Json& j, const std::string& path = "domain");

Json to_json(const SetExpr& s);
SetPtr set_from_json(const Json& j, const std::string& path = "set");

Json to_json(const ComplexPoint& p);
ComplexPoint point_from_json(const Json& j, const std::string& path = "point");

Json to_json(const AnalyticDisc& f);
AnalyticDisc disc_from_json(const Json& j, const std::string& path = "disc");

Json to_json(const SolverParams& p);
SolverParams solver_from_json(const Json& j, const std::string& path = "solver");

Json to_json(const DiscOptParams& p);
DiscOptParams optimizer_from_json(const Json& j, const std::string& path = "optimizer");

Json to_json(const DiscOptResult& r);
Json to_json(const CapacityReport& r);
Json to_json(const AxiomLedger& l);
Json to_json(const PolarReport& r);
Json to_json(const DiscBoundReport& r);
Json to_json(const BoundaryEqualityReport& r);
Json to_json(const BoundaryClosureReport& r);
Json to_json(const MonotoneUnionReport& r);
Json to_json(const WeakRegularityReport& r);

// FNV-1a over the canonical dump; stable under field reordering because keys
// are serialized in sorted order.
std::string config_hash(const Json& config);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

// CSV: one row per non-exterior node, coordinates then value.
void write_field_csv(const std::filesystem::path& path, const GridField& field);

// Compact binary cache of a converged field, keyed by the caller's hash.
void write_field_cache(const std::filesystem::path& path, const GridField& field,
                       const std::string& key);
bool read_field_cache(const std::filesystem::path& path, const GridPtr& grid,
                      const std::string& key, GridField& out);

}  // namespace pluri
