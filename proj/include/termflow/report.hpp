#pragma once

// JSON views of the library's results. Reports are nlohmann::json objects,
// whose keys are kept sorted, and serialize() fixes indentation and the
// trailing newline, so identical inputs give byte-identical output.

#include <string>
#include <string_view>

#include <json.hpp>

#include "termflow/depgraph.hpp"
#include "termflow/flownet.hpp"
#include "termflow/normalize.hpp"
#include "termflow/oracle.hpp"

namespace termflow {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// 64-bit FNV-1a, printed as "fnv1a64:" followed by 16 hex digits.
std::string input_digest(std::string_view bytes);

Json to_json(const Interpretation& interp);
Json to_json(const OracleResult& result);
Json to_json(const PerfectResult& result);
Json to_json(const GuessingStrategy& strategy, const DependencyGraph& g);
Json to_json(const GuessingResult& result, const DependencyGraph& g);
Json to_json(const Classification& c);
Json to_json(const PipelineReport& report);
Json to_json(const NormalSystem& system);
Json to_json(const DependencyGraph& g);
Json to_json(const SandwichReport& report);
Json to_json(const EmbeddingReport& report);
// Exponent with the network summary; the cut certificate only on request.
Json to_json(const ExponentResult& result, const FlowNetwork& network, bool certificate);

Json make_report(std::string command, std::string_view input, Json parameters, Json result);

std::string serialize(const Json& report);

}  // namespace termflow
