#include "termflow/report.hpp"

#include <cstdio>

#include "termflow/dsl.hpp"

namespace termflow {

std::string input_digest(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + buf;
}

Json to_json(const Interpretation& interp) {
  Json tables = Json::object();
  for (std::size_t i = 0; i < interp.signature().size(); ++i)
    tables[interp.signature().symbols()[i].name] = interp.tables()[i];
  return {{"n", interp.n()}, {"tables", tables}};
}

namespace {
Json rate_json(const std::optional<double>& rate) {
  if (!rate) return nullptr;
  return *rate;
}
}  // namespace

Json to_json(const OracleResult& result) {
  return {{"value", result.value},
          {"witness", to_json(result.witness)},
          {"witness_index", result.witness_index},
          {"rate", rate_json(result.rate)},
          {"interpretations", result.interpretations},
          {"evaluations", result.evaluations}};
}

Json to_json(const PerfectResult& result) {
  Json out = {{"perfect", result.perfect},
              {"examined", result.examined},
              {"space", result.space},
              {"witness", nullptr}};
  if (result.witness) out["witness"] = to_json(*result.witness);
  return out;
}

Json to_json(const GuessingStrategy& strategy, const DependencyGraph& g) {
  Json tables = Json::object();
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.is_source(v)) continue;
    Json inputs = Json::array();
    for (auto u : g.in_neighbours(v)) inputs.push_back(g.vertices()[u]);
    tables[g.vertices()[v]] = {{"inputs", inputs}, {"table", strategy.tables[v]}};
  }
  return {{"n", strategy.n}, {"guesses", tables}};
}

Json to_json(const GuessingResult& result, const DependencyGraph& g) {
  return {{"value", result.value},
          {"strategy", to_json(result.strategy, g)},
          {"strategy_index", result.strategy_index},
          {"rate", rate_json(result.rate)},
          {"strategies", result.strategies},
          {"evaluations", result.evaluations}};
}

Json to_json(const Classification& c) {
  return {{"defined", c.defined},   {"sources", c.sources},
          {"normal", c.is_normal},  {"collision_free", c.is_collision_free},
          {"fnf", c.is_fnf},        {"cfnf", c.is_cfnf}};
}

Json to_json(const PipelineReport& report) {
  Json merges = Json::array();
  for (const auto& m : report.merges)
    merges.push_back({{"stage", m.stage}, {"merged", m.merged}, {"into", m.into}});
  return {{"stages", report.stages},
          {"merges", merges},
          {"auxiliaries", report.auxiliaries},
          {"collision_rounds", report.collision_rounds},
          {"classification", to_json(report.classification)}};
}

Json to_json(const NormalSystem& system) {
  Json equations = Json::array();
  for (const auto& eq : system.equations) {
    std::string text = eq.symbol + "(";
    for (std::size_t i = 0; i < eq.args.size(); ++i) text += (i ? ", " : "") + eq.args[i];
    equations.push_back(text + ") = " + eq.defined);
  }
  Json equalities = Json::array();
  for (const auto& [a, b] : system.var_equalities) equalities.push_back(a + " = " + b);
  Json origin = Json::object();
  for (const auto& [name, term] : system.origin) origin[name] = render(term);
  return {{"variables", system.variables},
          {"signature", render(system.signature)},
          {"equations", equations},
          {"variable_equalities", equalities},
          {"origin", origin}};
}

Json to_json(const DependencyGraph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({g.vertices()[u], g.vertices()[v]});
  return {{"vertices", g.vertices()}, {"edges", edges}, {"sources", g.sources()}};
}

Json to_json(const SandwichReport& report) {
  return {{"n", report.n},
          {"m", report.m},
          {"v", report.v},
          {"s_n", report.s_n},
          {"s_n_div", report.s_n_div},
          {"s_m_div", report.s_m_div},
          {"lifted_count", report.lifted_count},
          {"lifted", to_json(report.lifted)},
          {"diversified_witness", to_json(report.diversified_witness)},
          {"upper_holds", report.upper_holds},
          {"lower_holds", report.lower_holds}};
}

Json to_json(const EmbeddingReport& report) {
  return {{"equal", report.equal},
          {"mode", report.mode},
          {"dispersion", to_json(report.dispersion)},
          {"code_size", to_json(report.code_size)}};
}

Json to_json(const ExponentResult& result, const FlowNetwork& network, bool certificate) {
  Json out = {{"exponent", result.exponent},
              {"max_flow", result.max_flow_value},
              {"network",
               {{"nodes", network.node_count},
                {"edges", network.edges.size()},
                {"dag_nodes", network.dag.nodes.size()},
                {"infinity", network.infinity}}}};
  if (certificate) {
    Json cut = Json::array();
    for (const auto& c : result.min_cut) {
      const auto& e = network.edges[c.edge];
      cut.push_back({{"edge", c.edge},
                     {"from", e.from},
                     {"to", e.to},
                     {"from_name", network.node_name(e.from)},
                     {"to_name", network.node_name(e.to)},
                     {"kind", edge_kind_name(c.kind)},
                     {"label", c.label},
                     {"capacity", c.capacity},
                     {"flow", result.edge_flow[c.edge]},
                     {"saturated", result.edge_flow[c.edge] == c.capacity}});
    }
    std::int64_t capacity = 0;
    for (const auto& c : result.min_cut) capacity += c.capacity;
    out["certificate"] = {{"cut", cut}, {"cut_capacity", capacity}};
  }
  return out;
}

Json make_report(std::string command, std::string_view input, Json parameters, Json result) {
  return {{"command", std::move(command)},
          {"input_digest", input_digest(input)},
          {"parameters", std::move(parameters)},
          {"result", std::move(result)},
          {"tool_version", kToolVersion}};
}

std::string serialize(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace termflow
