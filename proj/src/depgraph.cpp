#include "termflow/depgraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "termflow/error.hpp"
#include "termflow/normalize.hpp"

namespace termflow {

DependencyGraph::DependencyGraph(std::vector<std::string> vertices,
                                 const std::vector<std::pair<std::string, std::string>>& edges,
                                 const std::vector<std::string>& sources)
    : vertices_(std::move(vertices)), is_source_(vertices_.size(), false) {
  std::set<std::string> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) throw WellFormednessError("duplicate vertex '" + v + "'");
  auto require = [&](const std::string& name) {
    auto i = index_of(name);
    if (!i) throw WellFormednessError("unknown vertex '" + name + "'");
    return *i;
  };
  std::set<Edge> edge_set;
  for (const auto& [u, v] : edges) edge_set.emplace(require(u), require(v));
  edges_.assign(edge_set.begin(), edge_set.end());
  for (const auto& s : sources) is_source_[require(s)] = true;
}

std::vector<std::string> DependencyGraph::sources() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (is_source_[i]) out.push_back(vertices_[i]);
  return out;
}

std::size_t DependencyGraph::source_count() const {
  return static_cast<std::size_t>(std::count(is_source_.begin(), is_source_.end(), true));
}

std::optional<std::size_t> DependencyGraph::index_of(const std::string& name) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::vector<std::size_t> DependencyGraph::in_neighbours(std::size_t v) const {
  std::vector<std::size_t> out;
  for (const auto& [a, b] : edges_)
    if (b == v) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_winning(const DependencyGraph& g, const GuessingStrategy& s,
                std::span<const Value> config) {
  std::vector<Value> seen;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.is_source(v)) continue;
    seen.clear();
    for (auto u : g.in_neighbours(v)) seen.push_back(config[u]);
    if (s.tables[v][table_index(seen, s.n)] != config[v]) return false;
  }
  return true;
}

DependencyGraph dependency_graph(const NormalSystem& system) {
  const auto c = classify(system);
  if (!c.is_fnf)
    throw PreconditionError(
        "dependency graphs need a functional normal form (each defined variable defined exactly "
        "once, no pending variable equalities)");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& eq : system.equations)
    for (const auto& a : eq.args) edges.emplace_back(a, eq.defined);
  return DependencyGraph(system.variables, edges, c.sources);
}

DependencyGraph add_source_loops(const DependencyGraph& g) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(g.vertices()[u], g.vertices()[v]);
  for (const auto& s : g.sources()) edges.emplace_back(s, s);
  return DependencyGraph(g.vertices(), edges, {});
}

namespace {
std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}
}  // namespace

std::string to_dot(const DependencyGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n";
  for (std::size_t i = 0; i < g.vertices().size(); ++i) {
    out << "  " << quoted(g.vertices()[i]);
    if (g.is_source(i)) out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (const auto& [u, v] : g.edges())
    out << "  " << quoted(g.vertices()[u]) << " -> " << quoted(g.vertices()[v]) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace termflow
