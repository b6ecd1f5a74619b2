#pragma once

// Dependency digraphs of functional normal-form systems and the guessing-game
// scaffolding built on them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "termflow/term.hpp"

namespace termflow {

struct NormalSystem;

class DependencyGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  DependencyGraph() = default;
  // Edges and sources are given by name; duplicate edges collapse.
  // Throws WellFormednessError for unknown or duplicate vertices.
  DependencyGraph(std::vector<std::string> vertices,
                  const std::vector<std::pair<std::string, std::string>>& edges,
                  const std::vector<std::string>& sources);

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  // Sorted by (tail, head) vertex index.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::vector<std::string> sources() const;
  bool is_source(std::size_t v) const { return is_source_[v]; }
  std::size_t source_count() const;

  std::optional<std::size_t> index_of(const std::string& name) const;
  // In-neighbours of v in vertex order (a set: parallel occurrences collapse).
  std::vector<std::size_t> in_neighbours(std::size_t v) const;

  bool operator==(const DependencyGraph&) const = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<bool> is_source_;
};

// One local guessing function per non-source vertex, over the in-neighbour
// values ordered by vertex index. Source vertices carry an empty table.
struct GuessingStrategy {
  Value n = 1;
  std::vector<std::vector<Value>> tables;

  bool operator==(const GuessingStrategy&) const = default;
};

// True iff every non-source vertex guesses its own value in `config`.
bool is_winning(const DependencyGraph& g, const GuessingStrategy& s, std::span<const Value> config);

// Requires an FNF system (throws PreconditionError otherwise).
DependencyGraph dependency_graph(const NormalSystem& system);

// Every source gets a self-loop and stops being a source.
DependencyGraph add_source_loops(const DependencyGraph& g);

// Graphviz text; sources are drawn as double circles.
std::string to_dot(const DependencyGraph& g, const std::string& name = "G");

}  // namespace termflow
