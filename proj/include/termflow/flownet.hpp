#pragma once

// Compilation of a dispersion spec to a capacitated network whose maximum
// flow is the integer dispersion exponent D(t).
//
// Every term-DAG node (inputs included) is split into v_in -> v_out with
// capacity 1. Argument wiring, super-source edges and node outputs use the
// finite stand-in INF = r + 1; each distinct output root feeds the sink with
// capacity 1. Symbol-reuse coupling is not modelled, so the value is the
// exponent of the diversified spec, which bounds Disp_n from above.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "termflow/term.hpp"

namespace termflow {

struct DagNode {
  enum class Kind { Input, Operation };
  Kind kind = Kind::Input;
  // Input variable name or applied symbol.
  std::string symbol;
  std::vector<std::size_t> children;
  // Rendered subterm, used as a display label.
  std::string label;
};

struct TermDag {
  // Inputs occupy indices [0, k) in input order.
  std::vector<DagNode> nodes;
  // Output i is attached to nodes[output_roots[i]].
  std::vector<std::size_t> output_roots;
  std::size_t input_count = 0;

  std::size_t operation_count() const { return nodes.size() - input_count; }
};

TermDag build_dag(const DispersionSpec& spec);

enum class EdgeKind { Source, Split, Wiring, Sink };
std::string edge_kind_name(EdgeKind kind);

struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t capacity = 0;
  EdgeKind kind = EdgeKind::Split;
  // DAG node the edge belongs to (split/sink: the node itself; wiring: the
  // consuming application; source: the input).
  std::size_t dag_node = 0;
};

struct FlowNetwork {
  static constexpr std::size_t kSource = 0;
  static constexpr std::size_t kSink = 1;
  static std::size_t in_node(std::size_t dag_node) { return 2 + 2 * dag_node; }
  static std::size_t out_node(std::size_t dag_node) { return 3 + 2 * dag_node; }

  TermDag dag;
  std::size_t node_count = 2;
  std::int64_t infinity = 1;
  std::vector<FlowEdge> edges;

  std::string node_name(std::size_t node) const;
};

FlowNetwork build_network(const TermDag& dag);

// Dinic's algorithm on an integer-capacity digraph.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t node_count);

  // Returns the edge id.
  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t capacity);
  std::int64_t run(std::size_t source, std::size_t sink);

  std::int64_t flow(std::size_t edge) const;
  // Nodes that still reach `sink` in the residual graph after run().
  std::vector<bool> sink_side(std::size_t sink) const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    std::int64_t capacity;
    std::int64_t original;
  };

  bool bfs(std::size_t source, std::size_t sink);
  std::int64_t dfs(std::size_t v, std::size_t sink, std::int64_t pushed);

  std::vector<std::vector<Arc>> graph_;
  std::vector<std::pair<std::size_t, std::size_t>> edge_pos_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

struct CutEdge {
  std::size_t edge = 0;
  EdgeKind kind = EdgeKind::Split;
  std::size_t dag_node = 0;
  std::string label;
  std::int64_t capacity = 0;
};

struct ExponentResult {
  std::int64_t exponent = 0;
  std::int64_t max_flow_value = 0;
  // Canonical minimum cut: edges entering the set of nodes that still reach
  // the sink in the final residual graph, in edge order.
  std::vector<CutEdge> min_cut;
  // Flow on every network edge, indexed like FlowNetwork::edges.
  std::vector<std::int64_t> edge_flow;
};

ExponentResult max_flow(const FlowNetwork& network);
ExponentResult dispersion_exponent(const DispersionSpec& spec);

struct ThresholdDecision {
  bool yes = false;
  std::size_t d = 0;
  ExponentResult certificate;
};

// "Does Disp_n(t) >= h_d(n) hold for all large n" for any threshold with
// n^d < h_d(n) in o(n^{d+1}): yes iff D(t) >= d + 1.
ThresholdDecision decide_threshold(const DispersionSpec& spec, std::size_t d);

// Perfect dispersion for a single output: yes iff the term mentions an input.
// Throws PreconditionError unless r == 1.
bool decide_perfect_r1(const DispersionSpec& spec);

std::string to_dot(const FlowNetwork& network, const ExponentResult* result = nullptr);

}  // namespace termflow
