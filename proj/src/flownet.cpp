#include "termflow/flownet.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "termflow/dsl.hpp"
#include "termflow/error.hpp"

namespace termflow {

// ---------------------------------------------------------------------------
// Shared term DAG

namespace {

class DagBuilder {
 public:
  explicit DagBuilder(const DispersionSpec& spec) {
    dag_.input_count = spec.input_count();
    for (const auto& x : spec.inputs()) dag_.nodes.push_back({DagNode::Kind::Input, x, {}, x});
  }

  std::size_t add(const Term& t, const std::vector<std::string>& inputs) {
    if (t.is_variable()) {
      auto it = std::find(inputs.begin(), inputs.end(), t.name());
      return static_cast<std::size_t>(it - inputs.begin());
    }
    std::vector<std::size_t> children;
    for (const auto& a : t.args()) children.push_back(add(a, inputs));
    auto key = std::make_pair(t.name(), children);
    if (auto it = interned_.find(key); it != interned_.end()) return it->second;
    const std::size_t id = dag_.nodes.size();
    dag_.nodes.push_back({DagNode::Kind::Operation, t.name(), std::move(children), render(t)});
    interned_.emplace(std::move(key), id);
    return id;
  }

  TermDag take() { return std::move(dag_); }
  TermDag& dag() { return dag_; }

 private:
  TermDag dag_;
  std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> interned_;
};

}  // namespace

TermDag build_dag(const DispersionSpec& spec) {
  DagBuilder builder(spec);
  for (const auto& t : spec.outputs())
    builder.dag().output_roots.push_back(builder.add(t, spec.inputs()));
  return builder.take();
}

// ---------------------------------------------------------------------------
// Network

std::string edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Source:
      return "source";
    case EdgeKind::Split:
      return "node";
    case EdgeKind::Wiring:
      return "wiring";
    case EdgeKind::Sink:
      return "sink";
  }
  return "unknown";
}

std::string FlowNetwork::node_name(std::size_t node) const {
  if (node == kSource) return "s";
  if (node == kSink) return "t";
  const std::size_t dag_node = (node - 2) / 2;
  return dag.nodes[dag_node].label + ((node % 2 == 0) ? ":in" : ":out");
}

FlowNetwork build_network(const TermDag& dag) {
  FlowNetwork net;
  net.dag = dag;
  net.node_count = 2 + 2 * dag.nodes.size();
  net.infinity = static_cast<std::int64_t>(dag.output_roots.size()) + 1;
  const auto inf = net.infinity;

  for (std::size_t i = 0; i < dag.input_count; ++i)
    net.edges.push_back({FlowNetwork::kSource, FlowNetwork::in_node(i), inf, EdgeKind::Source, i});
  for (std::size_t v = 0; v < dag.nodes.size(); ++v)
    net.edges.push_back({FlowNetwork::in_node(v), FlowNetwork::out_node(v), 1, EdgeKind::Split, v});
  for (std::size_t v = 0; v < dag.nodes.size(); ++v) {
    // Repeated arguments f(x, x) share one wiring edge.
    std::vector<std::size_t> children = dag.nodes[v].children;
    std::sort(children.begin(), children.end());
    children.erase(std::unique(children.begin(), children.end()), children.end());
    for (auto c : children)
      net.edges.push_back(
          {FlowNetwork::out_node(c), FlowNetwork::in_node(v), inf, EdgeKind::Wiring, v});
  }
  std::vector<std::size_t> attached;
  for (auto root : dag.output_roots) {
    if (std::find(attached.begin(), attached.end(), root) != attached.end()) continue;
    attached.push_back(root);
    net.edges.push_back({FlowNetwork::out_node(root), FlowNetwork::kSink, 1, EdgeKind::Sink, root});
  }
  return net;
}

// ---------------------------------------------------------------------------
// Dinic

MaxFlow::MaxFlow(std::size_t node_count) : graph_(node_count), level_(node_count), iter_(node_count) {}

std::size_t MaxFlow::add_edge(std::size_t from, std::size_t to, std::int64_t capacity) {
  const std::size_t id = edge_pos_.size();
  edge_pos_.emplace_back(from, graph_[from].size());
  const std::size_t rev_from = graph_[to].size() + (from == to ? 1 : 0);
  graph_[from].push_back({to, rev_from, capacity, capacity});
  graph_[to].push_back({from, graph_[from].size() - 1, 0, 0});
  return id;
}

bool MaxFlow::bfs(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop();
    for (const auto& arc : graph_[v]) {
      if (arc.capacity > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[v] + 1;
        queue.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

std::int64_t MaxFlow::dfs(std::size_t v, std::size_t sink, std::int64_t pushed) {
  if (v == sink) return pushed;
  for (auto& i = iter_[v]; i < graph_[v].size(); ++i) {
    Arc& arc = graph_[v][i];
    if (arc.capacity <= 0 || level_[arc.to] != level_[v] + 1) continue;
    const std::int64_t got = dfs(arc.to, sink, std::min(pushed, arc.capacity));
    if (got > 0) {
      arc.capacity -= got;
      graph_[arc.to][arc.rev].capacity += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(std::size_t source, std::size_t sink) {
  std::int64_t total = 0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (auto pushed = dfs(source, sink, std::numeric_limits<std::int64_t>::max()))
      total += pushed;
  }
  return total;
}

std::int64_t MaxFlow::flow(std::size_t edge) const {
  const auto [from, index] = edge_pos_[edge];
  const Arc& arc = graph_[from][index];
  return arc.original - arc.capacity;
}

std::vector<bool> MaxFlow::sink_side(std::size_t sink) const {
  // Reverse search: u reaches the sink if some residual arc u -> w has w marked.
  std::vector<bool> marked(graph_.size(), false);
  std::queue<std::size_t> queue;
  marked[sink] = true;
  queue.push(sink);
  while (!queue.empty()) {
    const auto w = queue.front();
    queue.pop();
    for (const auto& back : graph_[w]) {
      const Arc& forward = graph_[back.to][back.rev];
      if (forward.capacity > 0 && !marked[back.to]) {
        marked[back.to] = true;
        queue.push(back.to);
      }
    }
  }
  return marked;
}

// ---------------------------------------------------------------------------
// Exponent

ExponentResult max_flow(const FlowNetwork& network) {
  MaxFlow solver(network.node_count);
  for (const auto& e : network.edges) solver.add_edge(e.from, e.to, e.capacity);
  ExponentResult result;
  result.max_flow_value = solver.run(FlowNetwork::kSource, FlowNetwork::kSink);
  result.exponent = result.max_flow_value;
  const auto sink_side = solver.sink_side(FlowNetwork::kSink);
  for (std::size_t i = 0; i < network.edges.size(); ++i) {
    const auto& e = network.edges[i];
    result.edge_flow.push_back(solver.flow(i));
    if (!sink_side[e.from] && sink_side[e.to])
      result.min_cut.push_back({i, e.kind, e.dag_node, network.dag.nodes[e.dag_node].label,
                                e.capacity});
  }
  return result;
}

ExponentResult dispersion_exponent(const DispersionSpec& spec) {
  return max_flow(build_network(build_dag(spec)));
}

ThresholdDecision decide_threshold(const DispersionSpec& spec, std::size_t d) {
  ThresholdDecision decision;
  decision.d = d;
  decision.certificate = dispersion_exponent(spec);
  decision.yes = decision.certificate.exponent >= static_cast<std::int64_t>(d) + 1;
  return decision;
}

bool decide_perfect_r1(const DispersionSpec& spec) {
  if (spec.output_count() != 1)
    throw PreconditionError("the syntactic perfect-dispersion test needs exactly one output (r=" +
                            std::to_string(spec.output_count()) + ")");
  return spec.outputs().front().has_variable();
}

std::string to_dot(const FlowNetwork& network, const ExponentResult* result) {
  std::ostringstream out;
  out << "digraph \"flow\" {\n  rankdir=LR;\n";
  for (std::size_t v = 0; v < network.node_count; ++v)
    out << "  n" << v << " [label=\"" << network.node_name(v) << "\"];\n";
  for (std::size_t i = 0; i < network.edges.size(); ++i) {
    const auto& e = network.edges[i];
    out << "  n" << e.from << " -> n" << e.to << " [label=\"";
    if (e.capacity >= network.infinity)
      out << "inf";
    else
      out << e.capacity;
    if (result) out << " / " << result->edge_flow[i];
    out << "\"";
    if (result && std::any_of(result->min_cut.begin(), result->min_cut.end(),
                              [&](const CutEdge& c) { return c.edge == i; }))
      out << ", color=red, penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace termflow
