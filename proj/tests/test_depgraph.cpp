#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/corpus.hpp"
#include "support/naive.hpp"
#include "termflow/depgraph.hpp"
#include "termflow/dsl.hpp"
#include "termflow/error.hpp"
#include "termflow/normalize.hpp"

using namespace termflow;

namespace {
using Edges = std::vector<DependencyGraph::Edge>;

DependencyGraph graph_of(std::string_view text) { return dependency_graph(pipeline(parse_system(text)).first); }
}  // namespace

TEST_CASE("edges follow argument occurrences") {
  const auto g = graph_of("instance { vars x, y, z; sig f/2; eq f(x, y) = z; }");
  CHECK(g.edges() == Edges{{0, 2}, {1, 2}});
  CHECK(g.sources() == std::vector<std::string>{"x", "y"});
  CHECK(g.in_neighbours(2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("repeated arguments give one edge") {
  const auto g = graph_of("instance { vars x, z; sig f/2; eq f(x, x) = z; }");
  CHECK(g.edges() == Edges{{0, 1}});
}

TEST_CASE("swap system is a 2-cycle without sources") {
  const auto g = dependency_graph(pipeline(corpus::system("swap.inst")).first);
  CHECK(g.edges() == Edges{{0, 1}, {1, 0}});
  CHECK(g.source_count() == 0);
}

TEST_CASE("diamond embedding alternates inputs and outputs") {
  const auto g = dependency_graph(pipeline(corpus::system("diamond_embedding.inst")).first);
  CHECK(g.source_count() == 0);
  // 8 input-to-output edges plus 16 output-to-input decoder edges.
  CHECK(g.edges().size() == 24);
  for (const auto& [u, v] : g.edges()) CHECK((u < 4) != (v < 4));
  const auto dot = to_dot(g);
  CHECK(dot == to_dot(dependency_graph(pipeline(corpus::system("diamond_embedding.inst")).first)));
  CHECK(std::count(dot.begin(), dot.end(), '>') == 24);
}

TEST_CASE("non-FNF systems are refused") {
  CHECK_THROWS_AS(graph_of("instance { vars x, y, z; sig f/1, g/1; eq f(x) = y; eq g(z) = y; }"),
                  PreconditionError);
  CHECK_THROWS_AS(dependency_graph(flatten(corpus::system("nested.inst"))), PreconditionError);
}

TEST_CASE("sources are exactly the undefined variables") {
  for (const char* name : {"single.inst", "index_coding.inst", "cascade.inst", "nested.inst", "cycle3.inst"}) {
    CAPTURE(name);
    const auto n = pipeline(corpus::system(name)).first;
    const auto g = dependency_graph(n);
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
      bool defined = false;
      for (const auto& eq : n.equations) defined = defined || eq.defined == g.vertices()[v];
      CHECK(g.is_source(v) == !defined);
    }
  }
}

TEST_CASE("source loops") {
  const DependencyGraph lone({"x"}, {}, {"x"});
  const auto looped = add_source_loops(lone);
  CHECK(looped.edges() == Edges{{0, 0}});
  CHECK(looped.source_count() == 0);

  const auto cycle = corpus::graph("cycle3.graph");
  CHECK(add_source_loops(cycle) == cycle);

  const auto g = graph_of("instance { vars x, y, z; sig f/2; eq f(x, y) = z; }");
  const auto gl = add_source_loops(g);
  CHECK(gl.edges() == Edges{{0, 0}, {0, 2}, {1, 1}, {1, 2}});
  CHECK(naive::max_winning(g, 2) == naive::max_winning(gl, 2));
}

TEST_CASE("winning configurations of a fixed strategy") {
  const auto g = corpus::graph("cycle3.graph");
  // Each vertex copies its in-neighbour.
  GuessingStrategy copy{2, {{0, 1}, {0, 1}, {0, 1}}};
  std::vector<Value> same{1, 1, 1}, mixed{1, 0, 1};
  CHECK(is_winning(g, copy, same));
  CHECK_FALSE(is_winning(g, copy, mixed));
}

TEST_CASE("dot output") {
  const auto g = corpus::graph("clique2.graph");
  CHECK(to_dot(g) == "digraph \"G\" {\n  \"a\";\n  \"b\";\n  \"a\" -> \"b\";\n  \"b\" -> \"a\";\n}\n");
  CHECK(to_dot(DependencyGraph({}, {}, {}), "E") == "digraph \"E\" {\n}\n");
  CHECK(to_dot(corpus::graph("lone_source.graph")).find("[shape=doublecircle]") != std::string::npos);
}

TEST_CASE("graph construction validates names") {
  CHECK_THROWS_AS(DependencyGraph({"a"}, {{"a", "b"}}, {}), WellFormednessError);
  CHECK_THROWS_AS(DependencyGraph({"a", "a"}, {}, {}), WellFormednessError);
  CHECK_THROWS_AS(DependencyGraph({"a"}, {}, {"b"}), WellFormednessError);
}
