#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/corpus.hpp"
#include "support/naive.hpp"
#include "termflow/dsl.hpp"
#include "termflow/error.hpp"
#include "termflow/normalize.hpp"

using namespace termflow;

namespace {

NormalEquation ne(std::string f, std::vector<std::string> args, std::string v) {
  return {std::move(f), std::move(args), std::move(v)};
}

using Pairs = std::vector<std::pair<std::string, std::string>>;

// Every interpretation at n gives the same solution count before and after.
void check_counts_preserved(const TermSystem& before, const TermSystem& after, Value n) {
  naive::for_each_tables(before.signature(), n, [&](const naive::Tables& t) {
    REQUIRE(naive::solutions(before, t, n) == naive::solutions(after, t, n));
  });
}

}  // namespace

TEST_CASE("flatten: nested application") {
  const auto n = flatten(parse_system("instance { vars x, y; sig f/1, g/1; eq f(g(x)) = y; }"));
  CHECK(n.equations == std::vector{ne("g", {"x"}, "_z0"), ne("f", {"_z0"}, "_z1")});
  CHECK(n.var_equalities == Pairs{{"_z1", "y"}});
  CHECK(n.variables == std::vector<std::string>{"x", "y", "_z0", "_z1"});
  CHECK(render(n.origin.at("_z0")) == "g(x)");
  CHECK(render(n.origin.at("_z1")) == "f(g(x))");
}

TEST_CASE("flatten: already flat stays put") {
  const auto sys = corpus::system("single.inst");
  const auto n = flatten(sys);
  CHECK(n.equations == std::vector{ne("f", {"x"}, "y")});
  CHECK(n.var_equalities.empty());
  CHECK(n.variables == sys.variables());
  // Reversed orientation v = f(x) is also already flat.
  const auto r = flatten(parse_system("instance { vars x, y; sig f/1; eq y = f(x); }"));
  CHECK(r.equations == std::vector{ne("f", {"x"}, "y")});
}

TEST_CASE("flatten: two applications tied by an equality") {
  const auto sys = corpus::system("fxgy.inst");
  const auto n = flatten(sys);
  CHECK(n.equations == std::vector{ne("f", {"x"}, "_z0"), ne("g", {"y"}, "_z1")});
  CHECK(n.var_equalities == Pairs{{"_z0", "_z1"}});
  check_counts_preserved(sys, to_term_system(n), 2);
}

TEST_CASE("flatten: shared subterms get one auxiliary") {
  const auto n = flatten(parse_system(
      "instance { vars x, y, z; sig f/2, g/1; eq f(g(x), g(x)) = y; eq g(x) = z; }"));
  CHECK(n.equations ==
        std::vector{ne("g", {"x"}, "_z0"), ne("f", {"_z0", "_z0"}, "_z1"), ne("g", {"x"}, "z")});
  CHECK(n.var_equalities == Pairs{{"_z1", "y"}});
}

TEST_CASE("flatten: variable equations become equalities") {
  const auto n = flatten(parse_system("instance { vars x, y; sig ; eq x = y; }"));
  CHECK(n.equations.empty());
  CHECK(n.var_equalities == Pairs{{"x", "y"}});
}

TEST_CASE("quotient_vars: substitution and representatives") {
  NormalSystem n;
  n.variables = {"x", "y", "z"};
  n.signature = Signature({{"f", 1}});
  n.equations = {ne("f", {"y"}, "z")};
  n.var_equalities = {{"y", "x"}};
  std::vector<VariableMerge> merges;
  const auto q = quotient_vars(n, &merges);
  CHECK(q.variables == std::vector<std::string>{"x", "z"});
  CHECK(q.equations == std::vector{ne("f", {"x"}, "z")});
  CHECK(q.var_equalities.empty());
  CHECK(merges == std::vector<VariableMerge>{{"quotient_vars", "y", "x"}});

  NormalSystem chain;
  chain.variables = {"c", "b", "a"};
  chain.var_equalities = {{"c", "b"}, {"b", "a"}};
  CHECK(quotient_vars(chain).variables == std::vector<std::string>{"a"});
}

TEST_CASE("quotient_vars: originals beat auxiliaries") {
  CHECK(UnionFind::precedes("y", "_z0"));
  CHECK(UnionFind::precedes("a", "b"));
  CHECK_FALSE(UnionFind::precedes("_z0", "x"));
  const auto sys = parse_system("instance { vars x, y; sig f/1, g/1; eq f(g(x)) = y; }");
  const auto q = quotient_vars(flatten(sys));
  CHECK(q.equations == std::vector{ne("g", {"x"}, "_z0"), ne("f", {"_z0"}, "y")});
  check_counts_preserved(sys, to_term_system(q), 2);
  check_counts_preserved(sys, to_term_system(q), 3);
}

TEST_CASE("collision_quotient: merges right-hand sides") {
  const auto sys = corpus::system("collision.inst");
  std::vector<VariableMerge> merges;
  const auto c = collision_quotient(quotient_vars(flatten(sys)), &merges);
  CHECK(c.equations == std::vector{ne("f", {"x"}, "v")});
  CHECK(merges == std::vector<VariableMerge>{{"collision_quotient", "w", "v"}});
  check_counts_preserved(sys, to_term_system(c), 2);

  const auto apart = parse_system("instance { vars x, y, v, w; sig f/1; eq f(x) = v; eq f(y) = w; }");
  std::vector<VariableMerge> none;
  CHECK(collision_quotient(flatten(apart), &none).equations.size() == 2);
  CHECK(none.empty());
}

TEST_CASE("collision_quotient: cascade reaches the joint fixpoint") {
  const auto sys = corpus::system("cascade.inst");
  std::vector<VariableMerge> merges;
  std::size_t rounds = 0;
  const auto c = collision_quotient(flatten(sys), &merges, &rounds);
  CHECK(c.equations == std::vector{ne("f", {"x"}, "u"), ne("g", {"u"}, "a")});
  CHECK(merges == std::vector<VariableMerge>{{"collision_quotient", "v", "u"},
                                             {"collision_quotient", "b", "a"}});
  CHECK(rounds >= 2);
  CHECK(classify(c).is_collision_free);
  check_counts_preserved(sys, to_term_system(c), 2);
}

TEST_CASE("classify") {
  auto c = classify(flatten(corpus::system("single.inst")));
  CHECK(c.sources == std::vector<std::string>{"x"});
  CHECK(c.defined == std::vector<std::string>{"y"});
  CHECK(c.is_normal);
  CHECK(c.is_fnf);
  CHECK(c.is_cfnf);

  c = classify(flatten(parse_system("instance { vars x, y, z; sig f/1, g/1; eq f(x) = y; eq g(z) = y; }")));
  CHECK_FALSE(c.is_fnf);
  CHECK_FALSE(c.is_cfnf);

  // Pending equalities are not a normal form yet.
  CHECK_FALSE(classify(flatten(corpus::system("nested.inst"))).is_normal);
}

TEST_CASE("pipeline on the corpus") {
  auto [emb, report] = pipeline(corpus::system("diamond_embedding.inst"));
  CHECK(report.classification.is_cfnf);
  CHECK(report.merges.empty());
  CHECK(report.auxiliaries.empty());
  CHECK(report.stages ==
        std::vector<std::string>{"flatten", "quotient_vars", "collision_quotient", "classify"});

  auto [ic, icr] = pipeline(corpus::system("index_coding.inst"));
  CHECK(icr.classification.is_fnf);
  CHECK(icr.classification.sources.empty());

  auto [col, colr] = pipeline(corpus::system("collision.inst"));
  CHECK(colr.merges.size() == 1);

  auto [nested, nr] = pipeline(corpus::system("nested.inst"));
  CHECK(nr.auxiliaries == std::vector<std::string>{"_z0", "_z1"});
  CHECK(nested.variables == std::vector<std::string>{"x", "y", "_z0"});
}

TEST_CASE("pipeline is idempotent") {
  for (const char* name : {"diamond_embedding.inst", "index_coding.inst", "cascade.inst", "nested.inst",
                           "fxgy.inst", "collision.inst", "swap.inst"}) {
    CAPTURE(name);
    const auto once = pipeline(corpus::system(name)).first;
    const auto [twice, report] = pipeline(to_term_system(once));
    CHECK(report.merges.empty());
    CHECK(report.auxiliaries.empty());
    CHECK(twice.equations == once.equations);
    CHECK(twice.variables == once.variables);
  }
}

TEST_CASE("diversify") {
  const auto n = flatten(parse_system("instance { vars x, y, z; sig f/1; eq f(x) = y; eq f(y) = z; }"));
  const auto d = diversify(n);
  CHECK(d.equations == std::vector{ne("f@0", {"x"}, "y"), ne("f@1", {"y"}, "z")});
  CHECK(d.variables == n.variables);
  CHECK(d.signature == Signature({{"f@0", 1}, {"f@1", 1}}));

  const auto single = diversify(flatten(corpus::system("single.inst")));
  CHECK(single.equations == std::vector{ne("f@0", {"x"}, "y")});

  const auto emb = diversify(pipeline(corpus::system("diamond_embedding.inst")).first);
  std::size_t f_copies = 0, h_copies = 0;
  for (const auto& s : emb.signature.symbols()) {
    f_copies += s.name.rfind("f@", 0) == 0;
    h_copies += s.name[0] == 'h';
  }
  CHECK(f_copies == 4);
  CHECK(h_copies == 4);
  CHECK(emb.signature.size() == 8);
}

TEST_CASE("embed_dispersion") {
  const auto unary = embed_dispersion(corpus::dispersion("unary.disp"));
  CHECK(render(unary) == render(parse_system(
                             "instance { vars x, y1; sig f/1, h1/1; eq y1 = f(x); eq x = h1(y1); }")));

  const auto id = embed_dispersion(corpus::dispersion("identity.disp"));
  REQUIRE(id.equations().size() == 2);
  CHECK(render(id.equations()[0]) == "y1 = x");
  CHECK(naive::max_solutions(id, 3) == 3);

  EmbeddingNames names;
  const auto diamond = embed_dispersion(corpus::dispersion("diamond.disp"), &names);
  CHECK(diamond.equations().size() == 8);
  CHECK(names.outputs == std::vector<std::string>{"y1", "y2", "y3", "y4"});
  CHECK(names.decoders == std::vector<std::string>{"h1", "h2", "h3", "h4"});
  // Same system as the hand-written corpus file.
  CHECK(render(diamond) == render(corpus::system("diamond_embedding.inst")));

  // Generated names avoid the spec's own identifiers.
  const auto clash = embed_dispersion(parse_dispersion("dispersion { inputs y1; sig h1/1; outputs h1(y1); }"));
  CHECK(clash.variables() == std::vector<std::string>{"y1", "yy1"});
  CHECK(clash.signature().symbols().back().name == "hh1");
}

TEST_CASE("pad_dispersion") {
  const auto p = parse_dispersion("dispersion { inputs x, y; sig p/2; outputs p(x, y); }");
  const auto padded = pad_dispersion(p, 2, 2);
  CHECK(render(padded) == render(parse_dispersion(
                              "dispersion { inputs x, y, x2; sig p/2; outputs p(x, y), x2; }")));
  CHECK(pad_dispersion(p, 1, 2) == p);

  const auto d5 = pad_dispersion(corpus::dispersion("diamond.disp"), 5, 5);
  CHECK(d5 == corpus::dispersion("padded_diamond.disp"));

  CHECK_THROWS_AS(pad_dispersion(p, 0, 2), PreconditionError);
  CHECK_THROWS_AS(pad_dispersion(p, 3, 2), PreconditionError);

  const auto wide = pad_dispersion(parse_dispersion("dispersion { inputs x; sig ; outputs x; }"), 1, 3);
  CHECK(wide.inputs() == std::vector<std::string>{"x", "x2", "x3"});
}

TEST_CASE("diversification never lowers the optimum on corpus systems") {
  for (const char* name : {"single.inst", "swap.inst", "cycle3.inst", "collision.inst", "cascade.inst",
                           "nested.inst", "fixpoint.inst"}) {
    CAPTURE(name);
    const auto n = pipeline(corpus::system(name)).first;
    CHECK(naive::max_solutions(to_term_system(n), 2) <=
          naive::max_solutions(to_term_system(diversify(n)), 2));
  }
}
