#include "termflow/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "termflow/dsl.hpp"
#include "termflow/error.hpp"
#include "termflow/report.hpp"

namespace termflow {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

template <class T>
const T& expect(const Parsed& parsed, const char* what) {
  if (auto* p = std::get_if<T>(&parsed)) return *p;
  throw PreconditionError(std::string("this command needs ") + what + " file, got " +
                          kind_name(kind_of(parsed)));
}

// An instance file directly; a dispersion file through its embedding.
TermSystem as_system(const Parsed& parsed) {
  if (auto* d = std::get_if<DispersionSpec>(&parsed)) return embed_dispersion(*d);
  return expect<TermSystem>(parsed, "an instance or dispersion");
}

// A graph file directly; an instance through its normal form.
DependencyGraph as_graph(const Parsed& parsed) {
  if (auto* g = std::get_if<DependencyGraph>(&parsed)) return *g;
  return dependency_graph(pipeline(as_system(parsed)).first);
}

struct Options {
  std::string command;
  std::string file;
  bool timing = false;

  bool fnf_check = false;
  bool diversify = false;
  std::string dot;

  bool certificate = false;

  std::string brute;
  Value n = 2;
  unsigned jobs = 1;
  std::uint64_t budget = 0;

  std::size_t d = 0;

  bool source_loops = false;
};

Json run_normalize(const Options& o, const Parsed& parsed, Json& params) {
  params["fnf_check"] = o.fnf_check;
  params["diversify"] = o.diversify;
  const auto system = as_system(parsed);
  auto [normal, report] = pipeline(system);
  if (o.fnf_check && !report.classification.is_fnf)
    throw PreconditionError("normal form is not functional (FNF)");
  Json result = {{"pipeline", to_json(report)}, {"normal_form", to_json(normal)}};
  if (o.diversify) result["diversified"] = to_json(diversify(normal));
  if (!o.dot.empty()) write_file(o.dot, to_dot(dependency_graph(normal)));
  return result;
}

Json run_exponent(const Options& o, const Parsed& parsed, Json& params) {
  params["certificate"] = o.certificate;
  const auto& spec = expect<DispersionSpec>(parsed, "a dispersion");
  const auto network = build_network(build_dag(spec));
  const auto result = max_flow(network);
  if (!o.dot.empty()) write_file(o.dot, to_dot(network, &result));
  Json out = to_json(result, network, o.certificate);
  out["inputs"] = spec.input_count();
  out["outputs"] = spec.output_count();
  return out;
}

Json run_threshold(const Options& o, const Parsed& parsed, Json& params) {
  params["d"] = o.d;
  const auto decision = decide_threshold(expect<DispersionSpec>(parsed, "a dispersion"), o.d);
  return {{"answer", decision.yes ? "yes" : "no"},
          {"yes", decision.yes},
          {"d", decision.d},
          {"exponent", decision.certificate.exponent},
          {"criterion", "D >= d + 1"}};
}

Json run_graph(const Options& o, const Parsed& parsed, Json& params) {
  params["source_loops"] = o.source_loops;
  auto g = as_graph(parsed);
  if (o.source_loops) g = add_source_loops(g);
  if (!o.dot.empty()) write_file(o.dot, to_dot(g));
  return to_json(g);
}

Json run_brute(const Options& o, const Parsed& parsed, Json& params) {
  SearchOptions search;
  search.budget = SearchBudget::from_environment();
  if (o.budget) search.budget.max_interpretations = o.budget;
  search.jobs = o.jobs;
  params["subcommand"] = o.brute;
  params["n"] = o.n;
  params["budget"] = {{"max_interpretations", search.budget.max_interpretations},
                      {"max_evaluations", search.budget.max_evaluations}};
  if (o.n < 1) throw PreconditionError("-n must be at least 1");

  if (o.brute == "disp")
    return to_json(brute_dispersion(expect<DispersionSpec>(parsed, "a dispersion"), o.n, search));
  if (o.brute == "perfect") {
    const auto& spec = expect<DispersionSpec>(parsed, "a dispersion");
    Json out = to_json(check_perfect_fixed(spec, o.n, search));
    if (spec.output_count() == 1) out["syntactic"] = decide_perfect_r1(spec);
    return out;
  }
  if (o.brute == "embed")
    return to_json(check_embedding(expect<DispersionSpec>(parsed, "a dispersion"), o.n, search));
  if (o.brute == "solve") return to_json(brute_max_solutions(as_system(parsed), o.n, search));
  if (o.brute == "guess") {
    if (std::holds_alternative<DependencyGraph>(parsed)) {
      const auto& g = std::get<DependencyGraph>(parsed);
      return to_json(brute_guessing(g, o.n, search), g);
    }
    // For an instance, compare with the diversified code size.
    const auto normal = diversify(pipeline(as_system(parsed)).first);
    const auto g = dependency_graph(normal);
    const auto report = check_solutions_equal_winning(normal, o.n, search);
    Json out = to_json(report.winning, g);
    out["graph"] = to_json(g);
    out["diversified_solutions"] = to_json(report.solutions);
    out["equal"] = report.equal;
    return out;
  }
  if (o.brute == "sandwich")
    return to_json(sandwich_check(pipeline(as_system(parsed)).first, o.n, search));
  throw PreconditionError("unknown brute subcommand '" + o.brute + "'");
}

Json error_report(const Options& o, const std::string& kind, const std::string& message, int code) {
  return {{"command", o.command},
          {"error", {{"kind", kind}, {"message", message}}},
          {"exit_code", code},
          {"tool_version", kToolVersion}};
}

}  // namespace

CliOutcome run_cli(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Term-coding, dispersion and guessing-game analysis", "termflow"};
  app.require_subcommand(1);
  app.add_flag("--timing", o.timing, "Add wall-clock timing to the report");

  auto* normalize = app.add_subcommand("normalize", "Normalize an instance");
  normalize->add_option("file", o.file, "Instance or dispersion file")->required();
  normalize->add_flag("--fnf-check", o.fnf_check, "Fail with exit 3 unless the result is FNF");
  normalize->add_flag("--diversify", o.diversify, "Also emit the diversified system");
  normalize->add_option("--dot", o.dot, "Write the dependency graph as DOT");

  auto* exponent = app.add_subcommand("exponent", "Dispersion exponent by max flow");
  exponent->add_option("file", o.file, "Dispersion file")->required();
  exponent->add_flag("--certificate", o.certificate, "Include the minimum-cut certificate");
  exponent->add_option("--dot", o.dot, "Write the flow network as DOT");

  auto* brute = app.add_subcommand("brute", "Exhaustive search at a fixed alphabet size");
  brute->add_option("mode", o.brute, "disp|solve|guess|perfect|embed|sandwich")
      ->required()
      ->check(CLI::IsMember({"disp", "solve", "guess", "perfect", "embed", "sandwich"}));
  brute->add_option("file", o.file, "Input file")->required();
  brute->add_option("-n", o.n, "Alphabet size")->required();
  brute->add_option("--budget", o.budget, "Maximum number of interpretations")
      ->check(CLI::PositiveNumber);
  brute->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* threshold = app.add_subcommand("threshold", "Asymptotic threshold decision");
  threshold->add_option("file", o.file, "Dispersion file")->required();
  threshold->add_option("-d", o.d, "Threshold degree")->required();

  auto* graph = app.add_subcommand("graph", "Dependency graph of an instance");
  graph->add_option("file", o.file, "Instance or graph file")->required();
  graph->add_option("--dot", o.dot, "Write the graph as DOT");
  graph->add_flag("--source-loops", o.source_loops, "Add a self-loop at every source");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CliOutcome outcome;
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      std::ostringstream out, err;
      const int code = app.exit(e, out, err);
      outcome.out = out.str();
      outcome.err = err.str();
      outcome.exit_code = code == 0 ? kExitOk : kExitParse;
      return outcome;
    }
  }
  for (auto* sub : app.get_subcommands())
    o.command = sub->get_name();

  using Runner = std::function<Json(const Options&, const Parsed&, Json&)>;
  const std::map<std::string, Runner> runners = {{"normalize", run_normalize},
                                                 {"exponent", run_exponent},
                                                 {"brute", run_brute},
                                                 {"threshold", run_threshold},
                                                 {"graph", run_graph}};

  auto fail = [&](const std::string& kind, const std::string& message, int code) {
    outcome.exit_code = code;
    outcome.err = "termflow: " + message + "\n";
    outcome.out = serialize(error_report(o, kind, message, code));
    return outcome;
  };

  try {
    const auto start = std::chrono::steady_clock::now();
    const std::string text = read_file(o.file);
    const Parsed parsed = parse(text);
    Json params = Json::object();
    Json result = runners.at(o.command)(o, parsed, params);
    Json report = make_report(o.command, text, std::move(params), std::move(result));
    if (o.timing) {
      const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
      report["timing_ms"] = took.count();
    }
    outcome.out = serialize(report);
    return outcome;
  } catch (const ParseError& e) {
    return fail("parse", e.what(), kExitParse);
  } catch (const BudgetExceeded& e) {
    return fail("budget", e.what(), kExitBudget);
  } catch (const PreconditionError& e) {
    return fail("precondition", e.what(), kExitPrecondition);
  } catch (const WellFormednessError& e) {
    return fail("precondition", e.what(), kExitPrecondition);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitInternal);
  }
}

}  // namespace termflow
