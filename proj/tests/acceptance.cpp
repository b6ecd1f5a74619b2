// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs offline from the corpus directory.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "support/corpus.hpp"
#include "support/naive.hpp"
#include "termflow/cli.hpp"
#include "termflow/error.hpp"
#include "termflow/flownet.hpp"
#include "termflow/normalize.hpp"
#include "termflow/oracle.hpp"
#include "termflow/report.hpp"

using namespace termflow;

namespace {

// Pinned limits.
constexpr double kExponentMs = 100.0;
constexpr double kPerfectN2Ms = 1000.0;
constexpr double kPerfectN3Ms = 30000.0;
constexpr double kEmbeddingMs = 300000.0;
constexpr double kThresholdMs = 100.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> corpus_files(const std::string& extension) {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(TERMFLOW_CORPUS_DIR))
    if (entry.path().extension() == extension) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

Json cli_result(const std::vector<std::string>& args) {
  const auto o = run_cli(args);
  if (o.exit_code != 0) throw std::runtime_error("termflow exited with " + std::to_string(o.exit_code) + ": " + o.err);
  return Json::parse(o.out).at("result");
}

Verdict diamond_exponent() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = cli_result({"exponent", corpus::path("diamond.disp"), "--certificate"});
  const double ms = elapsed_ms(start);
  const auto& cut = r.at("certificate").at("cut");
  const bool ok = r.at("exponent") == 4 && cut.size() == 4 && r.at("certificate").at("cut_capacity") == 4 &&
                  ms < kExponentMs;
  std::ostringstream s;
  s << "D=" << r.at("exponent") << ", certificate of " << cut.size() << " edges, " << ms << " ms (limit "
    << kExponentMs << " ms)";
  return {ok, s.str()};
}

Verdict diamond_imperfection() {
  const auto diamond = corpus::dispersion("diamond.disp");
  auto start = std::chrono::steady_clock::now();
  const auto p2 = check_perfect_fixed(diamond, 2);
  const double ms2 = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  const auto p3 = check_perfect_fixed(diamond, 3);
  const double ms3 = elapsed_ms(start);
  const bool ok = !p2.perfect && !p3.perfect && p2.examined == 16 && p3.examined == 19683 && ms2 < kPerfectN2Ms &&
                  ms3 < kPerfectN3Ms;
  std::ostringstream s;
  s << "n=2: " << (p2.perfect ? "perfect" : "not perfect") << " after " << p2.examined << " tables in " << ms2
    << " ms; n=3: " << (p3.perfect ? "perfect" : "not perfect") << " after " << p3.examined << " tables in " << ms3
    << " ms";
  return {ok, s.str()};
}

Verdict cut_upper_bound() {
  std::size_t checked = 0, refused = 0, violations = 0;
  std::string worst;
  for (const auto& name : corpus_files(".disp")) {
    const auto spec = corpus::dispersion(name);
    const auto d = dispersion_exponent(spec).exponent;
    for (Value n : {2u, 3u}) {
      try {
        const auto disp = brute_dispersion(spec, n).value;
        ++checked;
        if (disp > naive::power(n, static_cast<std::uint64_t>(d))) {
          ++violations;
          worst = name + " at n=" + std::to_string(n);
        }
      } catch (const BudgetExceeded&) {
        ++refused;
      }
    }
  }
  std::ostringstream s;
  s << checked << " (spec, n) pairs checked, " << refused << " over budget, " << violations << " violations";
  if (violations) s << " (e.g. " << worst << ")";
  return {violations == 0 && checked > 0, s.str()};
}

Verdict embedding_equality() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream s;
  bool ok = true;
  for (const char* name : {"identity.disp", "unary.disp", "diamond.disp"}) {
    const auto r = check_embedding(corpus::dispersion(name), 2);
    ok = ok && r.equal;
    s << name << ": " << r.dispersion.value << " vs " << r.code_size.value << " (" << r.mode << "); ";
  }
  const double ms = elapsed_ms(start);
  ok = ok && ms < kEmbeddingMs;
  s << ms << " ms total";
  return {ok, s.str()};
}

// Exhaustive at n = 2 whenever the signature fits the budget. Otherwise the
// normal form must be a reorientation of the input equations (so counts agree
// for every interpretation) and a seeded sample is counted as well.
Verdict pipeline_preservation() {
  std::size_t exhaustive = 0, structural = 0, interpretations = 0, mismatches = 0;
  std::string note;
  for (const auto& name : corpus_files(".inst")) {
    TermSystem sys;
    try {
      sys = corpus::system(name);
    } catch (const ParseError&) {
      continue;  // the deliberately malformed file
    }
    const auto normal = pipeline(sys).first;
    const auto after = to_term_system(normal);
    SolutionCounter before_count(sys, 2), after_count(after, 2);
    const SearchBudget budget;
    if (interpretation_count(sys.signature(), 2) <= budget.max_interpretations) {
      InterpretationEnumerator e(sys.signature(), 2, budget);
      while (auto i = e.next()) {
        ++interpretations;
        if (before_count.count(*i) != after_count.count(*i)) ++mismatches;
      }
      ++exhaustive;
      continue;
    }
    bool reoriented = normal.var_equalities.empty() && after.equations().size() == sys.equations().size() &&
                      after.variables() == sys.variables();
    for (std::size_t i = 0; reoriented && i < sys.equations().size(); ++i) {
      const auto& a = sys.equations()[i];
      const auto& b = after.equations()[i];
      reoriented = (a.lhs == b.lhs && a.rhs == b.rhs) || (a.lhs == b.rhs && a.rhs == b.lhs);
    }
    if (!reoriented) ++mismatches;
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 4096; ++k) {
      std::vector<std::vector<Value>> tables;
      for (const auto& s : sys.signature().symbols()) {
        std::vector<Value> t(naive::power(2, s.arity));
        for (auto& v : t) v = static_cast<Value>(rng() & 1);
        tables.push_back(std::move(t));
      }
      const Interpretation interp(sys.signature(), 2, tables);
      ++interpretations;
      if (before_count.count(interp) != after_count.count(interp)) ++mismatches;
    }
    ++structural;
    note += " " + name;
  }
  std::ostringstream s;
  s << exhaustive << " systems exhaustively, " << structural << " by reorientation plus 4096 samples ("
    << (note.empty() ? " none" : note) << " ); " << interpretations << " interpretations, " << mismatches
    << " mismatches";
  return {mismatches == 0 && exhaustive > 0, s.str()};
}

Verdict guessing_equality() {
  std::size_t equal = 0, unequal = 0, refused = 0, not_fnf = 0;
  std::string skipped;
  for (const auto& name : corpus_files(".inst")) {
    TermSystem sys;
    try {
      sys = corpus::system(name);
    } catch (const ParseError&) {
      continue;
    }
    const auto normal = pipeline(sys).first;
    if (!classify(normal).is_fnf) {
      ++not_fnf;
      continue;
    }
    try {
      const auto r = check_solutions_equal_winning(diversify(normal), 2);
      (r.equal ? equal : unequal)++;
    } catch (const BudgetExceeded&) {
      ++refused;
      skipped += " " + name;
    }
  }
  std::ostringstream s;
  s << equal << " FNF systems equal, " << unequal << " unequal, " << refused << " over budget"
    << (skipped.empty() ? "" : " (" + skipped.substr(1) + ")") << ", " << not_fnf << " not FNF";
  return {unequal == 0 && equal > 0, s.str()};
}

Verdict sandwich() {
  std::size_t systems = 0, failures = 0;
  std::ostringstream s;
  for (const auto& name : corpus_files(".inst")) {
    TermSystem sys;
    try {
      sys = corpus::system(name);
    } catch (const ParseError&) {
      continue;
    }
    const auto normal = pipeline(sys).first;
    if (!classify(normal).is_cfnf || normal.variables.size() != 2) continue;
    ++systems;
    const auto original = to_term_system(normal);
    const auto div = to_term_system(diversify(normal));
    bool ok = true;
    for (Value n : {2u, 3u})
      ok = ok && brute_max_solutions(original, n).value <= brute_max_solutions(div, n).value;
    const auto r = sandwich_check(normal, 4);
    // Recount the lifted witness with the naive evaluator.
    naive::Tables tables;
    for (std::size_t i = 0; i < r.lifted.signature().size(); ++i)
      tables[r.lifted.signature().symbols()[i].name] = r.lifted.tables()[i];
    const auto recount = naive::solutions(original, tables, 4);
    ok = ok && r.upper_holds && r.lower_holds && recount == r.lifted_count && r.s_n >= recount &&
         recount >= r.s_m_div;
    if (!ok) ++failures;
    s << name << ": S_4=" << r.s_n << " >= lifted " << recount << " >= S_2(div)=" << r.s_m_div << "; ";
  }
  s << systems << " systems, " << failures << " failures";
  return {failures == 0 && systems > 0, s.str()};
}

Verdict thresholds() {
  const auto start = std::chrono::steady_clock::now();
  const auto a = cli_result({"threshold", corpus::path("diamond.disp"), "-d", "3"}).at("answer");
  const auto b = cli_result({"threshold", corpus::path("diamond.disp"), "-d", "4"}).at("answer");
  const auto c = cli_result({"threshold", corpus::path("fx_gx.disp"), "-d", "1"}).at("answer");
  const double ms = elapsed_ms(start);
  std::ostringstream s;
  s << "diamond d=3: " << a.get<std::string>() << ", diamond d=4: " << b.get<std::string>()
    << ", (f(x),g(x)) d=1: " << c.get<std::string>() << "; " << ms << " ms";
  return {a == "yes" && b == "no" && c == "no" && ms < kThresholdMs, s.str()};
}

Verdict single_output() {
  std::size_t agree = 0, disagree = 0;
  for (const auto& name : corpus_files(".disp")) {
    const auto spec = corpus::dispersion(name);
    if (spec.output_count() != 1) continue;
    (decide_perfect_r1(spec) == check_perfect_fixed(spec, 2).perfect ? agree : disagree)++;
  }
  std::ostringstream s;
  s << agree << " single-output specs agree, " << disagree << " disagree";
  return {disagree == 0 && agree > 0, s.str()};
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"exponent", corpus::path("diamond.disp"), "--certificate"},
      {"normalize", corpus::path("cascade.inst"), "--diversify"},
      {"graph", corpus::path("diamond_embedding.inst")},
      {"threshold", corpus::path("diamond.disp"), "-d", "3"},
      {"brute", "disp", corpus::path("diamond.disp"), "-n", "3"},
      {"brute", "solve", corpus::path("index_coding.inst"), "-n", "2"},
      {"brute", "guess", corpus::path("cycle3.inst"), "-n", "2"},
      {"brute", "guess", corpus::path("cycle3.graph"), "-n", "2"},
      {"brute", "perfect", corpus::path("diamond.disp"), "-n", "3"},
      {"brute", "embed", corpus::path("diamond.disp"), "-n", "2"},
      {"brute", "sandwich", corpus::path("swap.inst"), "-n", "4"},
  };
  std::size_t identical = 0, differing = 0;
  for (const auto& args : commands) {
    const auto first = run_cli(args).out;
    auto jobs1 = args, jobs8 = args;
    if (args[0] == "brute") {
      jobs1.insert(jobs1.end(), {"--jobs", "1"});
      jobs8.insert(jobs8.end(), {"--jobs", "8"});
    }
    const bool same = run_cli(args).out == first && run_cli(jobs1).out == first && run_cli(jobs8).out == first;
    (same ? identical : differing)++;
  }
  std::ostringstream s;
  s << identical << " commands byte-identical over repeats and --jobs 1/8, " << differing << " differ";
  return {differing == 0, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"diamond exponent", diamond_exponent},
      {"diamond imperfection", diamond_imperfection},
      {"cut upper bound", cut_upper_bound},
      {"embedding equality", embedding_equality},
      {"pipeline preservation", pipeline_preservation},
      {"guessing equality", guessing_equality},
      {"sandwich bounds", sandwich},
      {"threshold decisions", thresholds},
      {"single-output decision", single_output},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
