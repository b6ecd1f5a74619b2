#pragma once

// Exhaustive small-alphabet ground truth. Every search enumerates the
// canonical table encoding of an interpretation (all tables concatenated in
// signature order, each row-major) as one mixed-radix number, in increasing
// order. Work splits into contiguous index ranges; merging keeps the maximum
// value and, among ties, the least index, so results do not depend on the
// number of jobs.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "termflow/depgraph.hpp"
#include "termflow/normalize.hpp"
#include "termflow/term.hpp"

namespace termflow {

struct SearchBudget {
  std::uint64_t max_evaluations = std::uint64_t{1} << 26;
  std::uint64_t max_interpretations = std::uint64_t{1} << 24;

  // Defaults, with TERMFLOW_BUDGET (if set) overriding max_interpretations.
  static SearchBudget from_environment();
};

struct SearchOptions {
  SearchBudget budget;
  unsigned jobs = 1;
};

// Π_f n^{n^{arity(f)}}, saturating.
std::uint64_t interpretation_count(const Signature& sig, Value n);

// Throws BudgetExceeded when `interpretations` or `interpretations * per_item`
// exceeds the budget.
void check_budget(const SearchBudget& budget, std::uint64_t interpretations,
                  std::uint64_t per_item, const std::string& what);

// The interpretation with canonical index `index`.
Interpretation interpretation_at(const Signature& sig, Value n, std::uint64_t index);
std::uint64_t interpretation_index(const Interpretation& interp);

// Lexicographic stream over all interpretations of `sig` on [n].
class InterpretationEnumerator {
 public:
  // Throws BudgetExceeded if the space is larger than max_interpretations.
  InterpretationEnumerator(Signature sig, Value n, const SearchBudget& budget = {});

  std::uint64_t size() const noexcept { return count_; }
  std::optional<Interpretation> next();

 private:
  Signature sig_;
  Value n_;
  std::uint64_t count_;
  std::uint64_t index_ = 0;
  std::vector<Value> digits_;
};

struct OracleResult {
  std::uint64_t value = 0;
  Interpretation witness;
  std::uint64_t witness_index = 0;
  // log(value) / log(n); absent for n < 2.
  std::optional<double> rate;
  std::uint64_t interpretations = 0;
  std::uint64_t evaluations = 0;
};

std::optional<double> normalized_rate(std::uint64_t value, Value n);

// |Sol_I(system; n)| by direct recursive evaluation (reference path).
std::uint64_t count_solutions(const TermSystem& system, const Interpretation& interp);
// |Im Θ^I| by direct recursive evaluation (reference path).
std::uint64_t image_size(const DispersionSpec& spec, const Interpretation& interp);

// Compiled solution counter for a fixed system and alphabet; reused across
// interpretations of the system's own signature.
class SolutionCounter {
 public:
  SolutionCounter(const TermSystem& system, Value n);
  ~SolutionCounter();
  SolutionCounter(SolutionCounter&&) noexcept;
  SolutionCounter& operator=(SolutionCounter&&) noexcept;

  // `tables` is the concatenated canonical encoding.
  std::uint64_t count(std::span<const Value> tables);
  std::uint64_t count(const Interpretation& interp);
  std::uint64_t assignments() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

OracleResult brute_max_solutions(const TermSystem& system, Value n, const SearchOptions& options = {});
OracleResult brute_dispersion(const DispersionSpec& spec, Value n, const SearchOptions& options = {});

struct PerfectResult {
  bool perfect = false;
  // Least surjective interpretation, when one exists.
  std::optional<Interpretation> witness;
  // Interpretations examined (the whole space when refuted).
  std::uint64_t examined = 0;
  std::uint64_t space = 0;
};

PerfectResult check_perfect_fixed(const DispersionSpec& spec, Value n,
                                  const SearchOptions& options = {});

struct GuessingResult {
  std::uint64_t value = 0;
  GuessingStrategy strategy;
  std::uint64_t strategy_index = 0;
  std::optional<double> rate;
  std::uint64_t strategies = 0;
  std::uint64_t evaluations = 0;
};

// Π_{v non-source} n^{n^{indeg(v)}}, saturating.
std::uint64_t strategy_count(const DependencyGraph& g, Value n);
GuessingStrategy strategy_at(const DependencyGraph& g, Value n, std::uint64_t index);
// Winning configurations of a fixed strategy (reference path).
std::uint64_t count_winning(const DependencyGraph& g, const GuessingStrategy& s);

GuessingResult brute_guessing(const DependencyGraph& g, Value n, const SearchOptions& options = {});

struct SolutionsWinningReport {
  bool equal = false;
  OracleResult solutions;
  GuessingResult winning;
};

// Requires a diversified FNF system (every symbol used by exactly one equation).
SolutionsWinningReport check_solutions_equal_winning(const NormalSystem& system, Value n,
                                                     const SearchOptions& options = {});

// v disjoint blocks B_i = [i*m, (i+1)*m) of [n] with ι_i(a) = i*m + a.
class BlockEncoding {
 public:
  BlockEncoding(Value n, std::size_t v);

  Value n() const noexcept { return n_; }
  std::size_t v() const noexcept { return v_; }
  Value m() const noexcept { return m_; }

  Value embed(std::size_t block, Value a) const;
  // (block, a) with embed(block, a) == value, if value lies in a block.
  std::optional<std::pair<std::size_t, Value>> locate(Value value) const;

 private:
  Value n_;
  std::size_t v_;
  Value m_;
};

// Builds an interpretation of `system`'s symbols on [n] from an
// interpretation `j` of diversify(system) on [m]. Requires CFNF.
Interpretation lift_interpretation(const NormalSystem& system, const Interpretation& j,
                                   const BlockEncoding& encoding);

struct SandwichReport {
  Value n = 0;
  Value m = 0;
  std::size_t v = 0;
  std::uint64_t s_n = 0;          // S_n(Γ)
  std::uint64_t s_n_div = 0;      // S_n(Γ^div)
  std::uint64_t s_m_div = 0;      // S_m(Γ^div)
  std::uint64_t lifted_count = 0; // |Sol_I(Γ; n)| for the lifted witness
  Interpretation lifted;
  Interpretation diversified_witness;
  bool upper_holds = false;       // S_n(Γ) <= S_n(Γ^div)
  bool lower_holds = false;       // S_n(Γ) >= lifted_count >= S_m(Γ^div)
};

SandwichReport sandwich_check(const NormalSystem& system, Value n, const SearchOptions& options = {});

struct EmbeddingReport {
  bool equal = false;
  // "exhaustive" or "decoder-synthesis".
  std::string mode;
  OracleResult dispersion;
  OracleResult code_size;
};

// Disp_n(t) against S_n of the embedding. Enumerates the embedding's full
// interpretation space when it fits the budget; otherwise enumerates only the
// spec's symbols and synthesizes each decoder from least preimages.
EmbeddingReport check_embedding(const DispersionSpec& spec, Value n, const SearchOptions& options = {});

}  // namespace termflow
