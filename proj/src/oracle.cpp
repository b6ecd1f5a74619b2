#include "termflow/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "termflow/error.hpp"

namespace termflow {

namespace {

constexpr auto kSaturated = std::numeric_limits<std::uint64_t>::max();

std::string count_text(std::uint64_t count) {
  return count == kSaturated ? std::string(">= 2^64") : std::to_string(count);
}

// Mixed-radix digits over a fixed base n; the last digit is least significant.
struct DigitSpace {
  Value n = 1;
  std::size_t digits = 0;

  std::uint64_t size() const { return saturating_pow(n, digits); }

  std::vector<Value> decode(std::uint64_t index) const {
    std::vector<Value> out(digits, 0);
    for (std::size_t i = digits; i-- > 0 && index > 0;) {
      out[i] = static_cast<Value>(index % n);
      index /= n;
    }
    return out;
  }

  void increment(std::vector<Value>& d) const {
    for (std::size_t i = digits; i-- > 0;) {
      if (++d[i] < n) return;
      d[i] = 0;
    }
  }
};

std::size_t table_digits(const Signature& sig, Value n) {
  std::size_t total = 0;
  for (const auto& s : sig.symbols()) total += saturating_pow(n, s.arity);
  return total;
}

std::uint64_t split_point(std::uint64_t count, unsigned part, unsigned parts) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(count) * part / parts);
}

unsigned effective_jobs(unsigned jobs, std::uint64_t count) {
  jobs = std::max(1u, jobs);
  if (count < jobs) jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, count));
  return jobs;
}

template <class Fn>
void run_parallel(unsigned jobs, Fn&& fn) {
  if (jobs == 1) {
    fn(0u);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(jobs - 1);
  for (unsigned j = 1; j < jobs; ++j) threads.emplace_back([&fn, j] { fn(j); });
  fn(0u);
}

struct Best {
  std::uint64_t value = 0;
  std::uint64_t index = 0;
  bool found = false;
};

// Maximum score over the space and the least index attaining it.
// `make_scorer()` is called once per worker.
template <class MakeScorer>
Best search_max(const DigitSpace& space, unsigned jobs, MakeScorer make_scorer) {
  const std::uint64_t count = space.size();
  jobs = effective_jobs(jobs, count);
  std::vector<Best> partial(jobs);
  run_parallel(jobs, [&](unsigned j) {
    auto scorer = make_scorer();
    const std::uint64_t begin = split_point(count, j, jobs);
    const std::uint64_t end = split_point(count, j + 1, jobs);
    auto digits = space.decode(begin);
    Best best;
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t score = scorer(std::span<const Value>(digits));
      if (!best.found || score > best.value) best = {score, i, true};
      space.increment(digits);
    }
    partial[j] = best;
  });
  Best merged;
  for (const auto& p : partial) {
    if (!p.found) continue;
    if (!merged.found || p.value > merged.value) merged = p;
  }
  return merged;
}

// Least index satisfying the predicate, if any.
template <class MakePredicate>
std::optional<std::uint64_t> search_first(const DigitSpace& space, unsigned jobs,
                                          MakePredicate make_predicate) {
  const std::uint64_t count = space.size();
  jobs = effective_jobs(jobs, count);
  std::atomic<std::uint64_t> first{kSaturated};
  run_parallel(jobs, [&](unsigned j) {
    auto predicate = make_predicate();
    const std::uint64_t begin = split_point(count, j, jobs);
    const std::uint64_t end = split_point(count, j + 1, jobs);
    auto digits = space.decode(begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      if (i > first.load(std::memory_order_relaxed)) return;
      if (predicate(std::span<const Value>(digits))) {
        std::uint64_t seen = first.load();
        while (i < seen && !first.compare_exchange_weak(seen, i)) {
        }
        return;
      }
      space.increment(digits);
    }
  });
  const auto f = first.load();
  if (f == kSaturated) return std::nullopt;
  return f;
}

Interpretation interpretation_from_digits(const Signature& sig, Value n,
                                          std::span<const Value> digits) {
  std::vector<std::vector<Value>> tables;
  std::size_t pos = 0;
  for (const auto& s : sig.symbols()) {
    const auto len = static_cast<std::size_t>(saturating_pow(n, s.arity));
    tables.emplace_back(digits.begin() + pos, digits.begin() + pos + len);
    pos += len;
  }
  return Interpretation(sig, n, std::move(tables));
}

std::vector<Value> digits_of(const Interpretation& interp) {
  std::vector<Value> out;
  for (const auto& t : interp.tables()) out.insert(out.end(), t.begin(), t.end());
  return out;
}

// Straight-line evaluation of a set of terms over one variable assignment.
// Identical subterms are evaluated once.
class Program {
 public:
  Program(const Signature& sig, const std::vector<std::string>& variables, Value n)
      : n_(n), variables_(variables) {
    std::size_t offset = 0;
    for (const auto& s : sig.symbols()) {
      offsets_.emplace(s.name, offset);
      offset += static_cast<std::size_t>(saturating_pow(n, s.arity));
    }
  }

  std::size_t compile(const Term& t) {
    if (auto it = interned_.find(t); it != interned_.end()) return it->second;
    Op op;
    if (t.is_variable()) {
      auto it = std::find(variables_.begin(), variables_.end(), t.name());
      if (it == variables_.end()) throw EvalError("no binding for variable '" + t.name() + "'");
      op.variable = static_cast<std::size_t>(it - variables_.begin());
    } else {
      auto it = offsets_.find(t.name());
      if (it == offsets_.end()) throw EvalError("no table for symbol '" + t.name() + "'");
      op.offset = it->second;
      op.is_apply = true;
      for (const auto& a : t.args()) op.args.push_back(compile(a));
    }
    ops_.push_back(std::move(op));
    interned_.emplace(t, ops_.size() - 1);
    return ops_.size() - 1;
  }

  std::size_t size() const { return ops_.size(); }

  void run(std::span<const Value> tables, std::span<const Value> assignment,
           std::vector<Value>& regs) const {
    regs.resize(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      if (!op.is_apply) {
        regs[i] = assignment[op.variable];
        continue;
      }
      std::size_t index = 0;
      for (auto a : op.args) index = index * n_ + regs[a];
      regs[i] = tables[op.offset + index];
    }
  }

 private:
  struct Op {
    bool is_apply = false;
    std::size_t variable = 0;
    std::size_t offset = 0;
    std::vector<std::size_t> args;
  };

  Value n_;
  std::vector<std::string> variables_;
  std::map<std::string, std::size_t> offsets_;
  std::vector<Op> ops_;
  std::map<Term, std::size_t> interned_;
};

// Image of Θ^I for a fixed spec and alphabet, with a stamp array over [n]^r.
class ImageEvaluator {
 public:
  ImageEvaluator(const DispersionSpec& spec, Value n)
      : program_(spec.signature(), spec.inputs(), n),
        n_(n),
        k_(spec.input_count()),
        r_(spec.output_count()) {
    for (const auto& t : spec.outputs()) roots_.push_back(program_.compile(t));
    codomain_ = saturating_pow(n, r_);
    stamp_.assign(static_cast<std::size_t>(codomain_), 0);
    inputs_ = saturating_pow(n, k_);
  }

  std::uint64_t codomain() const { return codomain_; }

  // Calls `visit(code, input_index)` for each first-seen output code.
  template <class Visit>
  std::uint64_t image(std::span<const Value> tables, Visit&& visit) {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    std::vector<Value> x(k_, 0);
    std::uint64_t size = 0;
    for (std::uint64_t i = 0; i < inputs_; ++i) {
      program_.run(tables, x, regs_);
      std::size_t code = 0;
      for (auto root : roots_) code = code * n_ + regs_[root];
      if (stamp_[code] != epoch_) {
        stamp_[code] = epoch_;
        ++size;
        visit(code, x);
      }
      for (std::size_t d = k_; d-- > 0;) {
        if (++x[d] < n_) break;
        x[d] = 0;
      }
    }
    return size;
  }

  std::uint64_t image(std::span<const Value> tables) {
    return image(tables, [](std::size_t, const std::vector<Value>&) {});
  }

 private:
  Program program_;
  Value n_;
  std::size_t k_;
  std::size_t r_;
  std::vector<std::size_t> roots_;
  std::uint64_t codomain_ = 0;
  std::uint64_t inputs_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Value> regs_;
};

constexpr std::uint64_t kMaxCodomain = std::uint64_t{1} << 26;

void check_codomain(const DispersionSpec& spec, Value n) {
  const auto codomain = saturating_pow(n, spec.output_count());
  if (codomain > kMaxCodomain)
    throw BudgetExceeded("codomain [n]^r has " + count_text(codomain) + " points", codomain,
                         kMaxCodomain);
}

}  // namespace

// ---------------------------------------------------------------------------
// Budgets and enumeration

SearchBudget SearchBudget::from_environment() {
  SearchBudget budget;
  if (const char* env = std::getenv("TERMFLOW_BUDGET"); env && *env) {
    std::uint64_t value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
      throw PreconditionError("TERMFLOW_BUDGET must be a positive integer");
    budget.max_interpretations = value;
  }
  return budget;
}

std::uint64_t interpretation_count(const Signature& sig, Value n) {
  std::uint64_t count = 1;
  for (const auto& s : sig.symbols())
    count = saturating_mul(count, saturating_pow(n, saturating_pow(n, s.arity)));
  return count;
}

void check_budget(const SearchBudget& budget, std::uint64_t interpretations,
                  std::uint64_t per_item, const std::string& what) {
  if (interpretations > budget.max_interpretations)
    throw BudgetExceeded(what + ": " + count_text(interpretations) +
                             " candidates exceed the budget of " +
                             std::to_string(budget.max_interpretations),
                         interpretations, budget.max_interpretations);
  const auto evaluations = saturating_mul(interpretations, per_item);
  if (evaluations > budget.max_evaluations)
    throw BudgetExceeded(what + ": " + count_text(evaluations) +
                             " evaluations exceed the budget of " +
                             std::to_string(budget.max_evaluations),
                         evaluations, budget.max_evaluations);
}

Interpretation interpretation_at(const Signature& sig, Value n, std::uint64_t index) {
  DigitSpace space{n, table_digits(sig, n)};
  return interpretation_from_digits(sig, n, space.decode(index));
}

std::uint64_t interpretation_index(const Interpretation& interp) {
  std::uint64_t index = 0;
  for (Value d : digits_of(interp)) {
    index = saturating_mul(index, interp.n());
    if (index == kSaturated) return kSaturated;
    index += d;
  }
  return index;
}

InterpretationEnumerator::InterpretationEnumerator(Signature sig, Value n,
                                                   const SearchBudget& budget)
    : sig_(std::move(sig)), n_(n), count_(interpretation_count(sig_, n)) {
  check_budget(budget, count_, 1, "interpretation enumeration");
  digits_.assign(table_digits(sig_, n_), 0);
}

std::optional<Interpretation> InterpretationEnumerator::next() {
  if (index_ >= count_) return std::nullopt;
  auto interp = interpretation_from_digits(sig_, n_, digits_);
  DigitSpace{n_, digits_.size()}.increment(digits_);
  ++index_;
  return interp;
}

std::optional<double> normalized_rate(std::uint64_t value, Value n) {
  if (n < 2 || value == 0) return std::nullopt;
  return std::log(static_cast<double>(value)) / std::log(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Reference evaluators

std::uint64_t count_solutions(const TermSystem& system, const Interpretation& interp) {
  const auto& vars = system.variables();
  std::vector<Value> values(vars.size(), 0);
  const auto total = saturating_pow(interp.n(), vars.size());
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    Assignment a;
    for (std::size_t v = 0; v < vars.size(); ++v) a.emplace(vars[v], values[v]);
    if (satisfies(system, interp, a)) ++count;
    for (std::size_t d = vars.size(); d-- > 0;) {
      if (++values[d] < interp.n()) break;
      values[d] = 0;
    }
  }
  return count;
}

std::uint64_t image_size(const DispersionSpec& spec, const Interpretation& interp) {
  const auto& xs = spec.inputs();
  std::vector<Value> values(xs.size(), 0);
  const auto total = saturating_pow(interp.n(), xs.size());
  std::set<std::vector<Value>> image;
  for (std::uint64_t i = 0; i < total; ++i) {
    Assignment a;
    for (std::size_t v = 0; v < xs.size(); ++v) a.emplace(xs[v], values[v]);
    std::vector<Value> y;
    for (const auto& t : spec.outputs()) y.push_back(eval_term(t, interp, a));
    image.insert(std::move(y));
    for (std::size_t d = xs.size(); d-- > 0;) {
      if (++values[d] < interp.n()) break;
      values[d] = 0;
    }
  }
  return image.size();
}

// ---------------------------------------------------------------------------
// Compiled solution counting

struct SolutionCounter::Impl {
  Impl(const TermSystem& system, Value n)
      : program(system.signature(), system.variables(), n),
        n(n),
        variables(system.variables().size()),
        signature(system.signature()) {
    for (const auto& eq : system.equations())
      equations.emplace_back(program.compile(eq.lhs), program.compile(eq.rhs));
    assignments = saturating_pow(n, variables);
  }

  std::uint64_t count(std::span<const Value> tables) {
    std::vector<Value> a(variables, 0);
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < assignments; ++i) {
      program.run(tables, a, regs);
      bool ok = true;
      for (const auto& [l, r] : equations) {
        if (regs[l] != regs[r]) {
          ok = false;
          break;
        }
      }
      total += ok ? 1 : 0;
      for (std::size_t d = variables; d-- > 0;) {
        if (++a[d] < n) break;
        a[d] = 0;
      }
    }
    return total;
  }

  Program program;
  Value n;
  std::size_t variables;
  Signature signature;
  std::vector<std::pair<std::size_t, std::size_t>> equations;
  std::uint64_t assignments = 0;
  std::vector<Value> regs;
};

SolutionCounter::SolutionCounter(const TermSystem& system, Value n)
    : impl_(std::make_unique<Impl>(system, n)) {}
SolutionCounter::~SolutionCounter() = default;
SolutionCounter::SolutionCounter(SolutionCounter&&) noexcept = default;
SolutionCounter& SolutionCounter::operator=(SolutionCounter&&) noexcept = default;

std::uint64_t SolutionCounter::count(std::span<const Value> tables) { return impl_->count(tables); }

std::uint64_t SolutionCounter::count(const Interpretation& interp) {
  if (interp.n() != impl_->n || !(interp.signature() == impl_->signature))
    throw EvalError("interpretation does not match the counter's signature and alphabet");
  const auto digits = digits_of(interp);
  return impl_->count(digits);
}

std::uint64_t SolutionCounter::assignments() const { return impl_->assignments; }

// ---------------------------------------------------------------------------
// Maximum code size and dispersion

OracleResult brute_max_solutions(const TermSystem& system, Value n, const SearchOptions& options) {
  if (n < 1) throw PreconditionError("alphabet size must be at least 1");
  const auto count = interpretation_count(system.signature(), n);
  const auto per = saturating_pow(n, system.variables().size());
  check_budget(options.budget, count, per, "max solutions");

  DigitSpace space{n, table_digits(system.signature(), n)};
  const Best best = search_max(space, options.jobs, [&] {
    return [counter = SolutionCounter(system, n)](std::span<const Value> d) mutable {
      return counter.count(d);
    };
  });
  OracleResult result;
  result.value = best.value;
  result.witness_index = best.index;
  result.witness = interpretation_at(system.signature(), n, best.index);
  result.rate = normalized_rate(best.value, n);
  result.interpretations = count;
  result.evaluations = saturating_mul(count, per);
  return result;
}

OracleResult brute_dispersion(const DispersionSpec& spec, Value n, const SearchOptions& options) {
  if (n < 1) throw PreconditionError("alphabet size must be at least 1");
  const auto count = interpretation_count(spec.signature(), n);
  const auto per = saturating_pow(n, spec.input_count());
  check_budget(options.budget, count, per, "dispersion");
  check_codomain(spec, n);

  DigitSpace space{n, table_digits(spec.signature(), n)};
  const Best best = search_max(space, options.jobs, [&] {
    return [eval = ImageEvaluator(spec, n)](std::span<const Value> d) mutable {
      return eval.image(d);
    };
  });
  OracleResult result;
  result.value = best.value;
  result.witness_index = best.index;
  result.witness = interpretation_at(spec.signature(), n, best.index);
  result.rate = normalized_rate(best.value, n);
  result.interpretations = count;
  result.evaluations = saturating_mul(count, per);
  return result;
}

PerfectResult check_perfect_fixed(const DispersionSpec& spec, Value n,
                                  const SearchOptions& options) {
  if (n < 1) throw PreconditionError("alphabet size must be at least 1");
  const auto count = interpretation_count(spec.signature(), n);
  check_budget(options.budget, count, saturating_pow(n, spec.input_count()), "perfect dispersion");
  check_codomain(spec, n);

  PerfectResult result;
  result.space = count;
  DigitSpace space{n, table_digits(spec.signature(), n)};
  const auto first = search_first(space, options.jobs, [&] {
    return [eval = ImageEvaluator(spec, n)](std::span<const Value> d) mutable {
      return eval.image(d) == eval.codomain();
    };
  });
  if (first) {
    result.perfect = true;
    result.witness = interpretation_at(spec.signature(), n, *first);
    result.examined = *first + 1;
  } else {
    result.examined = count;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Guessing games

namespace {

struct StrategyLayout {
  std::vector<std::vector<std::size_t>> in;  // per vertex
  std::vector<std::size_t> offset;           // per vertex, into the digit vector
  std::size_t digits = 0;

  StrategyLayout(const DependencyGraph& g, Value n) : in(g.vertices().size()), offset(in.size()) {
    for (std::size_t v = 0; v < in.size(); ++v) {
      offset[v] = digits;
      if (g.is_source(v)) continue;
      in[v] = g.in_neighbours(v);
      digits += static_cast<std::size_t>(saturating_pow(n, in[v].size()));
    }
  }
};

class WinCounter {
 public:
  WinCounter(const DependencyGraph& g, Value n) : g_(g), layout_(g, n), n_(n) {
    configs_ = saturating_pow(n, g.vertices().size());
  }

  std::uint64_t count(std::span<const Value> tables) const {
    const std::size_t size = g_.vertices().size();
    std::vector<Value> a(size, 0);
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < configs_; ++i) {
      bool ok = true;
      for (std::size_t v = 0; v < size && ok; ++v) {
        if (g_.is_source(v)) continue;
        std::size_t index = 0;
        for (auto u : layout_.in[v]) index = index * n_ + a[u];
        ok = tables[layout_.offset[v] + index] == a[v];
      }
      wins += ok ? 1 : 0;
      for (std::size_t d = size; d-- > 0;) {
        if (++a[d] < n_) break;
        a[d] = 0;
      }
    }
    return wins;
  }

 private:
  const DependencyGraph& g_;
  StrategyLayout layout_;
  Value n_;
  std::uint64_t configs_ = 0;
};

}  // namespace

std::uint64_t strategy_count(const DependencyGraph& g, Value n) {
  std::uint64_t count = 1;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.is_source(v)) continue;
    count = saturating_mul(count, saturating_pow(n, saturating_pow(n, g.in_neighbours(v).size())));
  }
  return count;
}

GuessingStrategy strategy_at(const DependencyGraph& g, Value n, std::uint64_t index) {
  StrategyLayout layout(g, n);
  const auto digits = DigitSpace{n, layout.digits}.decode(index);
  GuessingStrategy s;
  s.n = n;
  s.tables.resize(g.vertices().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.is_source(v)) continue;
    const auto len = static_cast<std::size_t>(saturating_pow(n, layout.in[v].size()));
    s.tables[v].assign(digits.begin() + layout.offset[v], digits.begin() + layout.offset[v] + len);
  }
  return s;
}

std::uint64_t count_winning(const DependencyGraph& g, const GuessingStrategy& s) {
  const std::size_t size = g.vertices().size();
  std::vector<Value> a(size, 0);
  const auto total = saturating_pow(s.n, size);
  std::uint64_t wins = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (is_winning(g, s, a)) ++wins;
    for (std::size_t d = size; d-- > 0;) {
      if (++a[d] < s.n) break;
      a[d] = 0;
    }
  }
  return wins;
}

GuessingResult brute_guessing(const DependencyGraph& g, Value n, const SearchOptions& options) {
  if (n < 1) throw PreconditionError("alphabet size must be at least 1");
  const auto count = strategy_count(g, n);
  const auto per = saturating_pow(n, g.vertices().size());
  check_budget(options.budget, count, per, "guessing game");

  DigitSpace space{n, StrategyLayout(g, n).digits};
  const Best best = search_max(space, options.jobs, [&] {
    return [counter = WinCounter(g, n)](std::span<const Value> d) { return counter.count(d); };
  });
  GuessingResult result;
  result.value = best.value;
  result.strategy_index = best.index;
  result.strategy = strategy_at(g, n, best.index);
  result.rate = normalized_rate(best.value, n);
  result.strategies = count;
  result.evaluations = saturating_mul(count, per);
  return result;
}

SolutionsWinningReport check_solutions_equal_winning(const NormalSystem& system, Value n,
                                                     const SearchOptions& options) {
  std::set<std::string> used;
  for (const auto& eq : system.equations) {
    if (!used.insert(eq.symbol).second)
      throw PreconditionError("symbol '" + eq.symbol +
                              "' is shared by several equations; diversify first");
  }
  const auto graph = dependency_graph(system);  // checks FNF
  SolutionsWinningReport report;
  report.solutions = brute_max_solutions(to_term_system(system), n, options);
  report.winning = brute_guessing(graph, n, options);
  report.equal = report.solutions.value == report.winning.value;
  return report;
}

// ---------------------------------------------------------------------------
// Block encoding and lifting

BlockEncoding::BlockEncoding(Value n, std::size_t v) : n_(n), v_(v) {
  if (v == 0) throw PreconditionError("block encoding needs at least one block");
  if (n < v)
    throw PreconditionError("block encoding needs n >= v (n=" + std::to_string(n) +
                            ", v=" + std::to_string(v) + ")");
  m_ = static_cast<Value>(n / v);
}

Value BlockEncoding::embed(std::size_t block, Value a) const {
  return static_cast<Value>(block * m_ + a);
}

std::optional<std::pair<std::size_t, Value>> BlockEncoding::locate(Value value) const {
  if (value >= v_ * m_) return std::nullopt;
  return std::make_pair(static_cast<std::size_t>(value / m_), static_cast<Value>(value % m_));
}

Interpretation lift_interpretation(const NormalSystem& system, const Interpretation& j,
                                   const BlockEncoding& encoding) {
  if (!classify(system).is_cfnf)
    throw PreconditionError("lifting needs a collision-free functional normal form");
  if (encoding.v() != system.variables.size())
    throw PreconditionError("block encoding must have one block per variable");
  if (j.n() != encoding.m())
    throw PreconditionError("diversified interpretation must live on [m] with m = floor(n/v)");

  std::map<std::string, std::size_t> block_of;
  for (std::size_t i = 0; i < system.variables.size(); ++i) block_of[system.variables[i]] = i;

  const Value n = encoding.n();
  const Value m = encoding.m();
  std::vector<std::vector<Value>> tables;
  for (const auto& sym : system.signature.symbols()) {
    std::vector<Value> table(static_cast<std::size_t>(saturating_pow(n, sym.arity)), 0);
    std::vector<bool> written(table.size(), false);
    for (std::size_t e = 0; e < system.equations.size(); ++e) {
      const auto& eq = system.equations[e];
      if (eq.symbol != sym.name) continue;
      const auto& copy = j.table(diversified_symbol(eq.symbol, e));
      const std::size_t target = block_of.at(eq.defined);
      const auto tuples = saturating_pow(m, sym.arity);
      std::vector<Value> small(sym.arity, 0);
      std::vector<Value> large(sym.arity, 0);
      for (std::uint64_t t = 0; t < tuples; ++t) {
        for (std::size_t l = 0; l < sym.arity; ++l)
          large[l] = encoding.embed(block_of.at(eq.args[l]), small[l]);
        const auto at = table_index(large, n);
        const Value value = encoding.embed(target, copy[table_index(small, m)]);
        if (written[at] && table[at] != value)
          throw PreconditionError("lift is not well defined: left-hand collision on '" +
                                  sym.name + "'");
        table[at] = value;
        written[at] = true;
        for (std::size_t d = sym.arity; d-- > 0;) {
          if (++small[d] < m) break;
          small[d] = 0;
        }
      }
    }
    tables.push_back(std::move(table));
  }
  return Interpretation(system.signature, n, std::move(tables));
}

SandwichReport sandwich_check(const NormalSystem& system, Value n, const SearchOptions& options) {
  if (!classify(system).is_cfnf)
    throw PreconditionError("the sandwich bounds need a collision-free functional normal form");
  const std::size_t v = system.variables.size();
  const BlockEncoding encoding(n, v);

  const NormalSystem div = diversify(system);
  const TermSystem original = to_term_system(system);
  const TermSystem diversified = to_term_system(div);

  SandwichReport report;
  report.n = n;
  report.m = encoding.m();
  report.v = v;
  report.s_n = brute_max_solutions(original, n, options).value;
  report.s_n_div = brute_max_solutions(diversified, n, options).value;
  const auto small = brute_max_solutions(diversified, encoding.m(), options);
  report.s_m_div = small.value;
  report.diversified_witness = small.witness;
  report.lifted = lift_interpretation(system, small.witness, encoding);
  report.lifted_count = count_solutions(original, report.lifted);
  report.upper_holds = report.s_n <= report.s_n_div;
  report.lower_holds = report.s_n >= report.lifted_count && report.lifted_count >= report.s_m_div;
  return report;
}

// ---------------------------------------------------------------------------
// Embedding

EmbeddingReport check_embedding(const DispersionSpec& spec, Value n, const SearchOptions& options) {
  EmbeddingReport report;
  report.dispersion = brute_dispersion(spec, n, options);

  EmbeddingNames names;
  const TermSystem embedded = embed_dispersion(spec, &names);
  const auto full = interpretation_count(embedded.signature(), n);
  const auto per = saturating_pow(n, embedded.variables().size());
  const bool exhaustive = full <= options.budget.max_interpretations &&
                          saturating_mul(full, per) <= options.budget.max_evaluations;
  if (exhaustive) {
    report.mode = "exhaustive";
    report.code_size = brute_max_solutions(embedded, n, options);
  } else {
    // Only the spec's own symbols are enumerated; each decoder maps a point of
    // the image to its least preimage and everything else to 0.
    report.mode = "decoder-synthesis";
    const auto count = interpretation_count(spec.signature(), n);
    const auto inputs = saturating_pow(n, spec.input_count());
    check_budget(options.budget, count, saturating_mul(inputs, 2) + per, "embedding synthesis");
    check_codomain(spec, n);

    const std::size_t k = spec.input_count();
    auto synthesize = [k](ImageEvaluator& eval, std::span<const Value> d) {
      std::vector<Value> full(d.begin(), d.end());
      const std::size_t base = full.size();
      const auto codomain = static_cast<std::size_t>(eval.codomain());
      full.resize(base + k * codomain, 0);
      eval.image(d, [&](std::size_t code, const std::vector<Value>& x) {
        for (std::size_t j = 0; j < k; ++j) full[base + j * codomain + code] = x[j];
      });
      return full;
    };
    DigitSpace space{n, table_digits(spec.signature(), n)};
    const Best best = search_max(space, options.jobs, [&] {
      return [&synthesize, eval = ImageEvaluator(spec, n),
              counter = SolutionCounter(embedded, n)](std::span<const Value> d) mutable {
        const auto full = synthesize(eval, d);
        return counter.count(std::span<const Value>(full));
      };
    });
    ImageEvaluator eval(spec, n);
    const auto full = synthesize(eval, space.decode(best.index));
    OracleResult& result = report.code_size;
    result.value = best.value;
    result.witness_index = best.index;
    result.witness = interpretation_from_digits(embedded.signature(), n, full);
    result.rate = normalized_rate(best.value, n);
    result.interpretations = count;
    result.evaluations = saturating_mul(count, per);
  }
  report.equal = report.dispersion.value == report.code_size.value;
  return report;
}

}  // namespace termflow
