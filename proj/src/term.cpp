#include "termflow/term.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "termflow/error.hpp"

namespace termflow {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(message),
      line_(line),
      column_(column) {}

BudgetExceeded::BudgetExceeded(const std::string& what, std::uint64_t required,
                               std::uint64_t limit)
    : Error(what), required_(required), limit_(limit) {}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    result = saturating_mul(result, base);
    if (result == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return result;
}

std::size_t table_index(std::span<const Value> args, Value n) {
  std::size_t index = 0;
  for (Value a : args) index = index * n + a;
  return index;
}

bool is_reserved_identifier(std::string_view name) {
  return name.empty() || name.front() == '_' || name.find('@') != std::string_view::npos;
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string_view> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s.name).second)
      throw WellFormednessError("duplicate symbol '" + s.name + "'");
  }
}

std::optional<std::size_t> Signature::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Signature::arity(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw WellFormednessError("unknown symbol '" + std::string(name) + "'");
  return symbols_[*i].arity;
}

// ---------------------------------------------------------------------------
// Term

Term::Term(bool is_variable, std::string name, std::vector<Term> args)
    : is_variable_(is_variable), name_(std::move(name)), args_(std::move(args)) {}

Term Term::variable(std::string name) { return Term(true, std::move(name), {}); }

Term Term::apply(std::string symbol, std::vector<Term> args) {
  return Term(false, std::move(symbol), std::move(args));
}

std::size_t Term::node_count() const {
  std::size_t count = 1;
  for (const auto& a : args_) count += a.node_count();
  return count;
}

bool Term::has_variable() const {
  if (is_variable_) return true;
  return std::any_of(args_.begin(), args_.end(), [](const Term& a) { return a.has_variable(); });
}

namespace {
void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}
}  // namespace

std::vector<std::string> Term::variables() const {
  std::vector<std::string> out;
  collect_variables(*this, out);
  return out;
}

bool Term::operator==(const Term& other) const {
  return is_variable_ == other.is_variable_ && name_ == other.name_ && args_ == other.args_;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  // Variables sort before applications.
  if (is_variable_ != other.is_variable_)
    return is_variable_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = name_ <=> other.name_; c != 0) return c;
  return std::lexicographical_compare_three_way(args_.begin(), args_.end(), other.args_.begin(),
                                                other.args_.end());
}

void check_term(const Term& t, const Signature& sig, std::span<const std::string> scope) {
  if (t.is_variable()) {
    if (std::find(scope.begin(), scope.end(), t.name()) == scope.end())
      throw WellFormednessError("undeclared variable '" + t.name() + "'");
    return;
  }
  auto idx = sig.index_of(t.name());
  if (!idx) throw WellFormednessError("undeclared symbol '" + t.name() + "'");
  const auto arity = sig.symbols()[*idx].arity;
  if (arity != t.args().size())
    throw WellFormednessError("arity mismatch for '" + t.name() + "': declared " +
                              std::to_string(arity) + ", applied to " +
                              std::to_string(t.args().size()));
  for (const auto& a : t.args()) check_term(a, sig, scope);
}

namespace {
void check_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& v : names) {
    if (v.empty()) throw WellFormednessError(std::string("empty ") + what + " name");
    if (!seen.insert(v).second)
      throw WellFormednessError(std::string("duplicate ") + what + " '" + v + "'");
  }
}
}  // namespace

// ---------------------------------------------------------------------------
// TermSystem / DispersionSpec

TermSystem::TermSystem(std::vector<std::string> variables, Signature signature,
                       std::vector<Equation> equations)
    : variables_(std::move(variables)),
      signature_(std::move(signature)),
      equations_(std::move(equations)) {
  check_unique(variables_, "variable");
  for (const auto& eq : equations_) {
    check_term(eq.lhs, signature_, variables_);
    check_term(eq.rhs, signature_, variables_);
  }
}

DispersionSpec::DispersionSpec(std::vector<std::string> inputs, Signature signature,
                               std::vector<Term> outputs)
    : inputs_(std::move(inputs)), signature_(std::move(signature)), outputs_(std::move(outputs)) {
  if (inputs_.empty()) throw WellFormednessError("dispersion spec needs at least one input");
  if (outputs_.empty()) throw WellFormednessError("dispersion spec needs at least one output");
  check_unique(inputs_, "input");
  for (const auto& t : outputs_) check_term(t, signature_, inputs_);
}

// ---------------------------------------------------------------------------
// Interpretation

Interpretation::Interpretation(Signature signature, Value n, std::vector<std::vector<Value>> tables)
    : signature_(std::move(signature)), n_(n), tables_(std::move(tables)) {
  if (n_ < 1) throw WellFormednessError("alphabet size must be at least 1");
  if (tables_.size() != signature_.size())
    throw WellFormednessError("interpretation needs exactly one table per symbol");
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const auto& sym = signature_.symbols()[i];
    if (tables_[i].size() != saturating_pow(n_, sym.arity))
      throw WellFormednessError("table for '" + sym.name + "' has wrong length");
    for (Value v : tables_[i])
      if (v >= n_) throw WellFormednessError("table for '" + sym.name + "' leaves [0,n)");
  }
}

Interpretation Interpretation::zeros(Signature signature, Value n) {
  std::vector<std::vector<Value>> tables;
  for (const auto& s : signature.symbols()) tables.emplace_back(saturating_pow(n, s.arity), 0);
  return Interpretation(std::move(signature), n, std::move(tables));
}

const std::vector<Value>& Interpretation::table(std::string_view symbol) const {
  auto i = signature_.index_of(symbol);
  if (!i) throw EvalError("no table for symbol '" + std::string(symbol) + "'");
  return tables_[*i];
}

Value Interpretation::apply(std::string_view symbol, std::span<const Value> args) const {
  const auto& t = table(symbol);
  if (t.size() != saturating_pow(n_, args.size()))
    throw EvalError("arity mismatch applying '" + std::string(symbol) + "'");
  return t[table_index(args, n_)];
}

// ---------------------------------------------------------------------------
// Evaluation and size

Value eval_term(const Term& t, const Interpretation& interp, const Assignment& assignment) {
  if (t.is_variable()) {
    auto it = assignment.find(t.name());
    if (it == assignment.end()) throw EvalError("no binding for variable '" + t.name() + "'");
    if (it->second >= interp.n())
      throw EvalError("binding for '" + t.name() + "' lies outside the alphabet");
    return it->second;
  }
  std::vector<Value> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_term(a, interp, assignment));
  return interp.apply(t.name(), args);
}

bool satisfies(const TermSystem& system, const Interpretation& interp,
               const Assignment& assignment) {
  return std::all_of(system.equations().begin(), system.equations().end(),
                     [&](const Equation& eq) {
                       return eval_term(eq.lhs, interp, assignment) ==
                              eval_term(eq.rhs, interp, assignment);
                     });
}

std::size_t instance_size(const TermSystem& system) {
  std::size_t size = system.equations().size();
  for (const auto& eq : system.equations()) size += eq.lhs.node_count() + eq.rhs.node_count();
  return size;
}

std::size_t instance_size(const DispersionSpec& spec) {
  std::size_t size = spec.outputs().size();
  for (const auto& t : spec.outputs()) size += t.node_count();
  return size;
}

}  // namespace termflow
