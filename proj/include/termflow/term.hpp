#pragma once

// Terms, signatures, term-coding instances, dispersion specs and their
// finite interpretations over the alphabet [n] = {0, ..., n-1}.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termflow {

using Value = std::uint32_t;

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const Symbol&) const = default;
};

class Signature {
 public:
  Signature() = default;
  // Throws WellFormednessError on duplicate names.
  explicit Signature(std::vector<Symbol> symbols);

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }
  // Throws WellFormednessError for unknown symbols.
  std::size_t arity(std::string_view name) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

class Term {
 public:
  static Term variable(std::string name);
  static Term apply(std::string symbol, std::vector<Term> args = {});

  bool is_variable() const noexcept { return is_variable_; }
  // Variable name or applied symbol name.
  const std::string& name() const noexcept { return name_; }
  const std::vector<Term>& args() const noexcept { return args_; }

  // Application nodes plus variable leaves.
  std::size_t node_count() const;
  bool has_variable() const;
  // Distinct variables in first-occurrence (left-to-right) order.
  std::vector<std::string> variables() const;

  bool operator==(const Term& other) const;
  std::strong_ordering operator<=>(const Term& other) const;

 private:
  Term(bool is_variable, std::string name, std::vector<Term> args);

  bool is_variable_ = true;
  std::string name_;
  std::vector<Term> args_;
};

// Checks arities against `sig` and that every variable is in `scope`.
// Throws WellFormednessError.
void check_term(const Term& t, const Signature& sig, std::span<const std::string> scope);

struct Equation {
  Term lhs;
  Term rhs;

  bool operator==(const Equation&) const = default;
};

class TermSystem {
 public:
  TermSystem() = default;
  TermSystem(std::vector<std::string> variables, Signature signature,
             std::vector<Equation> equations);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const Signature& signature() const noexcept { return signature_; }
  const std::vector<Equation>& equations() const noexcept { return equations_; }

  bool operator==(const TermSystem&) const = default;

 private:
  std::vector<std::string> variables_;
  Signature signature_;
  std::vector<Equation> equations_;
};

class DispersionSpec {
 public:
  DispersionSpec() = default;
  DispersionSpec(std::vector<std::string> inputs, Signature signature, std::vector<Term> outputs);

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const Signature& signature() const noexcept { return signature_; }
  const std::vector<Term>& outputs() const noexcept { return outputs_; }
  std::size_t input_count() const noexcept { return inputs_.size(); }
  std::size_t output_count() const noexcept { return outputs_.size(); }

  bool operator==(const DispersionSpec&) const = default;

 private:
  std::vector<std::string> inputs_;
  Signature signature_;
  std::vector<Term> outputs_;
};

// One total table per signature symbol. Tables are row-major: the argument
// tuple (a_1, ..., a_k) sits at index a_1 n^{k-1} + ... + a_k, so the first
// argument is the most significant digit.
class Interpretation {
 public:
  Interpretation() = default;
  Interpretation(Signature signature, Value n, std::vector<std::vector<Value>> tables);

  // All-zero tables.
  static Interpretation zeros(Signature signature, Value n);

  Value n() const noexcept { return n_; }
  const Signature& signature() const noexcept { return signature_; }
  const std::vector<std::vector<Value>>& tables() const noexcept { return tables_; }
  // Throws EvalError if the symbol has no table.
  const std::vector<Value>& table(std::string_view symbol) const;

  Value apply(std::string_view symbol, std::span<const Value> args) const;

  bool operator==(const Interpretation&) const = default;

 private:
  Signature signature_;
  Value n_ = 1;
  std::vector<std::vector<Value>> tables_;
};

using Assignment = std::map<std::string, Value, std::less<>>;

// n^k with saturation at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// Row-major index of an argument tuple.
std::size_t table_index(std::span<const Value> args, Value n);

Value eval_term(const Term& t, const Interpretation& interp, const Assignment& assignment);
bool satisfies(const TermSystem& system, const Interpretation& interp, const Assignment& assignment);

// Symbol occurrences (function symbols and variables) plus the equation count
// (resp. the output count).
std::size_t instance_size(const TermSystem& system);
std::size_t instance_size(const DispersionSpec& spec);

// Identifiers starting with '_' or containing '@' are reserved for generated
// names and rejected in user input.
bool is_reserved_identifier(std::string_view name);

}  // namespace termflow
