#pragma once

// Flattening to depth-1 normal form, quotienting of variable equalities and
// left-hand collisions, FNF/CFNF classification, diversification, and the
// dispersion-to-term-coding embedding.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "termflow/term.hpp"

namespace termflow {

// f(u_1, ..., u_k) = defined, with k >= 0.
struct NormalEquation {
  std::string symbol;
  std::vector<std::string> args;
  std::string defined;

  auto operator<=>(const NormalEquation&) const = default;
};

struct NormalSystem {
  std::vector<std::string> variables;
  Signature signature;
  std::vector<NormalEquation> equations;
  std::vector<std::pair<std::string, std::string>> var_equalities;
  // Auxiliary variable -> the subterm it names.
  std::map<std::string, Term> origin;

  bool operator==(const NormalSystem&) const = default;
};

// Generated auxiliaries are "_z<i>"; user identifiers never start with '_'.
bool is_auxiliary(const std::string& name);

// Union-find whose class representative is the minimum under
// (original before auxiliary, then lexicographic name).
class UnionFind {
 public:
  explicit UnionFind(const std::vector<std::string>& names);

  const std::string& find(const std::string& name);
  // Returns true if two distinct classes were joined.
  bool unite(const std::string& a, const std::string& b);

  static bool precedes(const std::string& a, const std::string& b);

 private:
  std::map<std::string, std::string> parent_;
};

struct VariableMerge {
  std::string stage;
  std::string merged;
  std::string into;

  bool operator==(const VariableMerge&) const = default;
};

struct Classification {
  std::vector<std::string> defined;
  std::vector<std::string> sources;
  bool is_normal = false;
  bool is_collision_free = false;
  bool is_fnf = false;
  bool is_cfnf = false;
};

struct PipelineReport {
  std::vector<std::string> stages;
  std::vector<VariableMerge> merges;
  std::vector<std::string> auxiliaries;
  std::size_t collision_rounds = 0;
  Classification classification;
};

NormalSystem flatten(const TermSystem& system);

// Both quotient steps optionally append the merges they perform to `merges`.
NormalSystem quotient_vars(const NormalSystem& system, std::vector<VariableMerge>* merges = nullptr);
// Iterates collision merging and variable quotienting to a joint fixpoint.
NormalSystem collision_quotient(const NormalSystem& system,
                                std::vector<VariableMerge>* merges = nullptr,
                                std::size_t* rounds = nullptr);

Classification classify(const NormalSystem& system);

// Equation i gets the fresh symbol "<f>@<i>". Only the fresh symbols are kept
// in the signature.
NormalSystem diversify(const NormalSystem& system);
std::string diversified_symbol(const std::string& symbol, std::size_t equation_index);

std::pair<NormalSystem, PipelineReport> pipeline(const TermSystem& system);

// Normal equations become f(u...) = v and equalities u = v.
TermSystem to_term_system(const NormalSystem& system);

// Names generated for the embedding of a dispersion spec.
struct EmbeddingNames {
  std::vector<std::string> outputs;   // y_1..y_r
  std::vector<std::string> decoders;  // h_1..h_k
};

// Variables x_1..x_k, y_1..y_r; equations y_i = t_i(x) then x_j = h_j(y).
TermSystem embed_dispersion(const DispersionSpec& spec, EmbeddingNames* names = nullptr);

// Appends fresh projection inputs as outputs r+1..r' and unused inputs until
// there are at least k' inputs. Requires r' >= r and k' >= max(k, r').
DispersionSpec pad_dispersion(const DispersionSpec& spec, std::size_t outputs, std::size_t inputs);

}  // namespace termflow
