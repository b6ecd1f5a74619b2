#include "termflow/normalize.hpp"

#include <algorithm>
#include <set>

#include "termflow/error.hpp"

namespace termflow {

bool is_auxiliary(const std::string& name) { return name.rfind("_z", 0) == 0; }

// ---------------------------------------------------------------------------
// UnionFind

UnionFind::UnionFind(const std::vector<std::string>& names) {
  for (const auto& n : names) parent_.emplace(n, n);
}

bool UnionFind::precedes(const std::string& a, const std::string& b) {
  const bool aux_a = is_auxiliary(a);
  const bool aux_b = is_auxiliary(b);
  if (aux_a != aux_b) return !aux_a;
  return a < b;
}

const std::string& UnionFind::find(const std::string& name) {
  auto it = parent_.find(name);
  if (it == parent_.end()) it = parent_.emplace(name, name).first;
  if (it->second == name) return it->first;
  const std::string root = find(it->second);
  it->second = root;
  return parent_.find(root)->first;
}

bool UnionFind::unite(const std::string& a, const std::string& b) {
  const std::string ra = find(a);
  const std::string rb = find(b);
  if (ra == rb) return false;
  // The preferred representative stays the root.
  if (precedes(ra, rb))
    parent_[rb] = ra;
  else
    parent_[ra] = rb;
  return true;
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

bool is_flat_application(const Term& t) {
  return !t.is_variable() &&
         std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return a.is_variable(); });
}

NormalEquation from_flat(const Term& app, const std::string& defined) {
  NormalEquation eq{app.name(), {}, defined};
  for (const auto& a : app.args()) eq.args.push_back(a.name());
  return eq;
}

class Flattener {
 public:
  explicit Flattener(NormalSystem& out)
      : out_(out), taken_(out.variables.begin(), out.variables.end()) {}

  std::string name_of(const Term& t) {
    if (t.is_variable()) return t.name();
    if (auto it = aux_of_.find(t); it != aux_of_.end()) return it->second;
    NormalEquation eq{t.name(), {}, {}};
    for (const auto& a : t.args()) eq.args.push_back(name_of(a));
    eq.defined = fresh();
    out_.variables.push_back(eq.defined);
    out_.origin.emplace(eq.defined, t);
    aux_of_.emplace(t, eq.defined);
    out_.equations.push_back(std::move(eq));
    return out_.equations.back().defined;
  }

 private:
  std::string fresh() {
    for (;;) {
      std::string name = "_z" + std::to_string(counter_++);
      if (taken_.insert(name).second) return name;
    }
  }

  NormalSystem& out_;
  std::set<std::string> taken_;
  std::map<Term, std::string> aux_of_;
  std::size_t counter_ = 0;
};

NormalSystem substitute(const NormalSystem& system, UnionFind& uf, const std::string& stage,
                        std::vector<VariableMerge>* merges) {
  NormalSystem out;
  out.signature = system.signature;
  for (const auto& v : system.variables) {
    const std::string& rep = uf.find(v);
    if (rep == v) {
      out.variables.push_back(v);
      if (auto it = system.origin.find(v); it != system.origin.end()) out.origin.insert(*it);
    } else if (merges) {
      merges->push_back({stage, v, rep});
    }
  }
  for (const auto& eq : system.equations) {
    NormalEquation e{eq.symbol, {}, uf.find(eq.defined)};
    for (const auto& a : eq.args) e.args.push_back(uf.find(a));
    out.equations.push_back(std::move(e));
  }
  return out;
}

void drop_duplicate_equations(NormalSystem& system) {
  std::set<NormalEquation> seen;
  std::vector<NormalEquation> kept;
  for (auto& eq : system.equations)
    if (seen.insert(eq).second) kept.push_back(std::move(eq));
  system.equations = std::move(kept);
}

using LeftHandSide = std::pair<std::string, std::vector<std::string>>;

}  // namespace

NormalSystem flatten(const TermSystem& system) {
  NormalSystem out;
  out.variables = system.variables();
  out.signature = system.signature();
  Flattener flattener(out);
  for (const auto& eq : system.equations()) {
    const Term& l = eq.lhs;
    const Term& r = eq.rhs;
    if (l.is_variable() && r.is_variable()) {
      out.var_equalities.emplace_back(l.name(), r.name());
    } else if (is_flat_application(l) && r.is_variable()) {
      out.equations.push_back(from_flat(l, r.name()));
    } else if (l.is_variable() && is_flat_application(r)) {
      out.equations.push_back(from_flat(r, l.name()));
    } else {
      std::string lname = flattener.name_of(l);
      std::string rname = flattener.name_of(r);
      out.var_equalities.emplace_back(std::move(lname), std::move(rname));
    }
  }
  return out;
}

NormalSystem quotient_vars(const NormalSystem& system, std::vector<VariableMerge>* merges) {
  UnionFind uf(system.variables);
  for (const auto& [a, b] : system.var_equalities) uf.unite(a, b);
  return substitute(system, uf, "quotient_vars", merges);
}

NormalSystem collision_quotient(const NormalSystem& system, std::vector<VariableMerge>* merges,
                                std::size_t* rounds) {
  NormalSystem current =
      system.var_equalities.empty() ? system : quotient_vars(system, merges);
  std::size_t round = 0;
  for (;;) {
    std::map<LeftHandSide, std::string> first_rhs;
    UnionFind uf(current.variables);
    bool merged = false;
    for (const auto& eq : current.equations) {
      auto [it, inserted] = first_rhs.emplace(LeftHandSide{eq.symbol, eq.args}, eq.defined);
      if (!inserted) merged |= uf.unite(it->second, eq.defined);
    }
    if (!merged) break;
    ++round;
    current = substitute(current, uf, "collision_quotient", merges);
  }
  drop_duplicate_equations(current);
  if (rounds) *rounds = round;
  return current;
}

// ---------------------------------------------------------------------------
// Classification

Classification classify(const NormalSystem& system) {
  Classification c;
  std::map<std::string, std::set<NormalEquation>> definitions;
  for (const auto& eq : system.equations) definitions[eq.defined].insert(eq);
  for (const auto& v : system.variables) {
    if (definitions.contains(v))
      c.defined.push_back(v);
    else
      c.sources.push_back(v);
  }
  c.is_normal = system.var_equalities.empty();
  std::map<LeftHandSide, std::string> rhs_of;
  c.is_collision_free = true;
  for (const auto& eq : system.equations) {
    auto [it, inserted] = rhs_of.emplace(LeftHandSide{eq.symbol, eq.args}, eq.defined);
    if (!inserted && it->second != eq.defined) c.is_collision_free = false;
  }
  c.is_fnf = c.is_normal && std::all_of(definitions.begin(), definitions.end(),
                                        [](const auto& kv) { return kv.second.size() == 1; });
  c.is_cfnf = c.is_fnf && c.is_collision_free;
  return c;
}

// ---------------------------------------------------------------------------
// Diversification

std::string diversified_symbol(const std::string& symbol, std::size_t equation_index) {
  return symbol + "@" + std::to_string(equation_index);
}

NormalSystem diversify(const NormalSystem& system) {
  NormalSystem out = system;
  std::vector<Symbol> symbols;
  for (std::size_t i = 0; i < out.equations.size(); ++i) {
    auto& eq = out.equations[i];
    const std::string fresh = diversified_symbol(eq.symbol, i);
    symbols.push_back({fresh, eq.args.size()});
    eq.symbol = fresh;
  }
  out.signature = Signature(std::move(symbols));
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

std::pair<NormalSystem, PipelineReport> pipeline(const TermSystem& system) {
  PipelineReport report;
  NormalSystem flat = flatten(system);
  report.stages.push_back("flatten");
  for (const auto& v : flat.variables)
    if (flat.origin.contains(v)) report.auxiliaries.push_back(v);

  NormalSystem quotiented = quotient_vars(flat, &report.merges);
  report.stages.push_back("quotient_vars");

  NormalSystem result = collision_quotient(quotiented, &report.merges, &report.collision_rounds);
  report.stages.push_back("collision_quotient");

  report.classification = classify(result);
  report.stages.push_back("classify");
  return {std::move(result), std::move(report)};
}

TermSystem to_term_system(const NormalSystem& system) {
  std::vector<Equation> eqs;
  for (const auto& eq : system.equations) {
    std::vector<Term> args;
    for (const auto& a : eq.args) args.push_back(Term::variable(a));
    eqs.push_back({Term::apply(eq.symbol, std::move(args)), Term::variable(eq.defined)});
  }
  for (const auto& [a, b] : system.var_equalities)
    eqs.push_back({Term::variable(a), Term::variable(b)});
  return TermSystem(system.variables, system.signature, std::move(eqs));
}

// ---------------------------------------------------------------------------
// Dispersion embedding and padding

namespace {

// "<prefix><i>" for i in [first, last], lengthening the prefix until no name
// clashes with `taken`.
std::vector<std::string> fresh_family(std::string prefix, std::size_t first, std::size_t last,
                                      const std::set<std::string>& taken) {
  for (;;) {
    std::vector<std::string> names;
    bool clash = false;
    for (std::size_t i = first; i <= last && !clash; ++i) {
      names.push_back(prefix + std::to_string(i));
      clash = taken.contains(names.back());
    }
    if (!clash) return names;
    prefix += prefix.front();
  }
}

std::set<std::string> names_in_use(const DispersionSpec& spec) {
  std::set<std::string> taken(spec.inputs().begin(), spec.inputs().end());
  for (const auto& s : spec.signature().symbols()) taken.insert(s.name);
  return taken;
}

}  // namespace

TermSystem embed_dispersion(const DispersionSpec& spec, EmbeddingNames* names) {
  const std::size_t k = spec.input_count();
  const std::size_t r = spec.output_count();
  auto taken = names_in_use(spec);
  auto ys = fresh_family("y", 1, r, taken);
  taken.insert(ys.begin(), ys.end());
  auto hs = fresh_family("h", 1, k, taken);

  std::vector<std::string> vars = spec.inputs();
  vars.insert(vars.end(), ys.begin(), ys.end());
  std::vector<Symbol> symbols = spec.signature().symbols();
  for (const auto& h : hs) symbols.push_back({h, r});

  std::vector<Equation> eqs;
  for (std::size_t i = 0; i < r; ++i) eqs.push_back({Term::variable(ys[i]), spec.outputs()[i]});
  std::vector<Term> y_terms;
  for (const auto& y : ys) y_terms.push_back(Term::variable(y));
  for (std::size_t j = 0; j < k; ++j)
    eqs.push_back({Term::variable(spec.inputs()[j]), Term::apply(hs[j], y_terms)});

  if (names) *names = {ys, hs};
  return TermSystem(std::move(vars), Signature(std::move(symbols)), std::move(eqs));
}

DispersionSpec pad_dispersion(const DispersionSpec& spec, std::size_t outputs, std::size_t inputs) {
  const std::size_t k = spec.input_count();
  const std::size_t r = spec.output_count();
  if (outputs < r)
    throw PreconditionError("padding cannot drop outputs (r'=" + std::to_string(outputs) +
                            " < r=" + std::to_string(r) + ")");
  if (inputs < std::max(k, outputs))
    throw PreconditionError("padding needs k' >= max(k, r')");
  // Each new output projects onto its own fresh input; k' is a lower bound on
  // the final input count.
  const std::size_t total_inputs = std::max(inputs, k + (outputs - r));
  if (total_inputs == k && outputs == r) return spec;

  auto fresh = fresh_family("x", 1, outputs + total_inputs, names_in_use(spec));

  std::vector<std::string> new_inputs = spec.inputs();
  std::vector<Term> new_outputs = spec.outputs();
  for (std::size_t i = r + 1; i <= outputs; ++i) {
    new_inputs.push_back(fresh[i - 1]);
    new_outputs.push_back(Term::variable(fresh[i - 1]));
  }
  // Unused inputs are named by their final position when that name is free.
  std::set<std::string> used(new_inputs.begin(), new_inputs.end());
  for (std::size_t i = new_inputs.size() + 1; new_inputs.size() < total_inputs; ++i) {
    if (used.insert(fresh[i - 1]).second) new_inputs.push_back(fresh[i - 1]);
  }
  return DispersionSpec(std::move(new_inputs), spec.signature(), std::move(new_outputs));
}

}  // namespace termflow
