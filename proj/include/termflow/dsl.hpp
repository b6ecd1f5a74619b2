#pragma once

// Reader and writer for the instance DSL:
//
//   instance   { vars x, y; sig f/1, c/0; eq f(x) = y; eq c() = x; }
//   dispersion { inputs x, y; sig f/2; outputs f(x, y), x; }
//   graph      { nodes a, b; sources a; edge a -> b; }
//
// Constants are always written with parentheses, `#` starts a line comment.
// render() output reparses to a structurally equal value.

#include <string>
#include <string_view>
#include <variant>

#include "termflow/depgraph.hpp"
#include "termflow/term.hpp"

namespace termflow {

enum class InstanceKind { System, Dispersion, Graph };

using Parsed = std::variant<TermSystem, DispersionSpec, DependencyGraph>;

// All parse functions throw ParseError with a 1-based line/column.
TermSystem parse_system(std::string_view text);
DispersionSpec parse_dispersion(std::string_view text);
DependencyGraph parse_graph(std::string_view text);
Parsed parse(std::string_view text, InstanceKind kind);
// Dispatches on the leading keyword.
Parsed parse(std::string_view text);

std::string kind_name(InstanceKind kind);
InstanceKind kind_of(const Parsed& parsed);

std::string render(const Term& t);
std::string render(const Equation& eq);
std::string render(const Signature& sig);
std::string render(const TermSystem& system);
std::string render(const DispersionSpec& spec);
std::string render(const DependencyGraph& graph);
std::string render(const Parsed& parsed);

}  // namespace termflow
