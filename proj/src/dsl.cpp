#include "termflow/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "termflow/error.hpp"

namespace termflow {
namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tok.kind = Tok::End;
        out.push_back(tok);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = Tok::Ident;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) tok.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        tok.kind = Tok::Number;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          tok.text += advance();
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        tok.kind = Tok::Punct;
        tok.text = "->";
        advance();
        advance();
      } else if (std::string_view("{}();,/=").find(c) != std::string_view::npos) {
        tok.kind = Tok::Punct;
        tok.text = std::string(1, advance());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '@';
  }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Ident:
      return "identifier '" + t.text + "'";
    case Tok::Number:
      return "number " + t.text;
    case Tok::Punct:
      return "'" + t.text + "'";
  }
  return "token";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  InstanceKind peek_kind() const {
    const auto& t = tokens_.front();
    if (t.kind == Tok::Ident) {
      if (t.text == "instance") return InstanceKind::System;
      if (t.text == "dispersion") return InstanceKind::Dispersion;
      if (t.text == "graph") return InstanceKind::Graph;
    }
    throw ParseError("expected 'instance', 'dispersion' or 'graph', found " + describe(t), t.line,
                     t.column);
  }

  TermSystem system() {
    keyword("instance");
    punct("{");
    keyword("vars");
    auto vars = id_list(/*allow_empty=*/true);
    declare_scope(vars, "variable");
    punct(";");
    keyword("sig");
    Signature sig = signature();
    punct(";");
    std::vector<Equation> eqs;
    while (is_keyword("eq")) {
      next();
      Term lhs = term(sig);
      punct("=");
      Term rhs = term(sig);
      punct(";");
      eqs.push_back({std::move(lhs), std::move(rhs)});
    }
    punct("}");
    expect_end();
    return TermSystem(names(vars), std::move(sig), std::move(eqs));
  }

  DispersionSpec dispersion() {
    keyword("dispersion");
    punct("{");
    keyword("inputs");
    auto inputs = id_list(/*allow_empty=*/false);
    declare_scope(inputs, "input");
    punct(";");
    keyword("sig");
    Signature sig = signature();
    punct(";");
    keyword("outputs");
    std::vector<Term> outputs;
    outputs.push_back(term(sig));
    while (is_punct(",")) {
      next();
      outputs.push_back(term(sig));
    }
    punct(";");
    punct("}");
    expect_end();
    return DispersionSpec(names(inputs), std::move(sig), std::move(outputs));
  }

  DependencyGraph graph() {
    keyword("graph");
    punct("{");
    keyword("nodes");
    auto nodes = id_list(/*allow_empty=*/true);
    declare_scope(nodes, "node");
    punct(";");
    keyword("sources");
    auto sources = id_list(/*allow_empty=*/true);
    std::set<std::string> seen_sources;
    for (const auto& s : sources) {
      check_in_scope(s, "node");
      if (!seen_sources.insert(s.text).second)
        throw ParseError("duplicate source '" + s.text + "'", s.line, s.column);
    }
    punct(";");
    std::vector<std::pair<std::string, std::string>> edges;
    while (is_keyword("edge")) {
      next();
      Token from = identifier();
      check_in_scope(from, "node");
      punct("->");
      Token to = identifier();
      check_in_scope(to, "node");
      punct(";");
      edges.emplace_back(from.text, to.text);
    }
    punct("}");
    expect_end();
    return DependencyGraph(names(nodes), edges, names(sources));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    throw ParseError("expected " + expected + ", found " + describe(t), t.line, t.column);
  }

  bool is_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  void keyword(std::string_view kw) {
    if (!is_keyword(kw)) fail("'" + std::string(kw) + "'");
    next();
  }
  void punct(std::string_view p) {
    if (!is_punct(p)) fail("'" + std::string(p) + "'");
    next();
  }
  void expect_end() const {
    if (peek().kind != Tok::End) fail("end of input");
  }

  Token identifier() {
    if (peek().kind != Tok::Ident) fail("identifier");
    Token t = next();
    if (is_reserved_identifier(t.text))
      throw ParseError("identifier '" + t.text + "' is reserved (leading '_' or '@')", t.line,
                       t.column);
    return t;
  }

  std::vector<Token> id_list(bool allow_empty) {
    std::vector<Token> out;
    if (allow_empty && is_punct(";")) return out;
    out.push_back(identifier());
    while (is_punct(",")) {
      next();
      out.push_back(identifier());
    }
    return out;
  }

  static std::vector<std::string> names(const std::vector<Token>& toks) {
    std::vector<std::string> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(t.text);
    return out;
  }

  void declare_scope(const std::vector<Token>& toks, const char* what) {
    scope_.clear();
    for (const auto& t : toks) {
      if (!scope_.insert(t.text).second)
        throw ParseError(std::string("duplicate ") + what + " '" + t.text + "'", t.line, t.column);
    }
  }

  void check_in_scope(const Token& t, const char* what) const {
    if (!scope_.contains(t.text))
      throw ParseError(std::string("undeclared ") + what + " '" + t.text + "'", t.line, t.column);
  }

  Signature signature() {
    std::vector<Symbol> symbols;
    if (is_punct(";")) return Signature{};
    for (;;) {
      Token name = identifier();
      punct("/");
      if (peek().kind != Tok::Number) fail("arity");
      const Token& arity = next();
      if (arity.text.size() > 4) throw ParseError("arity too large", arity.line, arity.column);
      if (std::any_of(symbols.begin(), symbols.end(),
                      [&](const Symbol& s) { return s.name == name.text; }))
        throw ParseError("duplicate symbol '" + name.text + "'", name.line, name.column);
      if (scope_.contains(name.text))
        throw ParseError("symbol '" + name.text + "' clashes with a variable", name.line,
                         name.column);
      symbols.push_back({name.text, static_cast<std::size_t>(std::stoul(arity.text))});
      if (!is_punct(",")) break;
      next();
    }
    return Signature(std::move(symbols));
  }

  Term term(const Signature& sig) {
    Token head = identifier();
    if (!is_punct("(")) {
      if (sig.contains(head.text))
        throw ParseError("symbol '" + head.text + "' used without parentheses", head.line,
                         head.column);
      check_in_scope(head, "variable");
      return Term::variable(head.text);
    }
    const Token open = next();
    auto idx = sig.index_of(head.text);
    if (!idx) throw ParseError("undeclared symbol '" + head.text + "'", head.line, head.column);
    std::vector<Term> args;
    if (!is_punct(")")) {
      for (;;) {
        args.push_back(term(sig));
        if (is_punct(",")) {
          next();
          continue;
        }
        if (is_punct(")")) break;
        throw ParseError("unmatched '(': expected ',' or ')', found " + describe(peek()),
                         open.line, open.column);
      }
    }
    next();  // ')'
    const auto arity = sig.symbols()[*idx].arity;
    if (arity != args.size())
      throw ParseError("arity mismatch: '" + head.text + "' has arity " + std::to_string(arity) +
                           " but is applied to " + std::to_string(args.size()) + " argument(s)",
                       head.line, head.column);
    return Term::apply(head.text, std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> scope_;
};

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

template <class F>
auto rethrow_positioned(F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const WellFormednessError& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

}  // namespace

TermSystem parse_system(std::string_view text) {
  return rethrow_positioned([&] { return Parser(text).system(); });
}

DispersionSpec parse_dispersion(std::string_view text) {
  return rethrow_positioned([&] { return Parser(text).dispersion(); });
}

DependencyGraph parse_graph(std::string_view text) {
  return rethrow_positioned([&] { return Parser(text).graph(); });
}

Parsed parse(std::string_view text, InstanceKind kind) {
  switch (kind) {
    case InstanceKind::System:
      return parse_system(text);
    case InstanceKind::Dispersion:
      return parse_dispersion(text);
    case InstanceKind::Graph:
      return parse_graph(text);
  }
  throw ParseError("unknown instance kind", 0, 0);
}

Parsed parse(std::string_view text) { return parse(text, Parser(text).peek_kind()); }

std::string kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::System:
      return "instance";
    case InstanceKind::Dispersion:
      return "dispersion";
    case InstanceKind::Graph:
      return "graph";
  }
  return "unknown";
}

InstanceKind kind_of(const Parsed& parsed) { return static_cast<InstanceKind>(parsed.index()); }

std::string render(const Term& t) {
  if (t.is_variable()) return t.name();
  std::vector<std::string> args;
  for (const auto& a : t.args()) args.push_back(render(a));
  return t.name() + "(" + join(args, ", ") + ")";
}

std::string render(const Equation& eq) { return render(eq.lhs) + " = " + render(eq.rhs); }

std::string render(const Signature& sig) {
  std::vector<std::string> parts;
  for (const auto& s : sig.symbols()) parts.push_back(s.name + "/" + std::to_string(s.arity));
  return join(parts, ", ");
}

std::string render(const TermSystem& system) {
  std::ostringstream out;
  out << "instance {\n";
  out << "  vars " << join(system.variables(), ", ") << ";\n";
  out << "  sig " << render(system.signature()) << ";\n";
  for (const auto& eq : system.equations()) out << "  eq " << render(eq) << ";\n";
  out << "}\n";
  return out.str();
}

std::string render(const DispersionSpec& spec) {
  std::vector<std::string> outs;
  for (const auto& t : spec.outputs()) outs.push_back(render(t));
  std::ostringstream out;
  out << "dispersion {\n";
  out << "  inputs " << join(spec.inputs(), ", ") << ";\n";
  out << "  sig " << render(spec.signature()) << ";\n";
  out << "  outputs " << join(outs, ", ") << ";\n";
  out << "}\n";
  return out.str();
}

std::string render(const DependencyGraph& graph) {
  std::ostringstream out;
  out << "graph {\n";
  out << "  nodes " << join(graph.vertices(), ", ") << ";\n";
  out << "  sources " << join(graph.sources(), ", ") << ";\n";
  for (const auto& [u, v] : graph.edges())
    out << "  edge " << graph.vertices()[u] << " -> " << graph.vertices()[v] << ";\n";
  out << "}\n";
  return out.str();
}

std::string render(const Parsed& parsed) {
  return std::visit([](const auto& value) { return render(value); }, parsed);
}

}  // namespace termflow
