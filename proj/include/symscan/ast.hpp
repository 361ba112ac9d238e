#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symscan/rational.hpp"
#include "symscan/span.hpp"

namespace symscan {

enum class ValueKind { Real, NonNegReal, Boolean, Discrete };

inline const char* value_kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::Real: return "real";
    case ValueKind::NonNegReal: return "real+";
    case ValueKind::Boolean: return "bool";
    case ValueKind::Discrete: return "discrete";
  }
  return "?";
}

// A literal in the model language: an exact rational or a boolean.
struct Literal {
  bool is_bool = false;
  Rat value;
  bool bool_value = false;

  static Literal rational(Rat q) { return {false, std::move(q), false}; }
  static Literal boolean(bool b) { return {true, Rat(0), b}; }
  bool operator==(const Literal&) const = default;

  std::string str() const {
    if (is_bool) return bool_value ? "true" : "false";
    return rat_str(value);
  }
};

// Index expression as written: either an integer literal or a name that
// model building resolves to a range symbol or a random (discrete) index.
struct AstIndex {
  bool is_literal = false;
  long literal = 0;
  std::string name;
  bool operator==(const AstIndex&) const = default;

  std::string str() const {
    return is_literal ? std::to_string(literal) : name;
  }
};

struct LVal {
  std::string name;
  std::vector<AstIndex> indices;
  SourceSpan span;

  bool operator==(const LVal& o) const {
    return name == o.name && indices == o.indices;
  }
  std::string str() const {
    std::string out = name;
    if (!indices.empty()) {
      out += "[";
      for (size_t i = 0; i < indices.size(); ++i) {
        if (i) out += ",";
        out += indices[i].str();
      }
      out += "]";
    }
    return out;
  }
};

struct Arg {
  bool is_literal = false;
  Literal literal;
  LVal lval;

  bool operator==(const Arg& o) const {
    return is_literal == o.is_literal &&
           (is_literal ? literal == o.literal : lval == o.lval);
  }
  std::string str() const { return is_literal ? literal.str() : lval.str(); }
};

enum class PriorMod { Default, Likelihood, Prior };

struct RangeDeclStmt {
  std::string name;
  long size = 1;
  SourceSpan span;
};

struct VarDeclStmt {
  std::string name;
  ValueKind kind = ValueKind::Real;
  std::string discrete_range;  // set when kind == Discrete
  std::vector<std::string> dims;
  SourceSpan span;
};

struct ObserveStmt {
  LVal target;
  std::optional<Literal> value;  // absent: observed with unknown value
  SourceSpan span;
};

struct FactorStmtNode {
  LVal output;
  std::string kind_name;
  std::vector<Arg> args;
  bool is_distribution = false;  // written with '~' rather than '='
  PriorMod modifier = PriorMod::Default;
  SourceSpan span;
};

struct IfStmtNode;

using Stmt = std::variant<RangeDeclStmt, VarDeclStmt, ObserveStmt,
                          FactorStmtNode, IfStmtNode>;

struct IfStmtNode {
  LVal condition;
  std::vector<Stmt> then_block;
  std::vector<Stmt> else_block;
  SourceSpan span;
};

struct ParsedModel {
  std::string name;
  std::vector<Stmt> statements;
};

// ---------------------------------------------------------------------------
// Pretty printing (round-trips through the parser)
// ---------------------------------------------------------------------------

namespace detail {
inline void print_stmt(const Stmt& s, std::string& out, int indent);

inline void print_block(const std::vector<Stmt>& stmts, std::string& out,
                        int indent) {
  for (const auto& s : stmts) print_stmt(s, out, indent);
}

inline void print_stmt(const Stmt& s, std::string& out, int indent) {
  std::string pad(size_t(indent) * 2, ' ');
  if (auto* r = std::get_if<RangeDeclStmt>(&s)) {
    out += pad + "range " + r->name + " = " + std::to_string(r->size) + ";\n";
  } else if (auto* v = std::get_if<VarDeclStmt>(&s)) {
    out += pad;
    if (v->kind == ValueKind::Discrete)
      out += "discrete(" + v->discrete_range + ")";
    else
      out += value_kind_name(v->kind);
    out += " " + v->name;
    if (!v->dims.empty()) {
      out += "[";
      for (size_t i = 0; i < v->dims.size(); ++i) {
        if (i) out += ",";
        out += v->dims[i];
      }
      out += "]";
    }
    out += ";\n";
  } else if (auto* o = std::get_if<ObserveStmt>(&s)) {
    out += pad + "observe " + o->target.str();
    if (o->value) out += " = " + o->value->str();
    out += ";\n";
  } else if (auto* f = std::get_if<FactorStmtNode>(&s)) {
    out += pad + f->output.str() + (f->is_distribution ? " ~ " : " = ") +
           f->kind_name + "(";
    for (size_t i = 0; i < f->args.size(); ++i) {
      if (i) out += ", ";
      out += f->args[i].str();
    }
    out += ")";
    if (f->modifier == PriorMod::Likelihood) out += " likelihood";
    if (f->modifier == PriorMod::Prior) out += " prior";
    out += ";\n";
  } else if (auto* i = std::get_if<IfStmtNode>(&s)) {
    out += pad + "if (" + i->condition.str() + ") {\n";
    print_block(i->then_block, out, indent + 1);
    out += pad + "}";
    if (!i->else_block.empty()) {
      out += " else {\n";
      print_block(i->else_block, out, indent + 1);
      out += pad + "}";
    }
    out += "\n";
  }
}
}  // namespace detail

inline std::string pretty_print(const ParsedModel& m) {
  std::string out = "model " + m.name + " {\n";
  detail::print_block(m.statements, out, 1);
  out += "}\n";
  return out;
}

// Structural equality ignoring spans, for the parse/print round-trip check.
bool stmt_equal(const Stmt& a, const Stmt& b);

inline bool block_equal(const std::vector<Stmt>& a,
                        const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(a[i], b[i])) return false;
  return true;
}

inline bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<RangeDeclStmt>(&a)) {
    auto* y = std::get_if<RangeDeclStmt>(&b);
    return x->name == y->name && x->size == y->size;
  }
  if (auto* x = std::get_if<VarDeclStmt>(&a)) {
    auto* y = std::get_if<VarDeclStmt>(&b);
    return x->name == y->name && x->kind == y->kind &&
           x->discrete_range == y->discrete_range && x->dims == y->dims;
  }
  if (auto* x = std::get_if<ObserveStmt>(&a)) {
    auto* y = std::get_if<ObserveStmt>(&b);
    return x->target == y->target && x->value == y->value;
  }
  if (auto* x = std::get_if<FactorStmtNode>(&a)) {
    auto* y = std::get_if<FactorStmtNode>(&b);
    return x->output == y->output && x->kind_name == y->kind_name &&
           x->args == y->args && x->is_distribution == y->is_distribution &&
           x->modifier == y->modifier;
  }
  auto* x = std::get_if<IfStmtNode>(&a);
  auto* y = std::get_if<IfStmtNode>(&b);
  return x->condition == y->condition &&
         block_equal(x->then_block, y->then_block) &&
         block_equal(x->else_block, y->else_block);
}

}  // namespace symscan
