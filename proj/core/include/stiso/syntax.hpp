#pragma once

// Abstract syntax for session types, expressions and processes, plus the
// structural helpers everything else builds on: duality, free variables,
// substitution and alpha-equivalence.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stiso {

enum class Base { Unit, Bool, Int };

const char* base_name(Base b);

enum class Chan { L, R };

inline Chan co(Chan c) { return c == Chan::L ? Chan::R : Chan::L; }
inline char chan_name(Chan c) { return c == Chan::L ? 'l' : 'r'; }

enum class Sel { Inl, Inr };

inline const char* sel_name(Sel s) { return s == Sel::Inl ? "inl" : "inr"; }

struct Value {
  Base type = Base::Unit;
  bool b = false;
  std::int64_t i = 0;

  static Value unit() { return {}; }
  static Value boolean(bool v) { return {Base::Bool, v, 0}; }
  static Value integer(std::int64_t v) { return {Base::Int, false, v}; }

  bool operator==(const Value& o) const {
    if (type != o.type) return false;
    switch (type) {
      case Base::Unit: return true;
      case Base::Bool: return b == o.b;
      case Base::Int: return i == o.i;
    }
    return false;
  }
};

std::string value_text(const Value& v);

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Lit, Eq, Add };
  Kind kind;
  std::string name;  // Var
  Value lit;         // Lit
  ExprPtr a, b;      // Eq, Add
};

ExprPtr evar(std::string name);
ExprPtr elit(Value v);
ExprPtr eeq(ExprPtr a, ExprPtr b);
ExprPtr eadd(ExprPtr a, ExprPtr b);

void free_vars(const ExprPtr& e, std::set<std::string>& out);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// ---------------------------------------------------------------------------
// Session types

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { End, Out, In, Select, Branch, Meta };
  Kind kind;
  Base payload = Base::Unit;  // Out, In
  TypePtr a, b;               // Out/In: a = continuation; Select/Branch: children
  int meta = 0;               // Meta: variable index
  bool meta_dual = false;     // Meta: stands for the dual of the variable
};

TypePtr tend();
TypePtr tout(Base t, TypePtr cont);
TypePtr tin(Base t, TypePtr cont);
TypePtr tselect(TypePtr l, TypePtr r);
TypePtr tbranch(TypePtr l, TypePtr r);
TypePtr tmeta(int idx, bool dual = false);

TypePtr dual(const TypePtr& t);
bool type_equal(const TypePtr& a, const TypePtr& b);
bool type_has_meta(const TypePtr& t);
std::size_t type_size(const TypePtr& t);

// Total order used for canonical normal forms: node kind rank, then payload
// (unit < bool < int), then children. Returns <0, 0, >0.
int type_compare(const TypePtr& a, const TypePtr& b);

// ---------------------------------------------------------------------------
// Processes

struct Proc;
using ProcPtr = std::shared_ptr<const Proc>;

struct Proc {
  enum class Kind { Idle, Input, Output, SelectP, BranchP, Cond, Par };
  Kind kind;
  Chan chan = Chan::L;      // Input, Output, SelectP, BranchP
  std::string var;          // Input binder
  Base base = Base::Unit;   // Input annotation
  ExprPtr expr;             // Output payload, Cond guard
  Sel sel = Sel::Inl;       // SelectP
  ProcPtr a, b;             // continuation / children
};

ProcPtr pidle();
ProcPtr pinput(Chan c, std::string var, Base t, ProcPtr cont);
ProcPtr poutput(Chan c, ExprPtr e, ProcPtr cont);
ProcPtr pselect(Chan c, Sel s, ProcPtr cont);
ProcPtr pbranch(Chan c, ProcPtr inl, ProcPtr inr);
ProcPtr pcond(ExprPtr guard, ProcPtr then_p, ProcPtr else_p);
ProcPtr ppar(ProcPtr l, ProcPtr r);

void free_vars(const ProcPtr& p, std::set<std::string>& out);
std::set<std::string> free_vars(const ProcPtr& p);
bool is_closed(const ProcPtr& p);
std::size_t proc_size(const ProcPtr& p);

// Capture-avoiding substitution of a value for a variable (Table 1 comm).
ProcPtr substitute(const ProcPtr& p, const std::string& var, const Value& v);
// Capture-avoiding substitution of an expression for a variable (symbolic
// reduction substitutes variables; values also pass through here).
ProcPtr substitute_expr(const ProcPtr& p, const std::string& var, const ExprPtr& e);
ExprPtr substitute_expr(const ExprPtr& in, const std::string& var, const ExprPtr& e);

bool alpha_eq(const ProcPtr& p, const ProcPtr& q);

// Deterministic renaming of bound variables (b0, b1, ...). When
// `unit_outputs` is set, an output payload that is a unit-typed bound
// variable prints as (); x : unit can only ever be (), so this folds the
// distinction away. Used for memoization keys and id-recognition.
std::string normal_key(const ProcPtr& p, bool unit_outputs = false);

std::string fresh_var(const std::set<std::string>& avoid, const std::string& hint);

// ---------------------------------------------------------------------------
// Concrete syntax

struct ParseError : std::runtime_error {
  int line, column;
  std::string expected;
  ParseError(std::string msg, int line, int column, std::string expected);
};

TypePtr parse_type(const std::string& text);
ProcPtr parse_process(const std::string& text);
ExprPtr parse_expression(const std::string& text);

std::string print_type(const TypePtr& t);
std::string print_process(const ProcPtr& p);
std::string print_expr(const ExprPtr& e);

}  // namespace stiso
