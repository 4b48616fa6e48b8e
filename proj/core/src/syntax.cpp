#include "stiso/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace stiso {

const char* base_name(Base b) {
  switch (b) {
    case Base::Unit: return "unit";
    case Base::Bool: return "bool";
    case Base::Int: return "int";
  }
  return "?";
}

std::string value_text(const Value& v) {
  switch (v.type) {
    case Base::Unit: return "()";
    case Base::Bool: return v.b ? "true" : "false";
    case Base::Int: return std::to_string(v.i);
  }
  return "?";
}

ExprPtr evar(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr elit(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = v;
  return e;
}

static ExprPtr ebin(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr eeq(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Eq, std::move(a), std::move(b)); }
ExprPtr eadd(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Add, std::move(a), std::move(b)); }

void free_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::Var: out.insert(e->name); break;
    case Expr::Kind::Lit: break;
    case Expr::Kind::Eq:
    case Expr::Kind::Add:
      free_vars(e->a, out);
      free_vars(e->b, out);
      break;
  }
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Lit: return a->lit == b->lit;
    case Expr::Kind::Eq:
    case Expr::Kind::Add:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
  return false;
}

// ---------------------------------------------------------------------------

TypePtr tend() {
  static TypePtr e = [] {
    auto t = std::make_shared<Type>();
    t->kind = Type::Kind::End;
    return t;
  }();
  return e;
}

static TypePtr tprefix(Type::Kind k, Base t, TypePtr cont) {
  auto n = std::make_shared<Type>();
  n->kind = k;
  n->payload = t;
  n->a = std::move(cont);
  return n;
}

TypePtr tout(Base t, TypePtr cont) { return tprefix(Type::Kind::Out, t, std::move(cont)); }
TypePtr tin(Base t, TypePtr cont) { return tprefix(Type::Kind::In, t, std::move(cont)); }

static TypePtr tchoice(Type::Kind k, TypePtr l, TypePtr r) {
  auto n = std::make_shared<Type>();
  n->kind = k;
  n->a = std::move(l);
  n->b = std::move(r);
  return n;
}

TypePtr tselect(TypePtr l, TypePtr r) { return tchoice(Type::Kind::Select, std::move(l), std::move(r)); }
TypePtr tbranch(TypePtr l, TypePtr r) { return tchoice(Type::Kind::Branch, std::move(l), std::move(r)); }

TypePtr tmeta(int idx, bool dual) {
  auto n = std::make_shared<Type>();
  n->kind = Type::Kind::Meta;
  n->meta = idx;
  n->meta_dual = dual;
  return n;
}

TypePtr dual(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::End: return t;
    case Type::Kind::Out: return tin(t->payload, dual(t->a));
    case Type::Kind::In: return tout(t->payload, dual(t->a));
    case Type::Kind::Select: return tbranch(dual(t->a), dual(t->b));
    case Type::Kind::Branch: return tselect(dual(t->a), dual(t->b));
    case Type::Kind::Meta: return tmeta(t->meta, !t->meta_dual);
  }
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::End: return true;
    case Type::Kind::Out:
    case Type::Kind::In:
      return a->payload == b->payload && type_equal(a->a, b->a);
    case Type::Kind::Select:
    case Type::Kind::Branch:
      return type_equal(a->a, b->a) && type_equal(a->b, b->b);
    case Type::Kind::Meta:
      return a->meta == b->meta && a->meta_dual == b->meta_dual;
  }
  return false;
}

bool type_has_meta(const TypePtr& t) {
  if (!t) return false;
  if (t->kind == Type::Kind::Meta) return true;
  return type_has_meta(t->a) || type_has_meta(t->b);
}

std::size_t type_size(const TypePtr& t) {
  if (!t) return 0;
  return 1 + type_size(t->a) + type_size(t->b);
}

static int kind_rank(Type::Kind k) {
  switch (k) {
    case Type::Kind::End: return 0;
    case Type::Kind::Out: return 1;
    case Type::Kind::In: return 2;
    case Type::Kind::Select: return 3;
    case Type::Kind::Branch: return 4;
    case Type::Kind::Meta: return 5;
  }
  return 6;
}

int type_compare(const TypePtr& a, const TypePtr& b) {
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case Type::Kind::End: return 0;
    case Type::Kind::Out:
    case Type::Kind::In: {
      int pa = static_cast<int>(a->payload), pb = static_cast<int>(b->payload);
      if (pa != pb) return pa < pb ? -1 : 1;
      return type_compare(a->a, b->a);
    }
    case Type::Kind::Select:
    case Type::Kind::Branch: {
      int c = type_compare(a->a, b->a);
      if (c != 0) return c;
      return type_compare(a->b, b->b);
    }
    case Type::Kind::Meta: {
      if (a->meta != b->meta) return a->meta < b->meta ? -1 : 1;
      if (a->meta_dual != b->meta_dual) return a->meta_dual ? 1 : -1;
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

ProcPtr pidle() {
  static ProcPtr z = [] {
    auto p = std::make_shared<Proc>();
    p->kind = Proc::Kind::Idle;
    return p;
  }();
  return z;
}

ProcPtr pinput(Chan c, std::string var, Base t, ProcPtr cont) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Input;
  p->chan = c;
  p->var = std::move(var);
  p->base = t;
  p->a = std::move(cont);
  return p;
}

ProcPtr poutput(Chan c, ExprPtr e, ProcPtr cont) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Output;
  p->chan = c;
  p->expr = std::move(e);
  p->a = std::move(cont);
  return p;
}

ProcPtr pselect(Chan c, Sel s, ProcPtr cont) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::SelectP;
  p->chan = c;
  p->sel = s;
  p->a = std::move(cont);
  return p;
}

ProcPtr pbranch(Chan c, ProcPtr inl, ProcPtr inr) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::BranchP;
  p->chan = c;
  p->a = std::move(inl);
  p->b = std::move(inr);
  return p;
}

ProcPtr pcond(ExprPtr guard, ProcPtr then_p, ProcPtr else_p) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Cond;
  p->expr = std::move(guard);
  p->a = std::move(then_p);
  p->b = std::move(else_p);
  return p;
}

ProcPtr ppar(ProcPtr l, ProcPtr r) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Par;
  p->a = std::move(l);
  p->b = std::move(r);
  return p;
}

void free_vars(const ProcPtr& p, std::set<std::string>& out) {
  if (!p) return;
  switch (p->kind) {
    case Proc::Kind::Idle: break;
    case Proc::Kind::Input: {
      std::set<std::string> inner;
      free_vars(p->a, inner);
      inner.erase(p->var);
      out.insert(inner.begin(), inner.end());
      break;
    }
    case Proc::Kind::Output:
      free_vars(p->expr, out);
      free_vars(p->a, out);
      break;
    case Proc::Kind::SelectP:
      free_vars(p->a, out);
      break;
    case Proc::Kind::BranchP:
    case Proc::Kind::Par:
      free_vars(p->a, out);
      free_vars(p->b, out);
      break;
    case Proc::Kind::Cond:
      free_vars(p->expr, out);
      free_vars(p->a, out);
      free_vars(p->b, out);
      break;
  }
}

std::set<std::string> free_vars(const ProcPtr& p) {
  std::set<std::string> out;
  free_vars(p, out);
  return out;
}

bool is_closed(const ProcPtr& p) { return free_vars(p).empty(); }

std::size_t proc_size(const ProcPtr& p) {
  if (!p) return 0;
  return 1 + proc_size(p->a) + proc_size(p->b);
}

std::string fresh_var(const std::set<std::string>& avoid, const std::string& hint) {
  if (!avoid.count(hint)) return hint;
  for (int i = 0;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

ExprPtr substitute_expr(const ExprPtr& in, const std::string& var, const ExprPtr& e) {
  if (!in) return in;
  switch (in->kind) {
    case Expr::Kind::Var: return in->name == var ? e : in;
    case Expr::Kind::Lit: return in;
    case Expr::Kind::Eq: return eeq(substitute_expr(in->a, var, e), substitute_expr(in->b, var, e));
    case Expr::Kind::Add: return eadd(substitute_expr(in->a, var, e), substitute_expr(in->b, var, e));
  }
  return in;
}

ProcPtr substitute_expr(const ProcPtr& p, const std::string& var, const ExprPtr& e) {
  if (!p) return p;
  switch (p->kind) {
    case Proc::Kind::Idle: return p;
    case Proc::Kind::Input: {
      if (p->var == var) return p;  // shadowed
      std::set<std::string> evars;
      free_vars(e, evars);
      if (evars.count(p->var)) {
        // rename the binder away from e's variables
        std::set<std::string> avoid = evars;
        free_vars(p->a, avoid);
        avoid.insert(var);
        std::string nv = fresh_var(avoid, p->var);
        ProcPtr body = substitute_expr(p->a, p->var, evar(nv));
        return pinput(p->chan, nv, p->base, substitute_expr(body, var, e));
      }
      return pinput(p->chan, p->var, p->base, substitute_expr(p->a, var, e));
    }
    case Proc::Kind::Output:
      return poutput(p->chan, substitute_expr(p->expr, var, e), substitute_expr(p->a, var, e));
    case Proc::Kind::SelectP:
      return pselect(p->chan, p->sel, substitute_expr(p->a, var, e));
    case Proc::Kind::BranchP:
      return pbranch(p->chan, substitute_expr(p->a, var, e), substitute_expr(p->b, var, e));
    case Proc::Kind::Cond:
      return pcond(substitute_expr(p->expr, var, e), substitute_expr(p->a, var, e),
                   substitute_expr(p->b, var, e));
    case Proc::Kind::Par:
      return ppar(substitute_expr(p->a, var, e), substitute_expr(p->b, var, e));
  }
  return p;
}

ProcPtr substitute(const ProcPtr& p, const std::string& var, const Value& v) {
  return substitute_expr(p, var, elit(v));
}

namespace {

// Alpha-equivalence with parallel binder environments.
bool expr_alpha(const ExprPtr& a, const ExprPtr& b,
                const std::map<std::string, std::string>& env_a,
                const std::map<std::string, std::string>& env_b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var: {
      auto ia = env_a.find(a->name);
      auto ib = env_b.find(b->name);
      if ((ia == env_a.end()) != (ib == env_b.end())) return false;
      if (ia == env_a.end()) return a->name == b->name;
      return ia->second == ib->second;
    }
    case Expr::Kind::Lit: return a->lit == b->lit;
    case Expr::Kind::Eq:
    case Expr::Kind::Add:
      return expr_alpha(a->a, b->a, env_a, env_b) && expr_alpha(a->b, b->b, env_a, env_b);
  }
  return false;
}

bool proc_alpha(const ProcPtr& a, const ProcPtr& b,
                std::map<std::string, std::string>& env_a,
                std::map<std::string, std::string>& env_b, int& next) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Proc::Kind::Idle: return true;
    case Proc::Kind::Input: {
      if (a->chan != b->chan || a->base != b->base) return false;
      std::string tag = "#" + std::to_string(next++);
      auto sa = env_a.find(a->var) != env_a.end() ? std::optional(env_a[a->var]) : std::nullopt;
      auto sb = env_b.find(b->var) != env_b.end() ? std::optional(env_b[b->var]) : std::nullopt;
      env_a[a->var] = tag;
      env_b[b->var] = tag;
      bool ok = proc_alpha(a->a, b->a, env_a, env_b, next);
      if (sa) env_a[a->var] = *sa; else env_a.erase(a->var);
      if (sb) env_b[b->var] = *sb; else env_b.erase(b->var);
      return ok;
    }
    case Proc::Kind::Output:
      return a->chan == b->chan && expr_alpha(a->expr, b->expr, env_a, env_b) &&
             proc_alpha(a->a, b->a, env_a, env_b, next);
    case Proc::Kind::SelectP:
      return a->chan == b->chan && a->sel == b->sel && proc_alpha(a->a, b->a, env_a, env_b, next);
    case Proc::Kind::BranchP:
      return a->chan == b->chan && proc_alpha(a->a, b->a, env_a, env_b, next) &&
             proc_alpha(a->b, b->b, env_a, env_b, next);
    case Proc::Kind::Cond:
      return expr_alpha(a->expr, b->expr, env_a, env_b) &&
             proc_alpha(a->a, b->a, env_a, env_b, next) &&
             proc_alpha(a->b, b->b, env_a, env_b, next);
    case Proc::Kind::Par:
      return proc_alpha(a->a, b->a, env_a, env_b, next) &&
             proc_alpha(a->b, b->b, env_a, env_b, next);
  }
  return false;
}

struct KeyCtx {
  bool unit_outputs;
  int next = 0;
  // variable -> (canonical name, base type of binder)
  std::map<std::string, std::pair<std::string, Base>> env;
};

void key_expr(const ExprPtr& e, KeyCtx& ctx, std::string& out) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = ctx.env.find(e->name);
      out += it != ctx.env.end() ? it->second.first : e->name;
      break;
    }
    case Expr::Kind::Lit: out += value_text(e->lit); break;
    case Expr::Kind::Eq:
      out += "(";
      key_expr(e->a, ctx, out);
      out += "==";
      key_expr(e->b, ctx, out);
      out += ")";
      break;
    case Expr::Kind::Add:
      out += "(";
      key_expr(e->a, ctx, out);
      out += "+";
      key_expr(e->b, ctx, out);
      out += ")";
      break;
  }
}

void key_proc(const ProcPtr& p, KeyCtx& ctx, std::string& out) {
  switch (p->kind) {
    case Proc::Kind::Idle: out += "0"; break;
    case Proc::Kind::Input: {
      std::string name = "b" + std::to_string(ctx.next++);
      out += chan_name(p->chan);
      out += "?(" + name + ":" + base_name(p->base) + ").";
      auto saved = ctx.env.find(p->var) != ctx.env.end()
                       ? std::optional(ctx.env[p->var])
                       : std::nullopt;
      ctx.env[p->var] = {name, p->base};
      key_proc(p->a, ctx, out);
      if (saved) ctx.env[p->var] = *saved; else ctx.env.erase(p->var);
      break;
    }
    case Proc::Kind::Output: {
      out += chan_name(p->chan);
      out += "!(";
      bool folded = false;
      if (ctx.unit_outputs) {
        if (p->expr->kind == Expr::Kind::Lit && p->expr->lit.type == Base::Unit) {
          out += "()";
          folded = true;
        } else if (p->expr->kind == Expr::Kind::Var) {
          auto it = ctx.env.find(p->expr->name);
          if (it != ctx.env.end() && it->second.second == Base::Unit) {
            out += "()";
            folded = true;
          }
        }
      }
      if (!folded) key_expr(p->expr, ctx, out);
      out += ").";
      key_proc(p->a, ctx, out);
      break;
    }
    case Proc::Kind::SelectP:
      out += chan_name(p->chan);
      out += "#";
      out += sel_name(p->sel);
      out += ".";
      key_proc(p->a, ctx, out);
      break;
    case Proc::Kind::BranchP:
      out += "case ";
      out += chan_name(p->chan);
      out += "{";
      key_proc(p->a, ctx, out);
      out += ",";
      key_proc(p->b, ctx, out);
      out += "}";
      break;
    case Proc::Kind::Cond:
      out += "if ";
      key_expr(p->expr, ctx, out);
      out += "{";
      key_proc(p->a, ctx, out);
      out += "}{";
      key_proc(p->b, ctx, out);
      out += "}";
      break;
    case Proc::Kind::Par:
      out += "(";
      key_proc(p->a, ctx, out);
      out += "|";
      key_proc(p->b, ctx, out);
      out += ")";
      break;
  }
}

}  // namespace

bool alpha_eq(const ProcPtr& p, const ProcPtr& q) {
  std::map<std::string, std::string> ea, eb;
  int next = 0;
  return proc_alpha(p, q, ea, eb, next);
}

std::string normal_key(const ProcPtr& p, bool unit_outputs) {
  KeyCtx ctx{unit_outputs};
  std::string out;
  key_proc(p, ctx, out);
  return out;
}

}  // namespace stiso
