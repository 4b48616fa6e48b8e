#include "stiso/typecheck.hpp"

#include <sstream>

namespace stiso {

std::string derivation_text(const Derivation& d) {
  std::string out;
  auto rec = [&](auto&& self, const Derivation& n, int depth) -> void {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "[" + n.rule + "] " + n.judgment + "\n";
    for (const auto& k : n.premises) self(self, k, depth + 1);
  };
  rec(rec, d, 0);
  return out;
}

Base type_expr(const TypeEnv& env, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) throw TypeError("unbound variable '" + e->name + "'");
      return it->second;
    }
    case Expr::Kind::Lit: return e->lit.type;
    case Expr::Kind::Eq: {
      Base a = type_expr(env, e->a);
      Base b = type_expr(env, e->b);
      if (a != b)
        throw TypeError(std::string("equality operands have different types: ") + base_name(a) +
                        " vs " + base_name(b));
      return Base::Bool;
    }
    case Expr::Kind::Add: {
      Base a = type_expr(env, e->a);
      Base b = type_expr(env, e->b);
      if (a != Base::Int || b != Base::Int)
        throw TypeError("addition requires int operands");
      return Base::Int;
    }
  }
  throw TypeError("malformed expression");
}

namespace {

// Union-find-free solver: metavariable index -> binding. A Meta node with
// meta_dual set resolves to the dual of its binding.
struct Solver {
  std::vector<TypePtr> bindings;  // empty ptr = unbound
  int fresh_count = 0;

  TypePtr fresh() {
    bindings.push_back(nullptr);
    ++fresh_count;
    return tmeta(static_cast<int>(bindings.size()) - 1);
  }

  TypePtr resolve(TypePtr t) {
    while (t->kind == Type::Kind::Meta && bindings[static_cast<std::size_t>(t->meta)]) {
      TypePtr b = bindings[static_cast<std::size_t>(t->meta)];
      t = t->meta_dual ? dual(b) : b;
    }
    return t;
  }

  bool occurs(int idx, const TypePtr& t) {
    TypePtr r = resolve(t);
    if (r->kind == Type::Kind::Meta) return r->meta == idx;
    return (r->a && occurs(idx, r->a)) || (r->b && occurs(idx, r->b));
  }

  void bind(const TypePtr& meta, const TypePtr& t) {
    TypePtr v = meta->meta_dual ? dual(t) : t;
    TypePtr rv = resolve(v);
    if (rv->kind == Type::Kind::Meta && rv->meta == meta->meta) return;  // same variable
    if (occurs(meta->meta, v)) throw TypeError("cyclic session type (occurs check)");
    bindings[static_cast<std::size_t>(meta->meta)] = v;
  }

  void unify(const TypePtr& a0, const TypePtr& b0) {
    TypePtr a = resolve(a0), b = resolve(b0);
    if (a->kind == Type::Kind::Meta) {
      bind(a, b);
      return;
    }
    if (b->kind == Type::Kind::Meta) {
      bind(b, a);
      return;
    }
    if (a->kind != b->kind)
      throw TypeError("session type mismatch: " + print_type(a) + " vs " + print_type(b));
    switch (a->kind) {
      case Type::Kind::End: return;
      case Type::Kind::Out:
      case Type::Kind::In:
        if (a->payload != b->payload)
          throw TypeError("payload type mismatch: " + print_type(a) + " vs " + print_type(b));
        unify(a->a, b->a);
        return;
      case Type::Kind::Select:
      case Type::Kind::Branch:
        unify(a->a, b->a);
        unify(a->b, b->b);
        return;
      default:
        throw TypeError("malformed type in unification");
    }
  }

  TypePtr zonk(const TypePtr& t) {
    TypePtr r = resolve(t);
    switch (r->kind) {
      case Type::Kind::End:
      case Type::Kind::Meta:
        return r;
      case Type::Kind::Out: return tout(r->payload, zonk(r->a));
      case Type::Kind::In: return tin(r->payload, zonk(r->a));
      case Type::Kind::Select: return tselect(zonk(r->a), zonk(r->b));
      case Type::Kind::Branch: return tbranch(zonk(r->a), zonk(r->b));
    }
    return r;
  }

  // Instantiates any residual metavariable with end; only used for display
  // of derivations whose root is already ground (nothing constrains the
  // leftovers, so any instantiation is derivable).
  TypePtr ground(const TypePtr& t) {
    TypePtr z = zonk(t);
    if (!type_has_meta(z)) return z;
    switch (z->kind) {
      case Type::Kind::Meta: return tend();
      case Type::Kind::Out: return tout(z->payload, ground(z->a));
      case Type::Kind::In: return tin(z->payload, ground(z->a));
      case Type::Kind::Select: return tselect(ground(z->a), ground(z->b));
      case Type::Kind::Branch: return tbranch(ground(z->a), ground(z->b));
      default: return z;
    }
  }
};

std::string env_text(const TypeEnv& env) {
  if (env.empty()) return "{}";
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : env) {
    if (!first) out += ", ";
    first = false;
    out += k + ":" + base_name(v);
  }
  return out + "}";
}

struct RawNode {
  std::string rule;
  TypeEnv env;
  std::string subject;    // printed process or expression
  TypePtr left, right;    // un-zonked judgment pair (null for expr nodes)
  std::string expr_type;  // expression judgment result
  std::vector<RawNode> premises;
};

struct Inferencer {
  Solver& solver;

  RawNode expr_node(const TypeEnv& env, const ExprPtr& e) {
    Base t = type_expr(env, e);
    const char* rule = nullptr;
    switch (e->kind) {
      case Expr::Kind::Var: rule = "T-var"; break;
      case Expr::Kind::Lit: rule = "T-value"; break;
      case Expr::Kind::Eq: rule = "T-eq"; break;
      case Expr::Kind::Add: rule = "T-add"; break;
    }
    RawNode n;
    n.rule = rule;
    n.env = env;
    n.subject = print_expr(e);
    n.expr_type = base_name(t);
    return n;
  }

  RawNode infer(const TypeEnv& env, const ProcPtr& p) {
    RawNode n;
    n.env = env;
    n.subject = print_process(p);
    switch (p->kind) {
      case Proc::Kind::Idle:
        n.rule = "T-idle";
        n.left = tend();
        n.right = tend();
        return n;
      case Proc::Kind::Input: {
        n.rule = "T-input";
        TypeEnv inner = env;
        inner[p->var] = p->base;
        RawNode body = infer(inner, p->a);
        if (p->chan == Chan::L) {
          n.left = tin(p->base, body.left);
          n.right = body.right;
        } else {
          n.left = body.left;
          n.right = tin(p->base, body.right);
        }
        n.premises.push_back(std::move(body));
        return n;
      }
      case Proc::Kind::Output: {
        n.rule = "T-output";
        Base t = type_expr(env, p->expr);
        n.premises.push_back(expr_node(env, p->expr));
        RawNode body = infer(env, p->a);
        if (p->chan == Chan::L) {
          n.left = tout(t, body.left);
          n.right = body.right;
        } else {
          n.left = body.left;
          n.right = tout(t, body.right);
        }
        n.premises.push_back(std::move(body));
        return n;
      }
      case Proc::Kind::SelectP: {
        n.rule = p->sel == Sel::Inl ? "T-select left" : "T-select right";
        RawNode body = infer(env, p->a);
        TypePtr other = solver.fresh();
        TypePtr self = p->chan == Chan::L ? body.left : body.right;
        TypePtr sel = p->sel == Sel::Inl ? tselect(self, other) : tselect(other, self);
        if (p->chan == Chan::L) {
          n.left = sel;
          n.right = body.right;
        } else {
          n.left = body.left;
          n.right = sel;
        }
        n.premises.push_back(std::move(body));
        return n;
      }
      case Proc::Kind::BranchP: {
        n.rule = "T-branch";
        RawNode inl = infer(env, p->a);
        RawNode inr = infer(env, p->b);
        if (p->chan == Chan::L) {
          solver.unify(inl.right, inr.right);
          n.left = tbranch(inl.left, inr.left);
          n.right = inl.right;
        } else {
          solver.unify(inl.left, inr.left);
          n.left = inl.left;
          n.right = tbranch(inl.right, inr.right);
        }
        n.premises.push_back(std::move(inl));
        n.premises.push_back(std::move(inr));
        return n;
      }
      case Proc::Kind::Cond: {
        n.rule = "T-conditional";
        Base g = type_expr(env, p->expr);
        if (g != Base::Bool) throw TypeError("conditional guard is not bool");
        n.premises.push_back(expr_node(env, p->expr));
        RawNode a = infer(env, p->a);
        RawNode b = infer(env, p->b);
        solver.unify(a.left, b.left);
        solver.unify(a.right, b.right);
        n.left = a.left;
        n.right = a.right;
        n.premises.push_back(std::move(a));
        n.premises.push_back(std::move(b));
        return n;
      }
      case Proc::Kind::Par: {
        n.rule = "T-parallel";
        RawNode a = infer(env, p->a);
        RawNode b = infer(env, p->b);
        // mediating type T': left operand's right interface is T', right
        // operand's left interface must be its dual
        solver.unify(b.left, dual(a.right));
        n.left = a.left;
        n.right = b.right;
        n.premises.push_back(std::move(a));
        n.premises.push_back(std::move(b));
        return n;
      }
    }
    throw TypeError("malformed process");
  }
};

Derivation render(Solver& solver, const RawNode& n) {
  Derivation d;
  d.rule = n.rule;
  std::ostringstream js;
  if (n.left) {
    js << env_text(n.env) << " |- " << n.subject << " |> "
       << print_type(solver.ground(n.left)) << " ; " << print_type(solver.ground(n.right));
  } else {
    js << env_text(n.env) << " |- " << n.subject << " : " << n.expr_type;
  }
  d.judgment = js.str();
  for (const auto& k : n.premises) d.premises.push_back(render(solver, k));
  return d;
}

}  // namespace

Derivation check_process(const TypeEnv& env, const ProcPtr& p, const InterfacePair& iface) {
  if (type_has_meta(iface.left) || type_has_meta(iface.right))
    throw TypeError("interface contains metavariables");
  Solver solver;
  Inferencer inf{solver};
  RawNode root = inf.infer(env, p);
  solver.unify(root.left, iface.left);
  solver.unify(root.right, iface.right);
  if (type_has_meta(solver.zonk(root.left)) || type_has_meta(solver.zonk(root.right)))
    throw TypeError("residual metavariable at top level");
  return render(solver, root);
}

InterfacePair infer_interfaces(const TypeEnv& env, const ProcPtr& p) {
  Solver solver;
  Inferencer inf{solver};
  RawNode root = inf.infer(env, p);
  return {solver.zonk(root.left), solver.zonk(root.right)};
}

bool check_closed(const ProcPtr& p) {
  return checks_at(p, {tend(), tend()});
}

bool checks_at(const ProcPtr& p, const InterfacePair& iface) {
  try {
    check_process({}, p, iface);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace stiso
