#include "stiso/semantics.hpp"

#include <map>
#include <random>
#include <sstream>

namespace stiso {

// ---------------------------------------------------------------------------
// Expression evaluation

Value eval_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
      throw EvalError("unbound variable '" + e->name + "'");
    case Expr::Kind::Lit:
      return e->lit;
    case Expr::Kind::Eq: {
      Value a = eval_expr(e->a), b = eval_expr(e->b);
      if (a.type != Base::Int || b.type != Base::Int)
        throw EvalError("'==' expects int operands");
      return Value::boolean(a.i == b.i);
    }
    case Expr::Kind::Add: {
      Value a = eval_expr(e->a), b = eval_expr(e->b);
      if (a.type != Base::Int || b.type != Base::Int)
        throw EvalError("'+' expects int operands");
      std::int64_t r;
      if (__builtin_add_overflow(a.i, b.i, &r))
        throw EvalError("integer overflow in '+'");
      return Value::integer(r);
    }
  }
  throw EvalError("malformed expression");
}

// ---------------------------------------------------------------------------
// Structural congruence

static void flatten(const ProcPtr& p, ParList& out) {
  if (p->kind == Proc::Kind::Par) {
    flatten(p->a, out);
    flatten(p->b, out);
  } else {
    out.push_back(p);
  }
}

ParList canon(const ProcPtr& p) {
  ParList flat;
  flatten(p, flat);
  // Collapse each maximal run of consecutive idles to a single idle; this is
  // exactly the closure of 0 || 0 == 0 under associativity.
  ParList out;
  for (const ProcPtr& q : flat) {
    if (q->kind == Proc::Kind::Idle && !out.empty() &&
        out.back()->kind == Proc::Kind::Idle)
      continue;
    out.push_back(q);
  }
  return out;
}

static ProcPtr assemble(const ParList& xs) {
  if (xs.empty()) return pidle();
  ProcPtr p = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) p = ppar(p, xs[i]);
  return p;
}

ProcPtr canon_process(const ProcPtr& p) { return assemble(canon(p)); }

bool congruent(const ProcPtr& p, const ProcPtr& q) {
  ParList a = canon(p), b = canon(q);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha_eq(a[i], b[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// One-step reduction

static bool is_idle_state(const ProcPtr& p) {
  ParList xs = canon(p);
  return xs.size() == 1 && xs[0]->kind == Proc::Kind::Idle;
}

static ProcPtr rebuild(const ParList& xs, std::size_t i, std::size_t erase,
                       std::initializer_list<ProcPtr> repl) {
  ParList out(xs.begin(), xs.begin() + i);
  for (const ProcPtr& r : repl) out.push_back(r);
  out.insert(out.end(), xs.begin() + i + erase, xs.end());
  return canon_process(assemble(out));
}

StepSet step(const ProcPtr& p) {
  StepSet out;
  ParList xs = canon(p);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Proc& e = *xs[i];
    if (e.kind == Proc::Kind::Cond) {
      try {
        Value g = eval_expr(e.expr);
        if (g.type != Base::Bool) throw EvalError("conditional guard is not bool");
        out.steps.push_back(
            {"r-cond", i, rebuild(xs, i, 1, {g.b ? e.a : e.b})});
      } catch (const EvalError& err) {
        if (!out.error) out.error = err.what();
      }
      continue;
    }
    if (i + 1 >= xs.size()) continue;
    const Proc& f = *xs[i + 1];
    // In P || Q the right endpoint of P is wired to the left endpoint of Q.
    if (e.kind == Proc::Kind::Output && e.chan == Chan::R &&
        f.kind == Proc::Kind::Input && f.chan == Chan::L) {
      try {
        Value v = eval_expr(e.expr);
        if (v.type == f.base)
          out.steps.push_back({"r-comm 1", i,
                               rebuild(xs, i, 2, {e.a, substitute(f.a, f.var, v)})});
      } catch (const EvalError& err) {
        if (!out.error) out.error = err.what();
      }
    } else if (e.kind == Proc::Kind::Input && e.chan == Chan::R &&
               f.kind == Proc::Kind::Output && f.chan == Chan::L) {
      try {
        Value v = eval_expr(f.expr);
        if (v.type == e.base)
          out.steps.push_back({"r-comm 2", i,
                               rebuild(xs, i, 2, {substitute(e.a, e.var, v), f.a})});
      } catch (const EvalError& err) {
        if (!out.error) out.error = err.what();
      }
    } else if (e.kind == Proc::Kind::SelectP && e.chan == Chan::R &&
               f.kind == Proc::Kind::BranchP && f.chan == Chan::L) {
      out.steps.push_back(
          {"r-choice 1", i,
           rebuild(xs, i, 2, {e.a, e.sel == Sel::Inl ? f.a : f.b})});
    } else if (e.kind == Proc::Kind::BranchP && e.chan == Chan::R &&
               f.kind == Proc::Kind::SelectP && f.chan == Chan::L) {
      out.steps.push_back(
          {"r-choice 2", i,
           rebuild(xs, i, 2, {f.sel == Sel::Inl ? e.a : e.b, f.a})});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces and the correctness decision

std::string Trace::text() const {
  std::ostringstream os;
  os << "0. " << print_process(canon_process(initial)) << "\n";
  std::size_t k = 1;
  for (const TraceEntry& e : entries)
    os << k++ << ". [" << e.rule << "] " << print_process(e.state) << "\n";
  if (error) os << "error: " << *error << "\n";
  return os.str();
}

namespace {

// Reduction is strongly normalizing (every step removes a prefix, a choice,
// or a conditional), so plain memoized search over reachable states decides
// correctness.
struct CorrectnessSearch {
  std::map<std::string, bool> memo;

  // Returns true when every maximal trace from p ends congruent to 0. On
  // failure fills `path` with a maximal failing trace (in reverse).
  bool all_halt_idle(const ProcPtr& p, std::vector<TraceEntry>& path) {
    std::string key = normal_key(canon_process(p));
    auto it = memo.find(key);
    if (it != memo.end() && it->second) return true;
    StepSet ss = step(p);
    if (ss.steps.empty()) {
      bool ok = !ss.error && is_idle_state(p);
      memo[key] = ok;
      return ok;
    }
    for (const Step& s : ss.steps) {
      if (!all_halt_idle(s.next, path)) {
        path.push_back({s.rule, s.position, s.next});
        memo[key] = false;
        return false;
      }
    }
    memo[key] = true;
    return true;
  }
};

}  // namespace

Correctness is_correct(const ProcPtr& p) {
  CorrectnessSearch search;
  std::vector<TraceEntry> path;
  if (search.all_halt_idle(p, path)) return {true, std::nullopt};
  Trace t;
  t.initial = p;
  t.entries.assign(path.rbegin(), path.rend());
  if (!t.entries.empty()) {
    StepSet last = step(t.entries.back().state);
    if (last.error) t.error = last.error;
  } else {
    StepSet here = step(p);
    if (here.error) t.error = here.error;
  }
  return {false, t};
}

// ---------------------------------------------------------------------------
// Type-directed generation

namespace {

struct Generator {
  std::mt19937_64 rng;
  int budget;

  bool coin(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  ExprPtr literal(Base t) {
    switch (t) {
      case Base::Unit: return elit(Value::unit());
      case Base::Bool: return elit(Value::boolean(pick(2) == 0));
      case Base::Int:
        return elit(Value::integer(std::uniform_int_distribution<std::int64_t>(-5, 5)(rng)));
    }
    return elit(Value::unit());
  }

  // Expression of base type t using in-scope variables of known base types.
  ExprPtr expr_of(Base t, const std::vector<std::pair<std::string, Base>>& env) {
    std::vector<std::string> same;
    for (auto& [n, b] : env)
      if (b == t) same.push_back(n);
    if (!same.empty() && coin(0.5)) return evar(same[pick((int)same.size())]);
    if (t == Base::Int && budget > 0 && coin(0.25)) {
      --budget;
      return eadd(expr_of(Base::Int, env), expr_of(Base::Int, env));
    }
    if (t == Base::Bool && budget > 0 && coin(0.25)) {
      --budget;
      return eeq(expr_of(Base::Int, env), expr_of(Base::Int, env));
    }
    return literal(t);
  }

  TypePtr random_type(int depth) {
    if (depth <= 0 || pick(3) == 0) return tend();
    Base bases[] = {Base::Unit, Base::Bool, Base::Int};
    switch (pick(4)) {
      case 0: return tout(bases[pick(3)], random_type(depth - 1));
      case 1: return tin(bases[pick(3)], random_type(depth - 1));
      case 2: return tselect(random_type(depth - 1), random_type(depth - 1));
      default: return tbranch(random_type(depth - 1), random_type(depth - 1));
    }
  }

  std::string fresh(std::vector<std::pair<std::string, Base>>& env, Base t) {
    std::string name = "v" + std::to_string(env.size());
    env.push_back({name, t});
    return name;
  }

  // When set, generated int/bool inputs may guard their continuation with a
  // value check whose failure branch jams on this (otherwise idle) channel —
  // the shape of a discriminating context.
  std::optional<Chan> alarm;

  ProcPtr jam() {
    return poutput(*alarm, elit(Value::boolean(false)), pidle());
  }

  ProcPtr gen(const TypePtr& tl, const TypePtr& tr,
              std::vector<std::pair<std::string, Base>> env) {
    bool l_done = tl->kind == Type::Kind::End;
    bool r_done = tr->kind == Type::Kind::End;
    if (l_done && r_done) return pidle();
    if (budget > 0 && coin(0.08)) {
      --budget;
      ProcPtr t = gen(tl, tr, env);
      return pcond(expr_of(Base::Bool, env), t, gen(tl, tr, env));
    }
    if (budget > 2 && coin(0.06)) {
      budget -= 3;
      TypePtr m = random_type(2);
      return ppar(gen(tl, m, env), gen(dual(m), tr, env));
    }
    if (budget > 0) --budget;
    bool on_left = r_done || (!l_done && coin(0.5));
    Chan c = on_left ? Chan::L : Chan::R;
    const TypePtr& t = on_left ? tl : tr;
    const TypePtr& other = on_left ? tr : tl;
    auto next = [&](const TypePtr& cont) {
      return on_left ? std::pair{cont, other} : std::pair{other, cont};
    };
    switch (t->kind) {
      case Type::Kind::In: {
        auto e2 = env;
        std::string x = fresh(e2, t->payload);
        auto [a, b] = next(t->a);
        ProcPtr cont = gen(a, b, e2);
        if (alarm && coin(0.5)) {
          if (t->payload == Base::Int)
            cont = pcond(eeq(evar(x), literal(Base::Int)), cont, jam());
          else if (t->payload == Base::Bool)
            cont = pick(2) == 0 ? pcond(evar(x), cont, jam())
                                : pcond(evar(x), jam(), cont);
        }
        return pinput(c, x, t->payload, cont);
      }
      case Type::Kind::Out: {
        ExprPtr e = expr_of(t->payload, env);
        auto [a, b] = next(t->a);
        return poutput(c, e, gen(a, b, env));
      }
      case Type::Kind::Select: {
        bool inl = pick(2) == 0;
        auto [a, b] = next(inl ? t->a : t->b);
        return pselect(c, inl ? Sel::Inl : Sel::Inr, gen(a, b, env));
      }
      case Type::Kind::Branch: {
        auto [a1, b1] = next(t->a);
        auto [a2, b2] = next(t->b);
        return pbranch(c, gen(a1, b1, env), gen(a2, b2, env));
      }
      default:
        return pidle();
    }
  }
};

}  // namespace

ProcPtr generate_typed(const InterfacePair& iface, std::uint64_t seed, int budget) {
  Generator g{std::mt19937_64(seed), budget};
  return g.gen(iface.left, iface.right, {});
}

// Context neighbor: type-directed like generate_typed, but may insert
// check-and-jam conditionals after inputs (so contexts can probe the values a
// process transmits, as discriminating contexts must).
static ProcPtr generate_context(const InterfacePair& iface, std::uint64_t seed,
                                int budget, Chan jam_chan) {
  Generator g{std::mt19937_64(seed), budget};
  g.alarm = jam_chan;
  return g.gen(iface.left, iface.right, {});
}

// ---------------------------------------------------------------------------
// Equivalence refutation

std::string Refutation::context_text() const {
  return print_process(context_left) + " || [.] || " + print_process(context_right);
}

std::optional<Refutation> equiv_refute(const ProcPtr& p, const ProcPtr& q,
                                       const InterfacePair& iface, int trials,
                                       std::uint64_t seed) {
  std::mt19937_64 top(seed);
  for (int k = 0; k < trials; ++k) {
    std::uint64_t sl = top(), sr = top();
    int budget = 4 + k % 12;
    // L closes the left endpoint of the hole, R the right one.
    ProcPtr L = generate_context({tend(), dual(iface.left)}, sl, budget, Chan::L);
    ProcPtr R = generate_context({dual(iface.right), tend()}, sr, budget, Chan::R);
    bool cp = is_correct(ppar(L, ppar(p, R))).correct;
    bool cq = is_correct(ppar(L, ppar(q, R))).correct;
    if (cp != cq) return Refutation{L, R, cp, cq};
  }
  return std::nullopt;
}

}  // namespace stiso
