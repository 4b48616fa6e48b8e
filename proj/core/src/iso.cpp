#include "stiso/iso.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_set>

namespace stiso {

std::string path_text(const Path& p) {
  if (p.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(p[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Axiom application

static TypePtr child(const TypePtr& t, int i) {
  return i == 0 ? t->a : t->b;
}

static std::optional<TypePtr> apply_axiom(const TypePtr& t, int axiom, bool fwd) {
  using K = Type::Kind;
  switch (axiom) {
    case 1:  // !t.!s.T ~ !s.!t.T (self-inverse pattern)
      if (t->kind == K::Out && t->a->kind == K::Out)
        return tout(t->a->payload, tout(t->payload, t->a->a));
      return std::nullopt;
    case 2:
      if (t->kind == K::In && t->a->kind == K::In)
        return tin(t->a->payload, tin(t->payload, t->a->a));
      return std::nullopt;
    case 3:
      if (fwd) {
        if (t->kind == K::Out && t->a->kind == K::Select)
          return tselect(tout(t->payload, t->a->a), tout(t->payload, t->a->b));
      } else if (t->kind == K::Select && t->a->kind == K::Out &&
                 t->b->kind == K::Out && t->a->payload == t->b->payload) {
        return tout(t->a->payload, tselect(t->a->a, t->b->a));
      }
      return std::nullopt;
    case 4:
      if (fwd) {
        if (t->kind == K::In && t->a->kind == K::Branch)
          return tbranch(tin(t->payload, t->a->a), tin(t->payload, t->a->b));
      } else if (t->kind == K::Branch && t->a->kind == K::In &&
                 t->b->kind == K::In && t->a->payload == t->b->payload) {
        return tin(t->a->payload, tbranch(t->a->a, t->b->a));
      }
      return std::nullopt;
    case 5:
      if (fwd) {
        if (t->kind == K::Out && t->payload == Base::Unit) return t->a;
        return std::nullopt;
      }
      return tout(Base::Unit, t);
    case 6:
      if (fwd) {
        if (t->kind == K::In && t->payload == Base::Unit) return t->a;
        return std::nullopt;
      }
      return tin(Base::Unit, t);
    case 7:
      if (fwd) {
        if (t->kind == K::Out && t->payload == Base::Bool)
          return tselect(t->a, t->a);
      } else if (t->kind == K::Select && type_equal(t->a, t->b)) {
        return tout(Base::Bool, t->a);
      }
      return std::nullopt;
    case 8:
      if (fwd) {
        if (t->kind == K::In && t->payload == Base::Bool)
          return tbranch(t->a, t->a);
      } else if (t->kind == K::Branch && type_equal(t->a, t->b)) {
        return tin(Base::Bool, t->a);
      }
      return std::nullopt;
    case 9:
      if (t->kind == K::Select) return tselect(t->b, t->a);
      return std::nullopt;
    case 10:
      if (t->kind == K::Branch) return tbranch(t->b, t->a);
      return std::nullopt;
    case 11:
      if (fwd) {
        if (t->kind == K::Select && t->a->kind == K::Select)
          return tselect(t->a->a, tselect(t->a->b, t->b));
      } else if (t->kind == K::Select && t->b->kind == K::Select) {
        return tselect(tselect(t->a, t->b->a), t->b->b);
      }
      return std::nullopt;
    case 12:
      if (fwd) {
        if (t->kind == K::Branch && t->a->kind == K::Branch)
          return tbranch(t->a->a, tbranch(t->a->b, t->b));
      } else if (t->kind == K::Branch && t->b->kind == K::Branch) {
        return tbranch(tbranch(t->a, t->b->a), t->b->b);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<TypePtr> apply_axiom_at(const TypePtr& t, const Path& path,
                                      int axiom, bool forward) {
  if (path.empty()) return apply_axiom(t, axiom, forward);
  int i = path.front();
  TypePtr sub = child(t, i);
  if (!sub) return std::nullopt;
  auto rewritten =
      apply_axiom_at(sub, Path(path.begin() + 1, path.end()), axiom, forward);
  if (!rewritten) return std::nullopt;
  switch (t->kind) {
    case Type::Kind::Out: return tout(t->payload, *rewritten);
    case Type::Kind::In: return tin(t->payload, *rewritten);
    case Type::Kind::Select:
      return i == 0 ? tselect(*rewritten, t->b) : tselect(t->a, *rewritten);
    case Type::Kind::Branch:
      return i == 0 ? tbranch(*rewritten, t->b) : tbranch(t->a, *rewritten);
    default: return std::nullopt;
  }
}

static TypePtr subterm_at(const TypePtr& t, const Path& path) {
  TypePtr cur = t;
  for (int i : path) {
    cur = child(cur, i);
    if (!cur) throw TypeError("path does not address a subterm");
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Identity process

ProcPtr id_process(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::End: return pidle();
    case Type::Kind::Out:
      return pinput(Chan::L, "x", t->payload,
                    poutput(Chan::R, evar("x"), id_process(t->a)));
    case Type::Kind::In:
      return pinput(Chan::R, "x", t->payload,
                    poutput(Chan::L, evar("x"), id_process(t->a)));
    case Type::Kind::Select:
      return pbranch(Chan::L, pselect(Chan::R, Sel::Inl, id_process(t->a)),
                     pselect(Chan::R, Sel::Inr, id_process(t->b)));
    case Type::Kind::Branch:
      return pbranch(Chan::R, pselect(Chan::L, Sel::Inl, id_process(t->a)),
                     pselect(Chan::L, Sel::Inr, id_process(t->b)));
    default:
      throw TypeError("identity process of a metavariable");
  }
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Normalizer {
  std::vector<std::tuple<int, bool, Path>> steps;

  void record(int ax, bool fwd, const Path& p) { steps.push_back({ax, fwd, p}); }

  static Path extend(Path p, int i) {
    p.push_back(i);
    return p;
  }

  TypePtr norm(const TypePtr& t, const Path& path) {
    using K = Type::Kind;
    switch (t->kind) {
      case K::End:
      case K::Meta:
        return t;
      case K::Out: {
        if (t->payload == Base::Unit) {
          record(5, true, path);
          return norm(t->a, path);
        }
        if (t->payload == Base::Bool) {
          record(7, true, path);
          return norm(tselect(t->a, t->a), path);
        }
        TypePtr c = norm(t->a, extend(path, 0));
        if (c->kind == K::Select) {
          record(3, true, path);
          return norm(tselect(tout(t->payload, c->a), tout(t->payload, c->b)),
                      path);
        }
        return tout(t->payload, c);
      }
      case K::In: {
        if (t->payload == Base::Unit) {
          record(6, true, path);
          return norm(t->a, path);
        }
        if (t->payload == Base::Bool) {
          record(8, true, path);
          return norm(tbranch(t->a, t->a), path);
        }
        TypePtr c = norm(t->a, extend(path, 0));
        if (c->kind == K::Branch) {
          record(4, true, path);
          return norm(
              tbranch(tin(t->payload, c->a), tin(t->payload, c->b)), path);
        }
        return tin(t->payload, c);
      }
      case K::Select:
      case K::Branch: {
        bool sel = t->kind == K::Select;
        int assoc = sel ? 11 : 12, comm = sel ? 9 : 10;
        auto mk = [&](TypePtr a, TypePtr b) {
          return sel ? tselect(std::move(a), std::move(b))
                     : tbranch(std::move(a), std::move(b));
        };
        TypePtr node =
            mk(norm(t->a, extend(path, 0)), norm(t->b, extend(path, 1)));
        node = comb(node, path, t->kind, assoc, mk);
        // Leaves along the right spine; bubble-sort by the canonical order.
        std::vector<TypePtr> leaves;
        for (TypePtr cur = node; ; cur = cur->b) {
          if (cur->kind != t->kind) { leaves.push_back(cur); break; }
          leaves.push_back(cur->a);
          if (cur->b->kind != t->kind) { leaves.push_back(cur->b); break; }
        }
        std::size_t n = leaves.size();
        for (std::size_t pass = 0; pass + 1 < n; ++pass)
          for (std::size_t i = 0; i + 1 < n - pass; ++i)
            if (type_compare(leaves[i], leaves[i + 1]) > 0) {
              Path q = path;
              for (std::size_t k = 0; k < i; ++k) q.push_back(1);
              if (i + 2 < n) {  // swap inside the spine: rotate, flip, rotate
                record(assoc, false, q);
                record(comm, true, extend(q, 0));
                record(assoc, true, q);
              } else {  // last two leaves form a plain node
                record(comm, true, q);
              }
              std::swap(leaves[i], leaves[i + 1]);
            }
        TypePtr out = leaves[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) out = mk(leaves[i], out);
        return out;
      }
    }
    return t;
  }

  template <class Mk>
  TypePtr comb(TypePtr node, const Path& path, Type::Kind kind, int assoc,
               const Mk& mk) {
    if (node->kind != kind) return node;
    if (node->a->kind == kind) {
      record(assoc, true, path);
      return comb(mk(node->a->a, mk(node->a->b, node->b)), path, kind, assoc, mk);
    }
    return mk(node->a, comb(node->b, extend(path, 1), kind, assoc, mk));
  }
};

}  // namespace

NormalizeResult normalize(const TypePtr& t) {
  Normalizer n;
  TypePtr nf = n.norm(t, {});
  NormalizeResult r;
  r.nf = nf;
  r.derivation.from = t;
  r.derivation.to = nf;
  TypePtr cur = t;
  for (auto& [ax, fwd, path] : n.steps) {
    auto next = apply_axiom_at(cur, path, ax, fwd);
    if (!next) throw TypeError("internal: normalization step fails to replay");
    r.derivation.steps.push_back({ax, fwd, path, cur, *next});
    cur = *next;
  }
  if (!type_equal(cur, nf))
    throw TypeError("internal: normalization derivation diverges from result");
  return r;
}

std::string IsoDerivation::text() const {
  std::ostringstream os;
  std::size_t k = 1;
  for (const AxiomStep& s : steps)
    os << k++ << ". [a" << s.axiom << (s.forward ? " ->" : " <-") << "] at path "
       << path_text(s.path) << " : " << print_type(s.before) << " => "
       << print_type(s.after) << "\n";
  return os.str();
}

namespace {

std::vector<Path> subterm_paths(const TypePtr& t) {
  std::vector<Path> paths;
  std::deque<std::pair<TypePtr, Path>> todo{{t, {}}};
  while (!todo.empty()) {
    auto [cur, p] = todo.front();
    todo.pop_front();
    paths.push_back(p);
    if (cur->a) {
      Path q = p;
      q.push_back(0);
      todo.push_back({cur->a, q});
    }
    if (cur->b &&
        (cur->kind == Type::Kind::Select || cur->kind == Type::Kind::Branch)) {
      Path q = p;
      q.push_back(1);
      todo.push_back({cur->b, q});
    }
  }
  return paths;
}

// Short derivations give short adapter chains, which certify much faster than
// round trips through the normal form; bounded BFS in the rewrite graph.
std::optional<std::vector<AxiomStep>> short_derivation(const TypePtr& t,
                                                       const TypePtr& s,
                                                       int max_depth,
                                                       std::size_t node_cap) {
  struct Node {
    TypePtr type;
    std::size_t parent;
    AxiomStep step;
  };
  std::size_t size_cap = std::max(type_size(t), type_size(s)) + 2;
  std::string goal = print_type(s);
  std::vector<Node> nodes{{t, SIZE_MAX, {}}};
  std::unordered_set<std::string> seen{print_type(t)};
  auto rebuild = [&](std::size_t i) {
    std::vector<AxiomStep> steps;
    for (std::size_t k = i; k != SIZE_MAX && nodes[k].parent != SIZE_MAX;
         k = nodes[k].parent)
      steps.push_back(nodes[k].step);
    std::reverse(steps.begin(), steps.end());
    return steps;
  };
  if (type_equal(t, s)) return rebuild(0);
  std::size_t lo = 0, hi = nodes.size();
  for (int d = 0; d < max_depth && lo < hi; ++d) {
    for (std::size_t i = lo; i < hi; ++i)
      for (const Path& p : subterm_paths(nodes[i].type))
        for (int ax = 1; ax <= 12; ++ax)
          for (bool fwd : {true, false}) {
            auto r = apply_axiom_at(nodes[i].type, p, ax, fwd);
            if (!r || type_size(*r) > size_cap) continue;
            std::string key = print_type(*r);
            if (!seen.insert(key).second) continue;
            nodes.push_back({*r, i, {ax, fwd, p, nodes[i].type, *r}});
            if (key == goal) return rebuild(nodes.size() - 1);
            if (nodes.size() >= node_cap) return std::nullopt;
          }
    lo = hi;
    hi = nodes.size();
  }
  return std::nullopt;
}

}  // namespace

std::optional<IsoDerivation> iso_decide(const TypePtr& t, const TypePtr& s) {
  NormalizeResult nt = normalize(t), ns = normalize(s);
  if (!type_equal(nt.nf, ns.nf)) return std::nullopt;
  if (auto steps = short_derivation(t, s, 3, 20000)) {
    IsoDerivation d;
    d.from = t;
    d.to = s;
    d.steps = *steps;
    return d;
  }
  // Both derivations end at the same normal form; cancel their common tail so
  // t -> NF -> s does not retrace shared rewrites (for equal types the whole
  // derivation cancels).
  std::vector<AxiomStep>& a = nt.derivation.steps;
  std::vector<AxiomStep>& b = ns.derivation.steps;
  auto same = [](const AxiomStep& x, const AxiomStep& y) {
    return x.axiom == y.axiom && x.forward == y.forward && x.path == y.path &&
           type_equal(x.before, y.before) && type_equal(x.after, y.after);
  };
  while (!a.empty() && !b.empty() && same(a.back(), b.back())) {
    a.pop_back();
    b.pop_back();
  }
  IsoDerivation d;
  d.from = t;
  d.to = s;
  d.steps = a;
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    d.steps.push_back({it->axiom, !it->forward, it->path, it->after, it->before});
  return d;
}

// ---------------------------------------------------------------------------
// Adapters

static ProcPtr in_(Chan c, const char* x, Base t, ProcPtr k) {
  return pinput(c, x, t, std::move(k));
}
static ProcPtr out_(Chan c, ExprPtr e, ProcPtr k) {
  return poutput(c, std::move(e), std::move(k));
}
static ProcPtr sel_(Chan c, Sel s, ProcPtr k) { return pselect(c, s, std::move(k)); }
static ProcPtr case_(Chan c, ProcPtr l, ProcPtr r) {
  return pbranch(c, std::move(l), std::move(r));
}

AdapterPair axiom_adapters(int axiom, const TypePtr& lhs, const TypePtr& rhs) {
  using C = Chan;
  auto X = evar("x");
  auto Y = evar("y");
  ProcPtr A, B;
  switch (axiom) {
    case 1: {
      Base t = lhs->payload, s = lhs->a->payload;
      TypePtr T = lhs->a->a;
      A = in_(C::L, "x", t, in_(C::L, "y", s,
              out_(C::R, Y, out_(C::R, X, id_process(T)))));
      B = in_(C::L, "x", s, in_(C::L, "y", t,
              out_(C::R, Y, out_(C::R, X, id_process(T)))));
      break;
    }
    case 2: {
      Base t = lhs->payload, s = lhs->a->payload;
      TypePtr T = lhs->a->a;
      A = in_(C::R, "x", s, in_(C::R, "y", t,
              out_(C::L, Y, out_(C::L, X, id_process(T)))));
      B = in_(C::R, "x", t, in_(C::R, "y", s,
              out_(C::L, Y, out_(C::L, X, id_process(T)))));
      break;
    }
    case 3: {
      Base t = lhs->payload;
      TypePtr T = lhs->a->a, S = lhs->a->b;
      A = in_(C::L, "x", t,
              case_(C::L, sel_(C::R, Sel::Inl, out_(C::R, X, id_process(T))),
                    sel_(C::R, Sel::Inr, out_(C::R, X, id_process(S)))));
      B = case_(C::L,
                in_(C::L, "x", t,
                    out_(C::R, X, sel_(C::R, Sel::Inl, id_process(T)))),
                in_(C::L, "x", t,
                    out_(C::R, X, sel_(C::R, Sel::Inr, id_process(S)))));
      break;
    }
    case 4: {
      Base t = lhs->payload;
      TypePtr T = lhs->a->a, S = lhs->a->b;
      A = case_(C::R,
                in_(C::R, "x", t,
                    out_(C::L, X, sel_(C::L, Sel::Inl, id_process(T)))),
                in_(C::R, "x", t,
                    out_(C::L, X, sel_(C::L, Sel::Inr, id_process(S)))));
      B = in_(C::R, "x", t,
              case_(C::R, sel_(C::L, Sel::Inl, out_(C::L, X, id_process(T))),
                    sel_(C::L, Sel::Inr, out_(C::L, X, id_process(S)))));
      break;
    }
    case 5: {
      TypePtr T = lhs->a;
      A = in_(C::L, "x", Base::Unit, id_process(T));
      B = out_(C::R, elit(Value::unit()), id_process(T));
      break;
    }
    case 6: {
      TypePtr T = lhs->a;
      A = out_(C::L, elit(Value::unit()), id_process(T));
      B = in_(C::R, "x", Base::Unit, id_process(T));
      break;
    }
    case 7: {
      TypePtr T = lhs->a;
      A = in_(C::L, "x", Base::Bool,
              pcond(X, sel_(C::R, Sel::Inl, id_process(T)),
                    sel_(C::R, Sel::Inr, id_process(T))));
      B = case_(C::L, out_(C::R, elit(Value::boolean(true)), id_process(T)),
                out_(C::R, elit(Value::boolean(false)), id_process(T)));
      break;
    }
    case 8: {
      TypePtr T = lhs->a;
      A = case_(C::R, out_(C::L, elit(Value::boolean(true)), id_process(T)),
                out_(C::L, elit(Value::boolean(false)), id_process(T)));
      B = in_(C::R, "x", Base::Bool,
              pcond(X, sel_(C::L, Sel::Inl, id_process(T)),
                    sel_(C::L, Sel::Inr, id_process(T))));
      break;
    }
    case 9: {
      TypePtr T = lhs->a, S = lhs->b;
      A = case_(C::L, sel_(C::R, Sel::Inr, id_process(T)),
                sel_(C::R, Sel::Inl, id_process(S)));
      B = case_(C::L, sel_(C::R, Sel::Inr, id_process(S)),
                sel_(C::R, Sel::Inl, id_process(T)));
      break;
    }
    case 10: {
      TypePtr T = lhs->a, S = lhs->b;
      A = case_(C::R, sel_(C::L, Sel::Inr, id_process(S)),
                sel_(C::L, Sel::Inl, id_process(T)));
      B = case_(C::R, sel_(C::L, Sel::Inr, id_process(T)),
                sel_(C::L, Sel::Inl, id_process(S)));
      break;
    }
    case 11: {
      TypePtr T1 = lhs->a->a, T2 = lhs->a->b, T3 = lhs->b;
      A = case_(C::L,
                case_(C::L, sel_(C::R, Sel::Inl, id_process(T1)),
                      sel_(C::R, Sel::Inr, sel_(C::R, Sel::Inl, id_process(T2)))),
                sel_(C::R, Sel::Inr, sel_(C::R, Sel::Inr, id_process(T3))));
      B = case_(C::L,
                sel_(C::R, Sel::Inl, sel_(C::R, Sel::Inl, id_process(T1))),
                case_(C::L, sel_(C::R, Sel::Inl, sel_(C::R, Sel::Inr, id_process(T2))),
                      sel_(C::R, Sel::Inr, id_process(T3))));
      break;
    }
    case 12: {
      TypePtr T1 = lhs->a->a, T2 = lhs->a->b, T3 = lhs->b;
      A = case_(C::R,
                sel_(C::L, Sel::Inl, sel_(C::L, Sel::Inl, id_process(T1))),
                case_(C::R, sel_(C::L, Sel::Inl, sel_(C::L, Sel::Inr, id_process(T2))),
                      sel_(C::L, Sel::Inr, id_process(T3))));
      B = case_(C::R,
                case_(C::R, sel_(C::L, Sel::Inl, id_process(T1)),
                      sel_(C::L, Sel::Inr, sel_(C::L, Sel::Inl, id_process(T2)))),
                sel_(C::L, Sel::Inr, sel_(C::L, Sel::Inr, id_process(T3))));
      break;
    }
    default:
      throw TypeError("unknown axiom a" + std::to_string(axiom));
  }
  return {A, B, lhs, rhs};
}

AdapterPair lift_adapter(const Path& path, const TypePtr& surrounding,
                         const AdapterPair& inner) {
  if (path.empty()) {
    if (!type_equal(surrounding, inner.from))
      throw TypeError("adapter lift: type at path differs from adapter domain");
    return inner;
  }
  int i = path.front();
  Path rest(path.begin() + 1, path.end());
  TypePtr sub = child(surrounding, i);
  if (!sub) throw TypeError("adapter lift: path leaves the type");
  AdapterPair in = lift_adapter(rest, sub, inner);
  AdapterPair out;
  using K = Type::Kind;
  switch (surrounding->kind) {
    case K::Out:
      out.forward = in_(Chan::L, "x", surrounding->payload,
                        out_(Chan::R, evar("x"), in.forward));
      out.backward = in_(Chan::L, "x", surrounding->payload,
                         out_(Chan::R, evar("x"), in.backward));
      out.from = tout(surrounding->payload, in.from);
      out.to = tout(surrounding->payload, in.to);
      break;
    case K::In:
      out.forward = in_(Chan::R, "x", surrounding->payload,
                        out_(Chan::L, evar("x"), in.forward));
      out.backward = in_(Chan::R, "x", surrounding->payload,
                         out_(Chan::L, evar("x"), in.backward));
      out.from = tin(surrounding->payload, in.from);
      out.to = tin(surrounding->payload, in.to);
      break;
    case K::Select: {
      TypePtr sib = i == 0 ? surrounding->b : surrounding->a;
      auto wrap = [&](const ProcPtr& f) {
        return i == 0 ? case_(Chan::L, sel_(Chan::R, Sel::Inl, f),
                              sel_(Chan::R, Sel::Inr, id_process(sib)))
                      : case_(Chan::L, sel_(Chan::R, Sel::Inl, id_process(sib)),
                              sel_(Chan::R, Sel::Inr, f));
      };
      out.forward = wrap(in.forward);
      out.backward = wrap(in.backward);
      out.from = i == 0 ? tselect(in.from, sib) : tselect(sib, in.from);
      out.to = i == 0 ? tselect(in.to, sib) : tselect(sib, in.to);
      break;
    }
    case K::Branch: {
      TypePtr sib = i == 0 ? surrounding->b : surrounding->a;
      auto wrap = [&](const ProcPtr& f) {
        return i == 0 ? case_(Chan::R, sel_(Chan::L, Sel::Inl, f),
                              sel_(Chan::L, Sel::Inr, id_process(sib)))
                      : case_(Chan::R, sel_(Chan::L, Sel::Inl, id_process(sib)),
                              sel_(Chan::L, Sel::Inr, f));
      };
      out.forward = wrap(in.forward);
      out.backward = wrap(in.backward);
      out.from = i == 0 ? tbranch(in.from, sib) : tbranch(sib, in.from);
      out.to = i == 0 ? tbranch(in.to, sib) : tbranch(sib, in.to);
      break;
    }
    default:
      throw TypeError("adapter lift: path leaves the type");
  }
  return out;
}

std::optional<AdapterPair> synthesize(const TypePtr& t, const TypePtr& s) {
  auto deriv = iso_decide(t, s);
  if (!deriv) return std::nullopt;
  AdapterPair acc{id_process(t), id_process(t), t, t};
  bool first = true;
  for (const AxiomStep& st : deriv->steps) {
    TypePtr sub_before = subterm_at(st.before, st.path);
    TypePtr sub_after = subterm_at(st.after, st.path);
    AdapterPair base = st.forward
                           ? axiom_adapters(st.axiom, sub_before, sub_after)
                           : axiom_adapters(st.axiom, sub_after, sub_before);
    if (!st.forward) {
      std::swap(base.forward, base.backward);
      std::swap(base.from, base.to);
    }
    AdapterPair lifted = lift_adapter(st.path, st.before, base);
    if (first) {
      acc = lifted;
      first = false;
    } else {
      acc.forward = ppar(acc.forward, lifted.forward);
      acc.backward = ppar(lifted.backward, acc.backward);
      acc.to = lifted.to;
    }
  }
  if (!checks_at(acc.forward, {dual(acc.from), acc.to}) ||
      !checks_at(acc.backward, {dual(acc.to), acc.from}))
    throw TypeError("internal: synthesized adapters fail their typings");
  return acc;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

std::vector<TypePtr> rewrite_successors(const TypePtr& t, std::size_t cap) {
  std::vector<TypePtr> out;
  // Enumerate all subterm paths, then all axiom instances at each.
  std::vector<Path> paths;
  std::deque<std::pair<TypePtr, Path>> todo{{t, {}}};
  while (!todo.empty()) {
    auto [cur, p] = todo.front();
    todo.pop_front();
    paths.push_back(p);
    if (cur->a) {
      Path q = p;
      q.push_back(0);
      todo.push_back({cur->a, q});
    }
    if (cur->b && (cur->kind == Type::Kind::Select ||
                   cur->kind == Type::Kind::Branch)) {
      Path q = p;
      q.push_back(1);
      todo.push_back({cur->b, q});
    }
  }
  for (const Path& p : paths)
    for (int ax = 1; ax <= 12; ++ax)
      for (bool fwd : {true, false}) {
        auto r = apply_axiom_at(t, p, ax, fwd);
        if (r && type_size(*r) <= cap) out.push_back(*r);
      }
  return out;
}

using Ball = std::unordered_set<std::string>;

Ball compute_ball(const TypePtr& t, int radius, std::size_t cap) {
  Ball seen{print_type(t)};
  std::vector<TypePtr> frontier{t};
  for (int d = 0; d < radius && !frontier.empty(); ++d) {
    std::vector<TypePtr> next;
    for (const TypePtr& cur : frontier)
      for (const TypePtr& s : rewrite_successors(cur, cap))
        if (seen.insert(print_type(s)).second) next.push_back(s);
    frontier = std::move(next);
  }
  return seen;
}

// Single-threaded memo; the oracle is only driven from tests and the CLI.
// Balls of small types are kept for good; larger balls can be big, so only a
// few most-recent ones are cached (exhaustive sweeps naturally reuse one side).
std::shared_ptr<const Ball> ball(const TypePtr& t, int radius,
                                 std::size_t cap) {
  static std::map<std::string, std::shared_ptr<const Ball>> small_memo;
  static std::vector<std::pair<std::string, std::shared_ptr<const Ball>>> recent;
  std::string key = print_type(t) + "#" + std::to_string(radius) + "#" +
                    std::to_string(cap);
  if (type_size(t) <= 3) {
    auto it = small_memo.find(key);
    if (it != small_memo.end()) return it->second;
    auto b = std::make_shared<const Ball>(compute_ball(t, radius, cap));
    small_memo.emplace(std::move(key), b);
    return b;
  }
  for (auto it = recent.begin(); it != recent.end(); ++it)
    if (it->first == key) {
      std::rotate(it, it + 1, recent.end());  // move to the back (most recent)
      return recent.back().second;
    }
  if (recent.size() >= 4) recent.erase(recent.begin());
  recent.emplace_back(std::move(key),
                      std::make_shared<const Ball>(compute_ball(t, radius, cap)));
  return recent.back().second;
}

}  // namespace

bool oracle_iso(const TypePtr& t, const TypePtr& s, int depth) {
  if (type_equal(t, s)) return true;
  if (depth <= 0) return false;
  std::size_t cap =
      std::max<std::size_t>(9, std::max(type_size(t), type_size(s)) + 3);
  // A path of length <= depth exists iff the balls meet for any radius split
  // summing to depth (every rewrite is enumerated in both directions), so
  // give the smaller type the larger share: its ball is the memoizable one
  // and the bigger type's ball stays cheap.
  int d_short = depth / 4, d_long = depth - d_short;
  bool t_big = type_size(t) > type_size(s);
  std::shared_ptr<const Ball> pa = ball(t, t_big ? d_short : d_long, cap);
  std::shared_ptr<const Ball> pb = ball(s, t_big ? d_long : d_short, cap);
  const Ball& a = *pa;
  const Ball& b = *pb;
  const Ball& small = a.size() <= b.size() ? a : b;
  const Ball& large = a.size() <= b.size() ? b : a;
  for (const std::string& k : small)
    if (large.count(k)) return true;
  return false;
}

}  // namespace stiso
