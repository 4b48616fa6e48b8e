#pragma once

// The axiomatic isomorphism theory over session types: the twelve axioms,
// rewriting to a canonical normal form, the derivability decision, identity
// processes, adapter construction (per-axiom pairs, congruence lifting,
// transitive composition), and an independent brute-force oracle.

#include <optional>
#include <string>
#include <vector>

#include "stiso/typecheck.hpp"

namespace stiso {

// Axiom schemas, read left-to-right in the forward direction:
//   a1  !t.!s.T  ~ !s.!t.T        a2  ?t.?s.T ~ ?s.?t.T
//   a3  !t.(T(+)S) ~ !t.T(+)!t.S  a4  ?t.(T+S) ~ ?t.T+?t.S
//   a5  !unit.T ~ T               a6  ?unit.T ~ T
//   a7  !bool.T ~ T(+)T           a8  ?bool.T ~ T+T
//   a9  T(+)S ~ S(+)T             a10 T+S ~ S+T
//   a11 (T1(+)T2)(+)T3 ~ T1(+)(T2(+)T3)
//   a12 (T1+T2)+T3 ~ T1+(T2+T3)

using Path = std::vector<int>;  // 0 = continuation / left child, 1 = right child

std::string path_text(const Path& p);

struct AxiomStep {
  int axiom;          // 1..12
  bool forward;       // left-to-right
  Path path;          // where in the whole type the rewrite fires
  TypePtr before;     // whole type before the step
  TypePtr after;      // whole type after the step
};

struct IsoDerivation {
  TypePtr from, to;
  std::vector<AxiomStep> steps;
  std::string text() const;  // "k. [a7 ->] at path e : before => after"
};

// Applies one axiom instance at `path` inside `t`; nullopt when the subterm
// does not match the schema (in the requested direction).
std::optional<TypePtr> apply_axiom_at(const TypePtr& t, const Path& path,
                                      int axiom, bool forward);

ProcPtr id_process(const TypePtr& t);

struct NormalizeResult {
  TypePtr nf;
  IsoDerivation derivation;  // from input to nf, replayable
};

NormalizeResult normalize(const TypePtr& t);

std::optional<IsoDerivation> iso_decide(const TypePtr& t, const TypePtr& s);

struct AdapterPair {
  ProcPtr forward;   // checks at (dual(from), to)
  ProcPtr backward;  // checks at (dual(to), from)
  TypePtr from, to;
};

// Adapter pair for a single axiom instance; `lhs`/`rhs` are the matched
// schema sides (the subterms before and after a forward application).
AdapterPair axiom_adapters(int axiom, const TypePtr& lhs, const TypePtr& rhs);

// Wraps an adapter for a subterm rewrite at `path` of `surrounding` into an
// adapter for the whole types. Throws TypeError on path mismatch.
AdapterPair lift_adapter(const Path& path, const TypePtr& surrounding,
                         const AdapterPair& inner);

std::optional<AdapterPair> synthesize(const TypePtr& t, const TypePtr& s);

// Brute-force reachability in the axiom rewrite graph (any axiom, either
// direction, any path), bidirectional BFS with an internal size cap and a
// process-wide memo. Independent of normalize().
bool oracle_iso(const TypePtr& t, const TypePtr& s, int depth);

}  // namespace stiso
