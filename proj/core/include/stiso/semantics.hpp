#pragma once

// Operational semantics: expression evaluation, structural congruence as a
// canonical parallel list, the one-step reduction relation, correctness
// (every maximal reduction ends in 0), a type-directed random process
// generator, and a randomized refuter for contextual equivalence.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stiso/typecheck.hpp"

namespace stiso {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Value eval_expr(const ExprPtr& e);

// Canonical form of structural congruence: the par-flattening with maximal
// runs of consecutive idle elements collapsed to a single idle. Two
// processes are congruent iff their canonical lists are alpha-equal
// elementwise.
using ParList = std::vector<ProcPtr>;

ParList canon(const ProcPtr& p);
ProcPtr canon_process(const ProcPtr& p);
bool congruent(const ProcPtr& p, const ProcPtr& q);

struct Step {
  std::string rule;
  std::size_t position;  // index into the canonical ParList
  ProcPtr next;          // canonicalized successor
};

struct StepSet {
  std::vector<Step> steps;
  std::optional<std::string> error;  // eval-error hit while enumerating
};

StepSet step(const ProcPtr& p);

struct TraceEntry {
  std::string rule;
  std::size_t position;
  ProcPtr state;
};

struct Trace {
  ProcPtr initial;
  std::vector<TraceEntry> entries;
  std::optional<std::string> error;

  std::string text() const;  // numbered "k. [rule] process-text" lines
};

struct Correctness {
  bool correct;
  std::optional<Trace> witness;  // maximal failing trace when incorrect
};

Correctness is_correct(const ProcPtr& p);

// Type-directed random generation; the result always checks at iface.
// Deterministic in seed; budget exhaustion degrades to the canonical
// straight-line inhabitant.
ProcPtr generate_typed(const InterfacePair& iface, std::uint64_t seed, int budget);

struct Refutation {
  ProcPtr context_left, context_right;
  bool p_correct, q_correct;
  std::string context_text() const;
};

// Randomized refuter for Definition-2 equivalence. no-counterexample
// (nullopt) does NOT establish equivalence.
std::optional<Refutation> equiv_refute(const ProcPtr& p, const ProcPtr& q,
                                       const InterfacePair& iface, int trials,
                                       std::uint64_t seed);

}  // namespace stiso
