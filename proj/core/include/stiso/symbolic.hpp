#pragma once

// Symbolic reduction over (possibly open) processes: hoisting actions out of
// parallel compositions, swapping actions on different channels, cutting
// communications across a composition, collapsing parallel identities, and
// turning conditionals with constant outputs back into outputs. Drives the
// proof search that certifies adapter pairs as isomorphism witnesses.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stiso/iso.hpp"
#include "stiso/typecheck.hpp"

namespace stiso {

struct SRStep {
  std::string rule;  // "sr-up 1" .. "sr-up 10", "sr-swap 1" .. "sr-swap 10",
                     // "sr-cond", "sr-if", "sr-comm 1/2", "sr-choice 1/2", "sr-id"
  std::string path;  // E-frame tokens from the root, e.g. "cont.inl"; "e" at top
  ProcPtr next;
};

// All one-step symbolic successors. Contexts descend through prefixes,
// branches and conditionals but never into the operands of a parallel
// composition; the composition rules themselves act on the flattened par
// spine (associativity of the composition).
std::vector<SRStep> sr_step(const ProcPtr& p);

// Recognizes (up to alpha and up to printing unit outputs as their only
// value) the identity process of some type, returning that type.
std::optional<TypePtr> recognize_id(const ProcPtr& p);

struct ProofTrace {
  ProcPtr initial;
  struct Entry {
    std::string rule, path;
    ProcPtr state;
  };
  std::vector<Entry> entries;
  ProcPtr final;
  std::string text() const;  // "k. [rule @ path] process-text"
};

enum class SearchStatus { Found, Exhausted, BudgetExceeded };

struct ProveResult {
  SearchStatus status;
  std::optional<ProofTrace> trace;
  std::size_t expanded = 0;
};

// BFS for p ~>* id(target), deduplicating states modulo alpha (and unit
// output folding). maxSteps caps node expansions; maxTermSize caps the size
// of any intermediate term. Exhausted and BudgetExceeded are both
// inconclusive, not disproofs.
ProveResult prove_identity(const ProcPtr& p, const TypePtr& target,
                           std::size_t maxSteps, std::size_t maxTermSize);

struct Certificate {
  Derivation typing_forward, typing_backward;
  ProofTrace left_identity, right_identity;
};

struct CertifyOutcome {
  bool ok = false;
  bool budget_exceeded = false;
  std::string failed_obligation;  // empty when ok
  std::optional<Certificate> certificate;
};

// The four obligations of a type isomorphism witness pair: A at
// (dual T, S), B at (dual S, T), A||B ~>* id(T), B||A ~>* id(S).
CertifyOutcome certify_iso_witnesses(const TypePtr& T, const TypePtr& S,
                                     const ProcPtr& A, const ProcPtr& B,
                                     std::size_t maxSteps);

}  // namespace stiso
