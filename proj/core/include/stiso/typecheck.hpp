#pragma once

// Typing judgments for expressions and processes, with interface inference
// across parallel composition via first-order unification over session types
// extended with metavariables.

#include <map>
#include <string>
#include <vector>

#include "stiso/syntax.hpp"

namespace stiso {

using TypeEnv = std::map<std::string, Base>;

struct InterfacePair {
  TypePtr left;
  TypePtr right;
};

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Derivation {
  std::string rule;
  std::string judgment;
  std::vector<Derivation> premises;
};

// Renders rule name + judgment per line, two-space indent per level.
std::string derivation_text(const Derivation& d);

Base type_expr(const TypeEnv& env, const ExprPtr& e);

// Checks env |- p |> iface.left ; iface.right. iface must contain no
// metavariables. Throws TypeError on failure.
Derivation check_process(const TypeEnv& env, const ProcPtr& p, const InterfacePair& iface);

// Synthesis mode: most general interface pair, metavariables standing for
// the unconstrained select-alternatives.
InterfacePair infer_interfaces(const TypeEnv& env, const ProcPtr& p);

bool check_closed(const ProcPtr& p);
bool checks_at(const ProcPtr& p, const InterfacePair& iface);

}  // namespace stiso
