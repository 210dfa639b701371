#pragma once

// Lowering of fuzzy expressions to min/max netlists whose only negations sit
// directly on input variables.

#include "memfuzz/expr.hpp"
#include "memfuzz/netlist.hpp"

#include <string>
#include <vector>

namespace memfuzz {

/// Rewrites every Implies(a, b) as Or(Not a, b), i.e. max(1 - a, b).
[[nodiscard]] Expr lower_implications(const Expr& e);

/// Negation normal form: De Morgan pushdown until every Not wraps a Var.
/// Not(Const c) folds to Const(1 - c). Implications are lowered first.
[[nodiscard]] Expr push_negations(const Expr& e);

struct CompileResult {
    Netlist netlist;
    std::vector<std::string> warnings;
};

/// Compiles to a one-output netlist with inputs in order of first
/// appearance. n-ary min/max become balanced binary trees and each negated
/// variable gets one shared Neg gate.
[[nodiscard]] CompileResult compile_with_diagnostics(const Expr& e);
[[nodiscard]] Netlist compile(const Expr& e);

} // namespace memfuzz
