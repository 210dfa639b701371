#pragma once

// Fuzzy expression language.
//
//   expr    := or_expr [ 'implies' expr ]          (right associative)
//   or_expr := and_expr { 'or' and_expr }
//   and_expr:= unary { 'and' unary }
//   unary   := 'not' unary | atom
//   atom    := identifier | number | '(' expr ')'
//            | 'min' '(' expr { ',' expr } ')' | 'max' '(' ... ')'
//
// Numbers are plain decimals in [0, 1]. Keywords are case-sensitive.

#include "memfuzz/netlist.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace memfuzz {

enum class ExprKind { Var, Const, Not, And, Or, Implies, MinN, MaxN };

struct Expr {
    ExprKind kind = ExprKind::Const;
    std::string name;   // Var
    double value = 0.0; // Const
    std::vector<Expr> args;

    static Expr var(std::string name);
    static Expr constant(double value);
    static Expr negation(Expr e);
    static Expr conj(Expr a, Expr b);
    static Expr disj(Expr a, Expr b);
    static Expr implies(Expr a, Expr b);
    static Expr min_of(std::vector<Expr> args);
    static Expr max_of(std::vector<Expr> args);

    bool operator==(const Expr&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected);

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }
    [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

[[nodiscard]] Expr parse(std::string_view text);

/// Canonical text; parse(print(e)) == e.
[[nodiscard]] std::string print(const Expr& e);

/// and = min, or = max, not = 1 - a, implies = min(1, 1 - a + b).
[[nodiscard]] double eval_ast(const Expr& e, const Bindings& env);

[[nodiscard]] bool contains_implies(const Expr& e);

/// Variables in order of first appearance.
[[nodiscard]] std::vector<std::string> variables(const Expr& e);

} // namespace memfuzz
