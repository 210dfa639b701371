#include "memfuzz/expr.hpp"

#include "expr_gen.hpp"

#include <doctest.h>

using namespace memfuzz;

TEST_CASE("grammar and precedence")
{
    CHECK(parse("x and not y") == Expr::conj(Expr::var("x"), Expr::negation(Expr::var("y"))));
    CHECK(parse("a implies b implies c") ==
          Expr::implies(Expr::var("a"), Expr::implies(Expr::var("b"), Expr::var("c"))));
    CHECK(parse("min(x, 0.3, y)") == Expr::min_of({Expr::var("x"), Expr::constant(0.3), Expr::var("y")}));
    CHECK(parse("a or b and c") == Expr::disj(Expr::var("a"), Expr::conj(Expr::var("b"), Expr::var("c"))));
    CHECK(parse("a or b or c") == Expr::disj(Expr::disj(Expr::var("a"), Expr::var("b")), Expr::var("c")));
    CHECK(parse("not a and b") == Expr::conj(Expr::negation(Expr::var("a")), Expr::var("b")));
    CHECK(parse("a or b implies c") == Expr::implies(Expr::disj(Expr::var("a"), Expr::var("b")), Expr::var("c")));
    CHECK(parse("not not x") == Expr::negation(Expr::negation(Expr::var("x"))));
    CHECK(parse("  (x)\n") == Expr::var("x"));
    CHECK(parse("max(.5)") == Expr::max_of({Expr::constant(0.5)}));
    CHECK(parse("1") == Expr::constant(1.0));
    CHECK(parse("1.") == Expr::constant(1.0));
    // Keywords are case-sensitive, so these are identifiers.
    CHECK(parse("Min and AND") == Expr::conj(Expr::var("Min"), Expr::var("AND")));
    CHECK(parse("x_1 and _y") == Expr::conj(Expr::var("x_1"), Expr::var("_y")));
}

TEST_CASE("syntax errors carry position and expected tokens")
{
    try {
        (void)parse("x and\n  (y or )");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 9);
        CHECK(std::find(e.expected().begin(), e.expected().end(), "identifier") != e.expected().end());
    }
    try {
        (void)parse("min(x, y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 9);
        CHECK(std::find(e.expected().begin(), e.expected().end(), "')'") != e.expected().end());
    }
    try {
        (void)parse("x y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 3);
        CHECK(std::find(e.expected().begin(), e.expected().end(), "end of input") != e.expected().end());
    }
    try {
        (void)parse("x and 1.5");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 7);
        CHECK(std::string(e.what()).find("outside [0, 1]") != std::string::npos);
    }
    try {
        (void)parse("é or x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 1);
    }
    try {
        (void)parse("x and é");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS((void)parse(""), ParseError);
    CHECK_THROWS_AS((void)parse("min()"), ParseError);
    CHECK_THROWS_AS((void)parse("min x"), ParseError);
    CHECK_THROWS_AS((void)parse("x and or y"), ParseError);
    CHECK_THROWS_AS((void)parse("max(x,)"), ParseError);
    CHECK_THROWS_AS((void)parse("."), ParseError);
    CHECK_THROWS_AS((void)parse("x & y"), ParseError);
}

TEST_CASE("direct evaluation")
{
    CHECK(eval_ast(parse("not 0.2"), {}) == doctest::Approx(0.8));
    CHECK(eval_ast(parse("0.6 implies 0.9"), {}) == 1.0);
    CHECK(eval_ast(parse("min(0.7, max(0.1, 0.5))"), {}) == 0.5);
    CHECK(eval_ast(parse("x implies y"), {{"x", 0.5}, {"y", 0.2}}) == doctest::Approx(0.7));
    CHECK(eval_ast(parse("x or y and z"), {{"x", 0.1}, {"y", 0.6}, {"z", 0.4}}) == 0.4);
    CHECK_THROWS_AS((void)eval_ast(parse("x and y"), {{"x", 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS((void)eval_ast(parse("x"), {{"x", 2.0}}), std::invalid_argument);
}

TEST_CASE("variables are listed in order of first appearance")
{
    CHECK(variables(parse("b and (a or b) implies c")) == std::vector<std::string>{"b", "a", "c"});
    CHECK(variables(parse("0.5")).empty());
}

TEST_CASE("printing")
{
    CHECK(print(parse("x and not y")) == "x and not y");
    CHECK(print(parse("(a implies b) implies c")) == "(a implies b) implies c");
    CHECK(print(parse("a or (b or c)")) == "a or (b or c)");
    CHECK(print(parse("not (a and b)")) == "not (a and b)");
    CHECK(print(parse("min(x,0.25 , y)")) == "min(x, 0.25, y)");
    CHECK(print(Expr::constant(1.0)) == "1.0");
}

TEST_CASE("property: print and parse round-trip")
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        const Expr e = testgen::random_expr(rng, 6, true);
        const std::string text = print(e);
        const Expr back = parse(text);
        REQUIRE_MESSAGE(back == e, text);
        REQUIRE(print(back) == text);
    }
    // Constants survive exactly, including ones without a short decimal form.
    for (double c : {1.0 / 3.0, 1e-7, 0.1 + 0.2, 5e-324}) CHECK(parse(print(Expr::constant(c))).value == c);
}
