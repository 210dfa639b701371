#include "memfuzz/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace memfuzz {

Expr Expr::var(std::string name)
{
    Expr e;
    e.kind = ExprKind::Var;
    e.name = std::move(name);
    return e;
}

Expr Expr::constant(double value)
{
    Expr e;
    e.kind = ExprKind::Const;
    e.value = value;
    return e;
}

namespace {

Expr node(ExprKind kind, std::vector<Expr> args)
{
    Expr e;
    e.kind = kind;
    e.args = std::move(args);
    return e;
}

} // namespace

Expr Expr::negation(Expr e) { return node(ExprKind::Not, {std::move(e)}); }
Expr Expr::conj(Expr a, Expr b) { return node(ExprKind::And, {std::move(a), std::move(b)}); }
Expr Expr::disj(Expr a, Expr b) { return node(ExprKind::Or, {std::move(a), std::move(b)}); }
Expr Expr::implies(Expr a, Expr b) { return node(ExprKind::Implies, {std::move(a), std::move(b)}); }
Expr Expr::min_of(std::vector<Expr> args) { return node(ExprKind::MinN, std::move(args)); }
Expr Expr::max_of(std::vector<Expr> args) { return node(ExprKind::MaxN, std::move(args)); }

namespace {

std::string describe(const std::vector<std::string>& expected)
{
    std::string s;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) s += i + 1 == expected.size() ? " or " : ", ";
        s += expected[i];
    }
    return s;
}

} // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
                         (expected.empty() ? "" : " (expected " + describe(expected) + ")")),
      line_(line), column_(column), expected_(std::move(expected))
{
}

namespace {

enum class Tok { Ident, Number, LParen, RParen, Comma, And, Or, Not, Implies, Min, Max, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        skip_space();
        const std::size_t line = line_;
        const std::size_t col = col_;
        if (pos_ >= src_.size()) return {Tok::End, {}, line, col};

        const char c = src_[pos_];
        auto single = [&](Tok kind) {
            advance(1);
            return Token{kind, src_.substr(pos_ - 1, 1), line, col};
        };
        if (c == '(') return single(Tok::LParen);
        if (c == ')') return single(Tok::RParen);
        if (c == ',') return single(Tok::Comma);

        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(src_[end])) ++end;
            auto text = src_.substr(pos_, end - pos_);
            advance(end - pos_);
            return {keyword(text), text, line, col};
        }
        if (is_digit(c) || c == '.') {
            std::size_t end = pos_;
            while (end < src_.size() && is_digit(src_[end])) ++end;
            if (end < src_.size() && src_[end] == '.') {
                ++end;
                while (end < src_.size() && is_digit(src_[end])) ++end;
            }
            auto text = src_.substr(pos_, end - pos_);
            if (text == ".") throw ParseError(line, col, "malformed number '.'", {});
            advance(end - pos_);
            return {Tok::Number, text, line, col};
        }
        throw ParseError(line, col, "unexpected character '" + std::string(utf8_char()) + "'", {});
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    static Tok keyword(std::string_view w)
    {
        if (w == "and") return Tok::And;
        if (w == "or") return Tok::Or;
        if (w == "not") return Tok::Not;
        if (w == "implies") return Tok::Implies;
        if (w == "min") return Tok::Min;
        if (w == "max") return Tok::Max;
        return Tok::Ident;
    }

    std::string_view utf8_char() const
    {
        std::size_t end = pos_ + 1;
        while (end < src_.size() && (static_cast<unsigned char>(src_[end]) & 0xC0) == 0x80) ++end;
        return src_.substr(pos_, end - pos_);
    }

    void advance(std::size_t n)
    {
        for (std::size_t i = 0; i < n; ++i, ++pos_) {
            const auto ch = static_cast<unsigned char>(src_[pos_]);
            if (ch == '\n') {
                ++line_;
                col_ = 1;
            } else if ((ch & 0xC0) != 0x80) {
                ++col_;
            }
        }
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

const std::vector<std::string> kAtomStart = {"identifier", "number", "'('", "'not'", "'min'", "'max'"};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

    Expr parse_all()
    {
        Expr e = parse_implies();
        if (tok_.kind != Tok::End) fail({"'and'", "'or'", "'implies'", "end of input"});
        return e;
    }

private:
    void bump() { tok_ = lexer_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const std::string found = tok_.kind == Tok::End ? "end of input" : "'" + std::string(tok_.text) + "'";
        throw ParseError(tok_.line, tok_.column, "unexpected " + found, std::move(expected));
    }

    void expect(Tok kind, std::vector<std::string> expected)
    {
        if (tok_.kind != kind) fail(std::move(expected));
        bump();
    }

    Expr parse_implies()
    {
        Expr lhs = parse_or();
        if (tok_.kind == Tok::Implies) {
            bump();
            return Expr::implies(std::move(lhs), parse_implies());
        }
        return lhs;
    }

    Expr parse_or()
    {
        Expr lhs = parse_and();
        while (tok_.kind == Tok::Or) {
            bump();
            lhs = Expr::disj(std::move(lhs), parse_and());
        }
        return lhs;
    }

    Expr parse_and()
    {
        Expr lhs = parse_unary();
        while (tok_.kind == Tok::And) {
            bump();
            lhs = Expr::conj(std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expr parse_unary()
    {
        if (tok_.kind == Tok::Not) {
            bump();
            return Expr::negation(parse_unary());
        }
        return parse_atom();
    }

    Expr parse_atom()
    {
        switch (tok_.kind) {
        case Tok::Ident: {
            Expr e = Expr::var(std::string(tok_.text));
            bump();
            return e;
        }
        case Tok::Number: {
            double v = 0.0;
            const auto* first = tok_.text.data();
            const auto* last = first + tok_.text.size();
            // from_chars does not take a bare leading '.'.
            std::string padded;
            if (tok_.text.front() == '.') {
                padded = "0" + std::string(tok_.text);
                first = padded.data();
                last = first + padded.size();
            }
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last)
                throw ParseError(tok_.line, tok_.column, "malformed number '" + std::string(tok_.text) + "'", {});
            if (v > 1.0)
                throw ParseError(tok_.line, tok_.column,
                                 "constant " + std::string(tok_.text) + " outside [0, 1]", {});
            bump();
            return Expr::constant(v);
        }
        case Tok::LParen: {
            bump();
            Expr e = parse_implies();
            expect(Tok::RParen, {"'and'", "'or'", "'implies'", "')'"});
            return e;
        }
        case Tok::Min:
        case Tok::Max: {
            const bool is_min = tok_.kind == Tok::Min;
            bump();
            expect(Tok::LParen, {"'('"});
            std::vector<Expr> args;
            args.push_back(parse_implies());
            while (tok_.kind == Tok::Comma) {
                bump();
                args.push_back(parse_implies());
            }
            expect(Tok::RParen, {"'and'", "'or'", "'implies'", "','", "')'"});
            return is_min ? Expr::min_of(std::move(args)) : Expr::max_of(std::move(args));
        }
        default: fail(kAtomStart);
        }
    }

    Lexer lexer_;
    Token tok_{Tok::End, {}, 1, 1};
};

// Binding strength used by the printer.
int precedence(ExprKind kind)
{
    switch (kind) {
    case ExprKind::Implies: return 1;
    case ExprKind::Or: return 2;
    case ExprKind::And: return 3;
    case ExprKind::Not: return 4;
    default: return 5;
    }
}

std::string format_constant(double v)
{
    std::array<char, 512> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    std::string s(buf.data(), end);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

void print_into(std::string& out, const Expr& e, int context)
{
    const int prec = precedence(e.kind);
    const bool paren = prec < context;
    if (paren) out += '(';
    switch (e.kind) {
    case ExprKind::Var: out += e.name; break;
    case ExprKind::Const: out += format_constant(e.value); break;
    case ExprKind::Not:
        out += "not ";
        print_into(out, e.args[0], prec);
        break;
    case ExprKind::And:
    case ExprKind::Or:
        print_into(out, e.args[0], prec);
        out += e.kind == ExprKind::And ? " and " : " or ";
        print_into(out, e.args[1], prec + 1);
        break;
    case ExprKind::Implies:
        print_into(out, e.args[0], prec + 1);
        out += " implies ";
        print_into(out, e.args[1], prec);
        break;
    case ExprKind::MinN:
    case ExprKind::MaxN:
        out += e.kind == ExprKind::MinN ? "min(" : "max(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ", ";
            print_into(out, e.args[i], 0);
        }
        out += ')';
        break;
    }
    if (paren) out += ')';
}

void collect_variables(const Expr& e, std::vector<std::string>& out)
{
    if (e.kind == ExprKind::Var) {
        if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
        return;
    }
    for (const auto& a : e.args) collect_variables(a, out);
}

} // namespace

Expr parse(std::string_view text)
{
    return Parser(text).parse_all();
}

std::string print(const Expr& e)
{
    std::string out;
    print_into(out, e, 0);
    return out;
}

double eval_ast(const Expr& e, const Bindings& env)
{
    switch (e.kind) {
    case ExprKind::Var: {
        auto it = env.find(e.name);
        if (it == env.end()) throw std::invalid_argument("unbound variable '" + e.name + "'");
        if (!(it->second >= 0.0 && it->second <= 1.0))
            throw std::invalid_argument("variable '" + e.name + "' outside [0, 1]");
        return it->second;
    }
    case ExprKind::Const: return e.value;
    case ExprKind::Not: return 1.0 - eval_ast(e.args[0], env);
    case ExprKind::And: return std::min(eval_ast(e.args[0], env), eval_ast(e.args[1], env));
    case ExprKind::Or: return std::max(eval_ast(e.args[0], env), eval_ast(e.args[1], env));
    case ExprKind::Implies: return lukasiewicz_implies(eval_ast(e.args[0], env), eval_ast(e.args[1], env));
    case ExprKind::MinN:
    case ExprKind::MaxN: {
        double acc = eval_ast(e.args.front(), env);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
            const double v = eval_ast(e.args[i], env);
            acc = e.kind == ExprKind::MinN ? std::min(acc, v) : std::max(acc, v);
        }
        return acc;
    }
    }
    return 0.0;
}

bool contains_implies(const Expr& e)
{
    if (e.kind == ExprKind::Implies) return true;
    return std::any_of(e.args.begin(), e.args.end(), [](const Expr& a) { return contains_implies(a); });
}

std::vector<std::string> variables(const Expr& e)
{
    std::vector<std::string> out;
    collect_variables(e, out);
    return out;
}

} // namespace memfuzz
