#include "memfuzz/compiler.hpp"

#include <map>
#include <span>

namespace memfuzz {

Expr lower_implications(const Expr& e)
{
    if (e.kind == ExprKind::Implies)
        return Expr::disj(Expr::negation(lower_implications(e.args[0])), lower_implications(e.args[1]));
    Expr out = e;
    for (auto& a : out.args) a = lower_implications(a);
    return out;
}

namespace {

Expr nnf(const Expr& e, bool negate)
{
    switch (e.kind) {
    case ExprKind::Var: return negate ? Expr::negation(e) : e;
    case ExprKind::Const: return negate ? Expr::constant(1.0 - e.value) : e;
    case ExprKind::Not: return nnf(e.args[0], !negate);
    case ExprKind::Implies: return nnf(lower_implications(e), negate);
    case ExprKind::And:
    case ExprKind::Or: {
        Expr a = nnf(e.args[0], negate);
        Expr b = nnf(e.args[1], negate);
        const bool is_and = (e.kind == ExprKind::And) != negate;
        return is_and ? Expr::conj(std::move(a), std::move(b)) : Expr::disj(std::move(a), std::move(b));
    }
    case ExprKind::MinN:
    case ExprKind::MaxN: {
        std::vector<Expr> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(nnf(a, negate));
        const bool is_min = (e.kind == ExprKind::MinN) != negate;
        return is_min ? Expr::min_of(std::move(args)) : Expr::max_of(std::move(args));
    }
    }
    return e;
}

class Emitter {
public:
    explicit Emitter(const std::vector<std::string>& vars) : builder_(vars)
    {
        for (std::size_t i = 0; i < vars.size(); ++i) index_[vars[i]] = builder_.input(i);
    }

    NodeId emit(const Expr& e)
    {
        switch (e.kind) {
        case ExprKind::Var: return index_.at(e.name);
        case ExprKind::Const: return builder_.add_const(e.value);
        case ExprKind::Not: return negated(e.args[0].name);
        case ExprKind::And: {
            const NodeId a = emit(e.args[0]);
            return builder_.add_min(a, emit(e.args[1]));
        }
        case ExprKind::Or: {
            const NodeId a = emit(e.args[0]);
            return builder_.add_max(a, emit(e.args[1]));
        }
        case ExprKind::MinN: return tree(e.args, true);
        case ExprKind::MaxN: return tree(e.args, false);
        case ExprKind::Implies: break;
        }
        throw std::logic_error("compile: expression not in negation normal form");
    }

    Netlist finish(NodeId root)
    {
        builder_.add_output(root);
        return builder_.build();
    }

private:
    NodeId negated(const std::string& name)
    {
        auto it = neg_.find(name);
        if (it != neg_.end()) return it->second;
        const NodeId id = builder_.add_neg(index_.at(name));
        neg_.emplace(name, id);
        return id;
    }

    NodeId tree(std::span<const Expr> args, bool is_min)
    {
        if (args.size() == 1) return emit(args.front());
        const std::size_t half = args.size() / 2;
        const NodeId a = tree(args.first(half), is_min);
        const NodeId b = tree(args.subspan(half), is_min);
        return is_min ? builder_.add_min(a, b) : builder_.add_max(a, b);
    }

    NetlistBuilder builder_;
    std::map<std::string, NodeId, std::less<>> index_;
    std::map<std::string, NodeId, std::less<>> neg_;
};

} // namespace

Expr push_negations(const Expr& e)
{
    return nnf(e, false);
}

CompileResult compile_with_diagnostics(const Expr& e)
{
    CompileResult result;
    if (contains_implies(e)) {
        result.warnings.push_back(
            "implication compiled as max(1 - a, b); the expression semantics min(1, 1 - a + b) "
            "is not expressible with min/max gates (a = b = 0.5 gives 0.5 instead of 1)");
    }
    const Expr normal = push_negations(e);
    Emitter emitter(variables(e));
    result.netlist = emitter.finish(emitter.emit(normal));
    return result;
}

Netlist compile(const Expr& e)
{
    return compile_with_diagnostics(e).netlist;
}

} // namespace memfuzz
