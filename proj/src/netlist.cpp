#include "memfuzz/netlist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace memfuzz {

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Min: return "Min";
    case NodeKind::Max: return "Max";
    case NodeKind::Neg: return "Neg";
    case NodeKind::Const: return "Const";
    }
    return "?";
}

NodeKind node_kind_from_string(std::string_view name)
{
    if (name == "Min") return NodeKind::Min;
    if (name == "Max") return NodeKind::Max;
    if (name == "Neg") return NodeKind::Neg;
    if (name == "Const") return NodeKind::Const;
    throw NetlistError("unknown gate kind '" + std::string(name) + "'");
}

std::size_t arity(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Min:
    case NodeKind::Max: return 2;
    case NodeKind::Neg: return 1;
    case NodeKind::Const: return 0;
    }
    return 0;
}

NetlistError::NetlistError(const std::string& what, std::optional<NodeId> gate)
    : std::runtime_error(gate ? "gate " + std::to_string(*gate) + ": " + what : what), gate_(gate)
{
}

Netlist::Netlist(std::vector<std::string> inputs, std::vector<GateRecord> gates, std::vector<NodeId> outputs)
    : inputs_(std::move(inputs)), gates_(std::move(gates)), outputs_(std::move(outputs))
{
    std::set<std::string_view> seen;
    for (const auto& name : inputs_) {
        if (name.empty()) throw NetlistError("empty input name");
        if (!seen.insert(name).second) throw NetlistError("duplicate input name '" + name + "'");
    }
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const auto& g = gates_[k];
        const NodeId expected = inputs_.size() + k;
        if (g.id != expected)
            throw NetlistError("id out of sequence, expected " + std::to_string(expected), g.id);
        if (g.args.size() != arity(g.kind))
            throw NetlistError(std::string(to_string(g.kind)) + " takes " + std::to_string(arity(g.kind)) +
                                   " operands, got " + std::to_string(g.args.size()),
                               g.id);
        for (NodeId a : g.args) {
            if (a >= g.id) throw NetlistError("operand " + std::to_string(a) + " does not precede the gate", g.id);
        }
        if (g.kind == NodeKind::Const && !(g.value >= 0.0 && g.value <= 1.0))
            throw NetlistError("constant outside [0, 1]", g.id);
    }
    for (NodeId o : outputs_) {
        if (o >= node_count()) throw NetlistError("output " + std::to_string(o) + " does not exist");
    }
}

std::size_t Netlist::count(NodeKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [kind](const GateRecord& g) { return g.kind == kind; }));
}

std::size_t Netlist::comparator_count() const
{
    std::multiset<std::pair<NodeId, NodeId>> mins;
    for (const auto& g : gates_) {
        if (g.kind == NodeKind::Min) mins.emplace(std::minmax(g.args[0], g.args[1]));
    }
    std::size_t n = 0;
    for (const auto& g : gates_) {
        if (g.kind != NodeKind::Max) continue;
        auto it = mins.find(std::minmax(g.args[0], g.args[1]));
        if (it != mins.end()) {
            mins.erase(it);
            ++n;
        }
    }
    return n;
}

std::size_t Netlist::depth() const
{
    std::vector<std::size_t> level(node_count(), 0);
    std::size_t deepest = 0;
    for (const auto& g : gates_) {
        std::size_t d = 0;
        for (NodeId a : g.args) d = std::max(d, level[a]);
        if (g.kind == NodeKind::Min || g.kind == NodeKind::Max) ++d;
        level[g.id] = d;
        deepest = std::max(deepest, d);
    }
    return deepest;
}

NetlistBuilder::NetlistBuilder(std::vector<std::string> inputs) : inputs_(std::move(inputs)) {}

NodeId NetlistBuilder::input(std::size_t index) const
{
    if (index >= inputs_.size()) throw std::out_of_range("NetlistBuilder: input index out of range");
    return index;
}

NodeId NetlistBuilder::push(NodeKind kind, std::vector<NodeId> args, double value)
{
    const NodeId id = inputs_.size() + gates_.size();
    for (NodeId a : args) {
        if (a >= id) throw NetlistError("operand " + std::to_string(a) + " does not exist yet", id);
    }
    gates_.push_back({id, kind, std::move(args), value});
    return id;
}

NodeId NetlistBuilder::add_min(NodeId a, NodeId b) { return push(NodeKind::Min, {a, b}); }
NodeId NetlistBuilder::add_max(NodeId a, NodeId b) { return push(NodeKind::Max, {a, b}); }
NodeId NetlistBuilder::add_neg(NodeId a) { return push(NodeKind::Neg, {a}); }

NodeId NetlistBuilder::add_const(double value)
{
    if (!(value >= 0.0 && value <= 1.0))
        throw NetlistError("constant outside [0, 1]", inputs_.size() + gates_.size());
    return push(NodeKind::Const, {}, value);
}

void NetlistBuilder::add_output(NodeId id) { outputs_.push_back(id); }
void NetlistBuilder::set_outputs(std::vector<NodeId> ids) { outputs_ = std::move(ids); }

Netlist NetlistBuilder::build() const { return Netlist(inputs_, gates_, outputs_); }

ComparatorNodes comparator(NetlistBuilder& builder, NodeId a, NodeId b)
{
    const NodeId hi = builder.add_max(a, b);
    const NodeId lo = builder.add_min(a, b);
    return {hi, lo};
}

ImplicationNodes implication_network(NetlistBuilder& builder, NodeId a, NodeId not_a, NodeId b, NodeId not_b)
{
    const NodeId impl = builder.add_max(not_a, b);
    const NodeId not_impl = builder.add_min(a, not_b);
    return {impl, not_impl};
}

namespace {

std::vector<std::string> numbered_inputs(std::size_t n)
{
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

// Wires holding nullopt carry a sentinel larger than any input.
std::vector<NodeId> sort_wires(NetlistBuilder& builder, std::size_t n)
{
    const std::size_t width = std::bit_ceil(n);
    std::vector<std::optional<NodeId>> wire(width);
    for (std::size_t i = 0; i < n; ++i) wire[i] = builder.input(i);

    auto exchange = [&](std::size_t lo_pos, std::size_t hi_pos) {
        auto& lo = wire[lo_pos];
        auto& hi = wire[hi_pos];
        if (!lo && !hi) return;
        if (!lo || !hi) {
            // The sentinel always ends up on the high wire.
            if (!lo) std::swap(lo, hi);
            return;
        }
        const auto [h, l] = comparator(builder, *lo, *hi);
        lo = l;
        hi = h;
    };

    for (std::size_t k = 2; k <= width; k <<= 1) {
        for (std::size_t j = k >> 1; j > 0; j >>= 1) {
            for (std::size_t i = 0; i < width; ++i) {
                const std::size_t partner = i ^ j;
                if (partner <= i) continue;
                if ((i & k) == 0) {
                    exchange(i, partner);
                } else {
                    exchange(partner, i);
                }
            }
        }
    }

    std::vector<NodeId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(*wire[i]);
    return out;
}

} // namespace

Netlist bitonic_network(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("bitonic_network: n must be at least 1");
    NetlistBuilder builder(numbered_inputs(n));
    builder.set_outputs(sort_wires(builder, n));
    return builder.build();
}

Netlist median_network(std::size_t n)
{
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("median_network: n must be odd");
    NetlistBuilder builder(numbered_inputs(n));
    const auto sorted = sort_wires(builder, n);
    builder.add_output(sorted[n / 2]);
    return builder.build();
}

double lukasiewicz_implies(double a, double b)
{
    return std::min(1.0, 1.0 - a + b);
}

std::vector<double> bind_inputs(const Netlist& net, const Bindings& values)
{
    std::vector<double> bound;
    bound.reserve(net.inputs().size());
    for (const auto& name : net.inputs()) {
        auto it = values.find(name);
        if (it == values.end()) throw std::invalid_argument("unbound input '" + name + "'");
        bound.push_back(it->second);
    }
    for (const auto& [name, value] : values) {
        if (std::find(net.inputs().begin(), net.inputs().end(), name) == net.inputs().end())
            throw std::invalid_argument("no input named '" + name + "'");
    }
    return bound;
}

namespace {

void check_inputs(const Netlist& net, std::span<const double> inputs)
{
    if (inputs.size() != net.inputs().size())
        throw std::invalid_argument("expected " + std::to_string(net.inputs().size()) + " input values, got " +
                                    std::to_string(inputs.size()));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!(inputs[i] >= 0.0 && inputs[i] <= 1.0))
            throw std::invalid_argument("input '" + net.inputs()[i] + "' outside [0, 1]");
    }
}

template <typename MinMax>
std::vector<double> evaluate_with(const Netlist& net, std::span<const double> inputs, MinMax&& min_max)
{
    check_inputs(net, inputs);
    std::vector<double> node(net.node_count());
    std::copy(inputs.begin(), inputs.end(), node.begin());
    for (const auto& g : net.gates()) {
        switch (g.kind) {
        case NodeKind::Min:
        case NodeKind::Max: node[g.id] = min_max(g, node[g.args[0]], node[g.args[1]]); break;
        case NodeKind::Neg: node[g.id] = 1.0 - node[g.args[0]]; break;
        case NodeKind::Const: node[g.id] = g.value; break;
        }
    }
    std::vector<double> out;
    out.reserve(net.outputs().size());
    for (NodeId o : net.outputs()) out.push_back(node[o]);
    return out;
}

} // namespace

std::vector<double> evaluate_ideal(const Netlist& net, std::span<const double> inputs)
{
    return evaluate_with(net, inputs, [](const GateRecord& g, double a, double b) {
        return g.kind == NodeKind::Min ? std::min(a, b) : std::max(a, b);
    });
}

std::vector<double> evaluate_ideal(const Netlist& net, const Bindings& values)
{
    const auto bound = bind_inputs(net, values);
    return evaluate_ideal(net, std::span<const double>(bound));
}

std::vector<double> evaluate_mu(const Netlist& net, std::span<const double> inputs, MEfficiency mu)
{
    return evaluate_with(net, inputs, [mu](const GateRecord& g, double a, double b) {
        return g.kind == NodeKind::Min ? steady_state_min(a, b, mu) : steady_state_max(a, b, mu);
    });
}

std::vector<double> evaluate_mu(const Netlist& net, const Bindings& values, MEfficiency mu)
{
    const auto bound = bind_inputs(net, values);
    return evaluate_mu(net, std::span<const double>(bound), mu);
}

NetlistInstance::NetlistInstance(Netlist net, const DeviceParams& params, double r_load)
    : net_(std::move(net)), states_(net_.gates().size())
{
    for (std::size_t k = 0; k < net_.gates().size(); ++k) {
        const auto kind = net_.gates()[k].kind;
        if (kind == NodeKind::Max) states_[k] = make_gate(GateKind::Max, params, r_load);
        if (kind == NodeKind::Min) states_[k] = make_gate(GateKind::Min, params, r_load);
    }
}

const GateState& NetlistInstance::gate_state(NodeId id) const
{
    const auto& s = states_.at(id - net_.inputs().size());
    if (!s) throw std::invalid_argument("node " + std::to_string(id) + " is not a Min/Max gate");
    return *s;
}

GateState& NetlistInstance::gate_state(NodeId id)
{
    return const_cast<GateState&>(std::as_const(*this).gate_state(id));
}

std::vector<double> evaluate_transient(NetlistInstance& instance, const Bindings& values, double dt, double t_max)
{
    if (!std::isfinite(dt) || !(dt > 0.0)) throw std::invalid_argument("evaluate_transient: dt must be positive");
    if (!std::isfinite(t_max) || t_max < 0.0)
        throw std::invalid_argument("evaluate_transient: t_max must be non-negative");
    const Netlist& net = instance.netlist();
    const auto bound = bind_inputs(net, values);
    check_inputs(net, bound);

    return evaluate_with(net, bound, [&](const GateRecord& g, double a, double b) {
        GateState& state = instance.gate_state(g.id);
        if (t_max == 0.0) return read_gate(a, b, state);
        const double step = std::min({dt, stable_step(a, b, state), t_max});
        auto run = simulate_gate(a, b, state, step, t_max);
        state = run.state;
        // Output voltages can exceed [0, 1] only by rounding.
        return std::clamp(read_gate(a, b, state), 0.0, 1.0);
    });
}

} // namespace memfuzz
