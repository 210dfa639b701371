#pragma once

// Feed-forward fuzzy netlists.
//
// Node ids are dense: inputs occupy 0..I-1 in declaration order and gate k
// has id I+k. Every operand id is smaller than the id of the gate using it,
// so the gate list is already a topological order.

#include "memfuzz/device.hpp"
#include "memfuzz/gate.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memfuzz {

using NodeId = std::size_t;
using Bindings = std::map<std::string, double, std::less<>>;

enum class NodeKind { Min, Max, Neg, Const };

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);
[[nodiscard]] std::size_t arity(NodeKind kind);

struct GateRecord {
    NodeId id = 0;
    NodeKind kind = NodeKind::Const;
    std::vector<NodeId> args;
    double value = 0.0; // Const only

    bool operator==(const GateRecord&) const = default;
};

/// Structural violation found while assembling or loading a netlist.
class NetlistError : public std::runtime_error {
public:
    NetlistError(const std::string& what, std::optional<NodeId> gate = std::nullopt);
    [[nodiscard]] std::optional<NodeId> gate() const { return gate_; }

private:
    std::optional<NodeId> gate_;
};

class Netlist {
public:
    Netlist() = default;
    /// Validates the feed-forward invariants; throws NetlistError on the first violation.
    Netlist(std::vector<std::string> inputs, std::vector<GateRecord> gates, std::vector<NodeId> outputs);

    [[nodiscard]] const std::vector<std::string>& inputs() const { return inputs_; }
    [[nodiscard]] const std::vector<GateRecord>& gates() const { return gates_; }
    [[nodiscard]] const std::vector<NodeId>& outputs() const { return outputs_; }

    [[nodiscard]] std::size_t node_count() const { return inputs_.size() + gates_.size(); }
    [[nodiscard]] bool is_input(NodeId id) const { return id < inputs_.size(); }
    [[nodiscard]] const GateRecord& gate(NodeId id) const { return gates_.at(id - inputs_.size()); }

    [[nodiscard]] std::size_t count(NodeKind kind) const;
    /// Min/Max gate pairs sharing both operands.
    [[nodiscard]] std::size_t comparator_count() const;
    /// Longest chain of Min/Max gates from any input to any node.
    [[nodiscard]] std::size_t depth() const;

    bool operator==(const Netlist&) const = default;

private:
    std::vector<std::string> inputs_;
    std::vector<GateRecord> gates_;
    std::vector<NodeId> outputs_;
};

class NetlistBuilder {
public:
    explicit NetlistBuilder(std::vector<std::string> inputs);

    [[nodiscard]] NodeId input(std::size_t index) const;
    [[nodiscard]] std::size_t input_count() const { return inputs_.size(); }

    NodeId add_min(NodeId a, NodeId b);
    NodeId add_max(NodeId a, NodeId b);
    NodeId add_neg(NodeId a);
    NodeId add_const(double value);

    void add_output(NodeId id);
    void set_outputs(std::vector<NodeId> ids);

    [[nodiscard]] Netlist build() const;

private:
    NodeId push(NodeKind kind, std::vector<NodeId> args, double value = 0.0);

    std::vector<std::string> inputs_;
    std::vector<GateRecord> gates_;
    std::vector<NodeId> outputs_;
};

struct ComparatorNodes {
    NodeId hi;
    NodeId lo;
};

/// Appends Max(a, b) then Min(a, b).
ComparatorNodes comparator(NetlistBuilder& builder, NodeId a, NodeId b);

struct ImplicationNodes {
    NodeId impl;     // max(1 - a, b)
    NodeId not_impl; // min(a, 1 - b)
};

/// Implication and its negation from inputs and their precomputed negations.
ImplicationNodes implication_network(NetlistBuilder& builder, NodeId a, NodeId not_a, NodeId b,
                                     NodeId not_b);

/// Batcher bitonic sorter over inputs x0..x{n-1}, outputs ascending.
/// For n not a power of two the missing wires are sentinels above every
/// input, so comparators touching them are resolved while building.
[[nodiscard]] Netlist bitonic_network(std::size_t n);

/// Bitonic sorter exposing only the middle output. n must be odd.
[[nodiscard]] Netlist median_network(std::size_t n);

/// min(1, 1 - a + b).
[[nodiscard]] double lukasiewicz_implies(double a, double b);

/// Exact min / max / 1-a / const semantics.
[[nodiscard]] std::vector<double> evaluate_ideal(const Netlist& net, const Bindings& values);
[[nodiscard]] std::vector<double> evaluate_ideal(const Netlist& net, std::span<const double> inputs);

/// Min/Max gates replaced by their m-efficiency-degraded settled outputs.
[[nodiscard]] std::vector<double> evaluate_mu(const Netlist& net, const Bindings& values, MEfficiency mu);
[[nodiscard]] std::vector<double> evaluate_mu(const Netlist& net, std::span<const double> inputs,
                                              MEfficiency mu);

/// A netlist together with one persistent memristor gate per Min/Max node.
class NetlistInstance {
public:
    NetlistInstance(Netlist net, const DeviceParams& params, double r_load);

    [[nodiscard]] const Netlist& netlist() const { return net_; }
    /// Gate state of the Min/Max node with the given id.
    [[nodiscard]] const GateState& gate_state(NodeId id) const;
    GateState& gate_state(NodeId id);

private:
    Netlist net_;
    std::vector<std::optional<GateState>> states_; // indexed by gate position
};

/// Settles Min/Max gates one at a time in topological order, each against
/// its already settled operands, continuing from the instance's stored
/// gate states. The per-gate step is min(dt, stable_step(...)). With
/// t_max = 0 the gates are only read out.
[[nodiscard]] std::vector<double> evaluate_transient(NetlistInstance& instance, const Bindings& values,
                                                     double dt, double t_max);

/// Binds named values to input positions; throws std::invalid_argument for
/// unbound or unknown names and values outside [0, 1].
[[nodiscard]] std::vector<double> bind_inputs(const Netlist& net, const Bindings& values);

} // namespace memfuzz
