#include "memfuzz/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memfuzz {

nlohmann::json to_json(const DeviceParams& params)
{
    return {{"r_on", params.r_on}, {"r_off", params.r_off}, {"q0", params.q0},
            {"v0", params.v0},     {"k", params.k},         {"model", std::string(to_string(params.model))}};
}

DeviceParams device_params_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("device: expected a JSON object");
    DeviceParams p;
    for (const auto& [key, value] : j.items()) {
        auto number = [&]() {
            if (!value.is_number()) throw std::invalid_argument("device: '" + key + "' must be a number");
            return value.get<double>();
        };
        if (key == "r_on") p.r_on = number();
        else if (key == "r_off") p.r_off = number();
        else if (key == "q0") p.q0 = number();
        else if (key == "v0") p.v0 = number();
        else if (key == "k") p.k = number();
        else if (key == "model") {
            if (!value.is_string()) throw std::invalid_argument("device: 'model' must be a string");
            p.model = device_model_from_string(value.get<std::string>());
        } else {
            throw std::invalid_argument("device: unknown key '" + key + "'");
        }
    }
    p.validate();
    return p;
}

nlohmann::json to_json(const Netlist& net)
{
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : net.gates()) {
        nlohmann::json rec = {{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"args", g.args}};
        if (g.kind == NodeKind::Const) rec["value"] = g.value;
        gates.push_back(std::move(rec));
    }
    return {{"inputs", net.inputs()}, {"gates", std::move(gates)}, {"outputs", net.outputs()}};
}

namespace {

NodeId node_id(const nlohmann::json& v, const std::string& what, std::optional<NodeId> gate)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw NetlistError(what + " must be a non-negative integer", gate);
    return v.get<NodeId>();
}

} // namespace

Netlist netlist_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw NetlistError("netlist: expected a JSON object");
    for (const char* key : {"inputs", "gates", "outputs"}) {
        if (!j.contains(key) || !j.at(key).is_array())
            throw NetlistError(std::string("netlist: '") + key + "' must be an array");
    }

    std::vector<std::string> inputs;
    for (const auto& name : j.at("inputs")) {
        if (!name.is_string()) throw NetlistError("netlist: input names must be strings");
        inputs.push_back(name.get<std::string>());
    }

    std::vector<GateRecord> gates;
    std::size_t position = 0;
    for (const auto& rec : j.at("gates")) {
        const NodeId fallback = inputs.size() + position++;
        if (!rec.is_object() || !rec.contains("id")) throw NetlistError("gate record without id", fallback);
        GateRecord g;
        g.id = node_id(rec.at("id"), "id", fallback);
        if (!rec.contains("kind") || !rec.at("kind").is_string()) throw NetlistError("missing kind", g.id);
        try {
            g.kind = node_kind_from_string(rec.at("kind").get<std::string>());
        } catch (const NetlistError& e) {
            throw NetlistError(e.what(), g.id);
        }
        if (rec.contains("args")) {
            if (!rec.at("args").is_array()) throw NetlistError("args must be an array", g.id);
            for (const auto& a : rec.at("args")) g.args.push_back(node_id(a, "operand", g.id));
        }
        if (g.kind == NodeKind::Const) {
            if (!rec.contains("value") || !rec.at("value").is_number())
                throw NetlistError("Const gate needs a numeric value", g.id);
            g.value = rec.at("value").get<double>();
        } else if (rec.contains("value")) {
            throw NetlistError("only Const gates carry a value", g.id);
        }
        gates.push_back(std::move(g));
    }

    std::vector<NodeId> outputs;
    for (const auto& o : j.at("outputs")) outputs.push_back(node_id(o, "output", std::nullopt));
    return Netlist(std::move(inputs), std::move(gates), std::move(outputs));
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Netlist load_netlist(const std::filesystem::path& path)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw NetlistError(path.string() + ": " + e.what());
    }
    return netlist_from_json(j);
}

void save_netlist(const std::filesystem::path& path, const Netlist& net)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << to_json(net).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace memfuzz
