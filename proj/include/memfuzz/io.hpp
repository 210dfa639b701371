#pragma once

// JSON encodings of device parameters and netlists.
//
// Netlist: {"inputs": [names], "gates": [{"id", "kind", "args", "value"?}],
//           "outputs": [ids]}

#include "memfuzz/device.hpp"
#include "memfuzz/netlist.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace memfuzz {

[[nodiscard]] nlohmann::json to_json(const DeviceParams& params);
/// Missing keys keep their defaults; unknown keys and invalid values throw std::invalid_argument.
[[nodiscard]] DeviceParams device_params_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const Netlist& net);
/// Throws NetlistError on malformed records or violated invariants.
[[nodiscard]] Netlist netlist_from_json(const nlohmann::json& j);

[[nodiscard]] Netlist load_netlist(const std::filesystem::path& path);
void save_netlist(const std::filesystem::path& path, const Netlist& net);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

} // namespace memfuzz
