#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rnet/metric.hpp"
#include "rnet/network.hpp"

namespace rnet {

// Network file:
//   {"vertices": [...], "root": id, "edges": [[u, v, c], ...], "coords": {id: [x, y]}}
// Vertex ids may be strings or integers; integers are read as their decimal
// spelling. Unknown top-level keys (such as "meta") are ignored.

NetworkSpec network_spec_from_json(const nlohmann::json& doc);
Network network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const Network& net);

// Space file: the network shape, plus an optional explicit metric "d" (matrix
// in vertex order) and optional "mass" (object keyed by id, or array). When
// "d" is absent the metric is the effective resistance of the network; when
// "mass" is absent it is the associated measure, or unit masses if the file
// has no edges.
FiniteMetricMeasureSpace space_from_json(const nlohmann::json& doc);
nlohmann::json space_to_json(const FiniteMetricMeasureSpace& space);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Network load_network(const std::filesystem::path& path);
FiniteMetricMeasureSpace load_space(const std::filesystem::path& path);

}  // namespace rnet
