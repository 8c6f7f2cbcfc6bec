#pragma once

// Graph documents: {"n": <int>, "edges": [[i, j, w], ...]} with 0-based indices,
// i < j, no duplicate pairs, w finite and nonzero. An optional "metadata" object
// is carried through untouched.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "oim/ising.hpp"

namespace oim {

struct GraphDocument {
  CouplingMatrix couplings;
  nlohmann::json metadata;  // null when absent
};

GraphDocument parse_graph(std::string_view text);
GraphDocument read_graph(const std::filesystem::path& path);

nlohmann::json graph_to_json(const CouplingMatrix& j, const nlohmann::json& metadata = nullptr);
std::string serialize_graph(const CouplingMatrix& j, const nlohmann::json& metadata = nullptr);

}  // namespace oim
