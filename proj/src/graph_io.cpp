#include "oim/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "oim/errors.hpp"

namespace oim {

using nlohmann::json;

GraphDocument parse_graph(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphFormatError(std::string("graph: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw GraphFormatError("graph: top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw GraphFormatError("graph: missing integer field \"n\"");
  const auto n_signed = doc["n"].get<long long>();
  if (n_signed <= 0) throw GraphFormatError("graph: \"n\" must be positive");
  const auto n = static_cast<std::size_t>(n_signed);
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw GraphFormatError("graph: missing array field \"edges\"");

  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number())
      throw GraphFormatError("graph: each edge must be [i, j, w]");
    const auto i = e[0].get<long long>();
    const auto k = e[1].get<long long>();
    const double w = e[2].get<double>();
    if (i < 0 || k < 0 || static_cast<std::size_t>(k) >= n)
      throw GraphFormatError("graph: edge index out of range");
    if (i >= k) throw GraphFormatError("graph: edge requires i < j");
    if (!std::isfinite(w) || w == 0.0) throw GraphFormatError("graph: edge weight must be finite and nonzero");
    if (!seen.emplace(i, k).second) throw GraphFormatError("graph: duplicate edge");
    edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(k), w});
  }
  json metadata = doc.contains("metadata") ? doc["metadata"] : json(nullptr);
  return {CouplingMatrix::from_edges(n, edges), std::move(metadata)};
}

GraphDocument read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("graph: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

json graph_to_json(const CouplingMatrix& j, const json& metadata) {
  json doc;
  doc["n"] = j.size();
  json edges = json::array();
  for (const auto& e : j.edges()) edges.push_back(json::array({e.i, e.j, e.weight}));
  doc["edges"] = std::move(edges);
  if (!metadata.is_null()) doc["metadata"] = metadata;
  return doc;
}

std::string serialize_graph(const CouplingMatrix& j, const json& metadata) {
  return graph_to_json(j, metadata).dump() + "\n";
}

}  // namespace oim
