#include "rnet/io.hpp"

#include <fstream>
#include <sstream>

#include "rnet/error.hpp"
#include "rnet/resistance.hpp"

namespace rnet {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

std::string vertex_id(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorKind::Parse, "vertex id must be a string or an integer, got " + v.dump());
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key '") + key + "'");
  return doc.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorKind::Parse, std::string(what) + " must be a number, got " + v.dump());
  return v.get<double>();
}

}  // namespace

NetworkSpec network_spec_from_json(const json& doc) {
  NetworkSpec spec;
  const json& vertices = require(doc, "vertices");
  if (!vertices.is_array()) throw Error(ErrorKind::Parse, "'vertices' must be an array");
  for (const json& v : vertices) spec.vertices.push_back(vertex_id(v));
  spec.root = vertex_id(require(doc, "root"));

  if (doc.contains("edges")) {
    const json& edges = doc.at("edges");
    if (!edges.is_array()) throw Error(ErrorKind::Parse, "'edges' must be an array");
    for (const json& e : edges) {
      if (e.is_array() && e.size() == 3) {
        spec.edges.push_back({vertex_id(e[0]), vertex_id(e[1]), number(e[2], "conductance")});
      } else if (e.is_object()) {
        spec.edges.push_back({vertex_id(require(e, "u")), vertex_id(require(e, "v")), number(require(e, "c"), "conductance")});
      } else {
        throw Error(ErrorKind::Parse, "edge must be [u, v, c] or {u, v, c}, got " + e.dump());
      }
    }
  }
  if (doc.contains("coords")) {
    const json& coords = doc.at("coords");
    if (!coords.is_object()) throw Error(ErrorKind::Parse, "'coords' must be an object");
    for (const auto& [key, value] : coords.items()) {
      if (!value.is_array() || value.size() != 2) throw Error(ErrorKind::Parse, "coordinate of '" + key + "' must be [x, y]");
      spec.coords[key] = Point2{number(value[0], "coordinate"), number(value[1], "coordinate")};
    }
  }
  return spec;
}

Network network_from_json(const json& doc) { return Network::build(network_spec_from_json(doc)); }

json network_to_json(const Network& net) {
  json doc;
  doc["vertices"] = net.names();
  doc["root"] = net.name(net.root());
  json edges = json::array();
  for (const Edge& e : net.edges()) edges.push_back({net.name(e.u), net.name(e.v), e.conductance});
  doc["edges"] = std::move(edges);
  if (net.has_coords()) {
    json coords = json::object();
    for (VertexId v = 0; v < net.size(); ++v) {
      if (const auto p = net.coord(v)) coords[net.name(v)] = {p->x, p->y};
    }
    doc["coords"] = std::move(coords);
  }
  return doc;
}

FiniteMetricMeasureSpace space_from_json(const json& doc) {
  const NetworkSpec spec = network_spec_from_json(doc);
  FiniteMetricMeasureSpace space;
  space.points = spec.vertices;
  const auto n = static_cast<Index>(spec.vertices.size());
  const auto root = std::find(spec.vertices.begin(), spec.vertices.end(), spec.root);
  if (root == spec.vertices.end()) throw Error(ErrorKind::UnknownRoot, "root '" + spec.root + "' is not a vertex");
  space.root = static_cast<std::size_t>(root - spec.vertices.begin());

  std::optional<Network> net;
  if (!spec.edges.empty() || !doc.contains("d")) net = Network::build(spec);

  if (doc.contains("d")) {
    const json& d = doc.at("d");
    if (!d.is_array() || static_cast<Index>(d.size()) != n) throw Error(ErrorKind::Parse, "'d' must be an n x n array");
    space.d.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      if (!d[i].is_array() || static_cast<Index>(d[i].size()) != n) {
        throw Error(ErrorKind::Parse, "'d' must be an n x n array");
      }
      for (Index j = 0; j < n; ++j) space.d(i, j) = number(d[i][j], "distance");
    }
  } else {
    space.d = resistance_values(*net);
  }

  if (doc.contains("mass")) {
    const json& mass = doc.at("mass");
    space.mass = Vector::Zero(n);
    if (mass.is_array()) {
      if (static_cast<Index>(mass.size()) != n) throw Error(ErrorKind::Parse, "'mass' array has the wrong length");
      for (Index i = 0; i < n; ++i) space.mass[i] = number(mass[i], "mass");
    } else if (mass.is_object()) {
      for (const auto& [key, value] : mass.items()) {
        const auto it = std::find(spec.vertices.begin(), spec.vertices.end(), key);
        if (it == spec.vertices.end()) throw Error(ErrorKind::UnknownVertex, "mass for unknown vertex '" + key + "'");
        space.mass[it - spec.vertices.begin()] = number(value, "mass");
      }
    } else {
      throw Error(ErrorKind::Parse, "'mass' must be an array or an object");
    }
  } else if (net && !spec.edges.empty()) {
    space.mass = associated_measure(*net);
  } else {
    space.mass = Vector::Ones(n);
  }
  validate_space(space);
  return space;
}

json space_to_json(const FiniteMetricMeasureSpace& space) {
  json doc;
  doc["vertices"] = space.points;
  doc["root"] = space.points.at(space.root);
  json d = json::array();
  for (Index i = 0; i < space.d.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < space.d.cols(); ++j) row.push_back(space.d(i, j));
    d.push_back(std::move(row));
  }
  doc["d"] = std::move(d);
  doc["mass"] = std::vector<double>(space.mass.data(), space.mass.data() + space.mass.size());
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

Network load_network(const std::filesystem::path& path) {
  try {
    return network_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

FiniteMetricMeasureSpace load_space(const std::filesystem::path& path) {
  try {
    return space_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

}  // namespace rnet
