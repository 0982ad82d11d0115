#include "rnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <utility>

#include "rnet/error.hpp"

namespace rnet {

namespace {

void check_conductance(double c, const std::string& u, const std::string& v) {
  if (!(c >= Network::kMinConductance) || !std::isfinite(c)) {
    throw Error(ErrorKind::NonPositiveConductance,
                "edge (" + u + ", " + v + ") has conductance " + std::to_string(c));
  }
}

}  // namespace

Network Network::build(const NetworkSpec& spec) {
  std::unordered_map<std::string, VertexId> lookup;
  for (VertexId i = 0; i < spec.vertices.size(); ++i) {
    if (!lookup.emplace(spec.vertices[i], i).second) {
      throw Error(ErrorKind::InvalidArgument, "vertex '" + spec.vertices[i] + "' declared twice");
    }
  }
  auto resolve = [&](const std::string& name) {
    auto it = lookup.find(name);
    if (it == lookup.end()) {
      throw Error(ErrorKind::UnknownVertex, "edge references undeclared vertex '" + name + "'");
    }
    return it->second;
  };

  std::vector<Edge> edges;
  edges.reserve(spec.edges.size());
  for (const auto& e : spec.edges) {
    edges.push_back({resolve(e.u), resolve(e.v), e.conductance});
  }

  auto root = lookup.find(spec.root);
  if (root == lookup.end()) {
    throw Error(ErrorKind::UnknownRoot, "root '" + spec.root + "' is not a declared vertex");
  }

  std::vector<std::optional<Point2>> coords;
  if (!spec.coords.empty()) {
    coords.resize(spec.vertices.size());
    for (const auto& [name, p] : spec.coords) coords[resolve(name)] = p;
  }
  return from_edges(spec.vertices, root->second, std::move(edges), std::move(coords));
}

Network Network::from_edges(std::vector<std::string> names, VertexId root,
                            std::vector<Edge> edges,
                            std::vector<std::optional<Point2>> coords) {
  const std::size_t n = names.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "network has no vertices");
  if (root >= n) throw Error(ErrorKind::UnknownRoot, "root index " + std::to_string(root));
  if (!coords.empty() && coords.size() != n) {
    throw Error(ErrorKind::DomainMismatch, "coordinate table size differs from vertex count");
  }

  Network net;
  net.names_ = std::move(names);
  for (VertexId i = 0; i < n; ++i) {
    if (!net.lookup_.emplace(net.names_[i], i).second) {
      throw Error(ErrorKind::InvalidArgument, "vertex '" + net.names_[i] + "' declared twice");
    }
  }

  std::map<std::pair<VertexId, VertexId>, double> merged;
  for (auto e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorKind::UnknownVertex, "edge endpoint index out of range");
    }
    if (e.u == e.v) {
      throw Error(ErrorKind::SelfLoop, "self-loop at vertex '" + net.names_[e.u] + "'");
    }
    check_conductance(e.conductance, net.names_[e.u], net.names_[e.v]);
    if (e.u > e.v) std::swap(e.u, e.v);
    auto [it, inserted] = merged.emplace(std::make_pair(e.u, e.v), e.conductance);
    if (!inserted && it->second != e.conductance) {
      throw Error(ErrorKind::DuplicateEdge, "edge (" + net.names_[e.u] + ", " + net.names_[e.v] +
                                                ") listed with differing conductances");
    }
  }

  net.root_ = root;
  net.adjacency_.resize(n);
  net.totals_.assign(n, 0.0);
  net.edges_.reserve(merged.size());
  for (const auto& [key, c] : merged) {
    net.edges_.push_back({key.first, key.second, c});
    net.adjacency_[key.first].push_back({key.second, c});
    net.adjacency_[key.second].push_back({key.first, c});
    net.totals_[key.first] += c;
    net.totals_[key.second] += c;
  }
  for (auto& row : net.adjacency_) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  std::vector<bool> seen(n, false);
  std::queue<VertexId> frontier;
  frontier.push(root);
  seen[root] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    VertexId x = frontier.front();
    frontier.pop();
    for (const auto& nb : net.adjacency_[x]) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = true;
        ++reached;
        frontier.push(nb.vertex);
      }
    }
  }
  if (reached != n) {
    VertexId missing = static_cast<VertexId>(std::find(seen.begin(), seen.end(), false) - seen.begin());
    throw Error(ErrorKind::Disconnected,
                "vertex '" + net.names_[missing] + "' is not reachable from the root");
  }

  net.coords_ = std::move(coords);
  return net;
}

std::optional<VertexId> Network::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

VertexId Network::index(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorKind::UnknownVertex, "no vertex named '" + std::string(name) + "'");
}

VertexSet Network::indices(std::span<const std::string> names) const {
  VertexSet out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(index(n));
  return out;
}

double Network::conductance(VertexId x, VertexId y) const {
  const auto& row = adjacency_.at(x);
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const Neighbor& nb, VertexId v) { return nb.vertex < v; });
  return (it != row.end() && it->vertex == y) ? it->conductance : 0.0;
}

bool Network::has_coords() const noexcept {
  return !coords_.empty() &&
         std::any_of(coords_.begin(), coords_.end(), [](const auto& p) { return p.has_value(); });
}

std::optional<Point2> Network::coord(VertexId v) const {
  if (coords_.empty()) return std::nullopt;
  return coords_.at(v);
}

Network Network::with_root(VertexId root) const {
  if (root >= size()) throw Error(ErrorKind::UnknownRoot, "root index " + std::to_string(root));
  Network copy = *this;
  copy.root_ = root;
  return copy;
}

VertexMeasure associated_measure(const Network& net) {
  VertexMeasure mu(static_cast<Eigen::Index>(net.size()));
  for (VertexId x = 0; x < net.size(); ++x) mu[static_cast<Eigen::Index>(x)] = net.total_conductance(x);
  return mu;
}

double total_mass(const Network& net) { return associated_measure(net).sum(); }

double dirichlet_energy(const Network& net, const VertexFunction& f, const VertexFunction& g) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (f.size() != n || g.size() != n) {
    throw Error(ErrorKind::DomainMismatch, "function length " + std::to_string(f.size()) + "/" +
                                               std::to_string(g.size()) + " vs " +
                                               std::to_string(n) + " vertices");
  }
  // Each unordered edge appears twice in the double sum, cancelling the 1/2.
  double energy = 0.0;
  for (const auto& e : net.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    energy += e.conductance * (f[u] - f[v]) * (g[u] - g[v]);
  }
  return energy;
}

Matrix laplacian(const Network& net) {
  const auto n = static_cast<Eigen::Index>(net.size());
  Matrix L = Matrix::Zero(n, n);
  for (const auto& e : net.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    L(u, v) -= e.conductance;
    L(v, u) -= e.conductance;
    L(u, u) += e.conductance;
    L(v, v) += e.conductance;
  }
  return L;
}

Matrix transition_matrix(const Network& net) {
  const auto n = static_cast<Eigen::Index>(net.size());
  Matrix P = Matrix::Zero(n, n);
  if (n == 1) {
    P(0, 0) = 1.0;
    return P;
  }
  for (VertexId x = 0; x < net.size(); ++x) {
    const double cx = net.total_conductance(x);
    for (const auto& nb : net.neighbors(x)) {
      P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(nb.vertex)) = nb.conductance / cx;
    }
  }
  return P;
}

VertexSet normalize_subset(const Network& net, VertexSet set) {
  for (VertexId v : set) {
    if (v >= net.size()) throw Error(ErrorKind::UnknownVertex, "vertex index " + std::to_string(v));
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

VertexSet complement(std::size_t n, const VertexSet& set) {
  auto in = membership(n, set);
  VertexSet out;
  for (VertexId v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

std::vector<bool> membership(std::size_t n, const VertexSet& set) {
  std::vector<bool> in(n, false);
  for (VertexId v : set) in.at(v) = true;
  return in;
}

}  // namespace rnet
