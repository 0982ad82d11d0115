#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace rnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Vertices are addressed by their position in declaration order.
using VertexId = std::size_t;
using VertexSet = std::vector<VertexId>;

/// Real-valued function on the vertex set, indexed by VertexId.
using VertexFunction = Vector;
/// Nonnegative mass per vertex, indexed by VertexId.
using VertexMeasure = Vector;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  double conductance = 0.0;
};

/// Name-based description of a network, as read from a network file.
struct NetworkSpec {
  std::vector<std::string> vertices;
  std::string root;
  std::vector<EdgeSpec> edges;
  std::map<std::string, Point2> coords;
};

/// Undirected edge with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double conductance = 0.0;
};

struct Neighbor {
  VertexId vertex = 0;
  double conductance = 0.0;
};

/// Finite connected electrical network with symmetric positive conductances
/// and a distinguished root. Immutable once built.
///
/// A one-vertex network (no edges) is accepted so that traces onto a single
/// vertex are representable; every other network has c(x) > 0 everywhere.
class Network {
 public:
  /// Conductances below this value are rejected as non-positive.
  static constexpr double kMinConductance = 1e-300;

  /// Validates `spec` and builds the network. Duplicate edges carrying the
  /// same weight are merged; differing weights raise DuplicateEdge.
  static Network build(const NetworkSpec& spec);

  /// Index-based construction with the same validation as build().
  static Network from_edges(std::vector<std::string> names, VertexId root,
                            std::vector<Edge> edges,
                            std::vector<std::optional<Point2>> coords = {});

  std::size_t size() const noexcept { return names_.size(); }
  VertexId root() const noexcept { return root_; }

  const std::string& name(VertexId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<VertexId> find(std::string_view name) const;
  /// Throws UnknownVertex when `name` is not a vertex.
  VertexId index(std::string_view name) const;
  VertexSet indices(std::span<const std::string> names) const;

  std::span<const Neighbor> neighbors(VertexId v) const { return adjacency_.at(v); }
  /// c(x,y); zero when {x,y} is not an edge.
  double conductance(VertexId x, VertexId y) const;
  /// c(x) = sum_y c(x,y).
  double total_conductance(VertexId x) const { return totals_.at(x); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_coords() const noexcept;
  std::optional<Point2> coord(VertexId v) const;
  const std::vector<std::optional<Point2>>& coords() const noexcept { return coords_; }

  /// Same network with a different root.
  Network with_root(VertexId root) const;

  /// Same graph with every conductance replaced by `fn(edge)`.
  template <typename Fn>
  Network map_conductances(Fn&& fn) const {
    std::vector<Edge> edges = edges_;
    for (auto& e : edges) e.conductance = fn(e);
    return from_edges(names_, root_, std::move(edges), coords_);
  }

 private:
  Network() = default;

  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> lookup_;
  VertexId root_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> totals_;
  std::vector<std::optional<Point2>> coords_;
};

/// mu(x) = c(x).
VertexMeasure associated_measure(const Network& net);

/// m(G) = mu(V).
double total_mass(const Network& net);

/// E(f,g) = 1/2 sum_{x,y} c(x,y) (f(x)-f(y)) (g(x)-g(y)).
double dirichlet_energy(const Network& net, const VertexFunction& f, const VertexFunction& g);

/// Dense graph Laplacian L = diag(c) - C, so that E(f,g) = f^T L g.
Matrix laplacian(const Network& net);

/// P(x,y) = c(x,y) / c(x). A one-vertex network gets the identity.
Matrix transition_matrix(const Network& net);

/// Sorted, deduplicated copy of `set`; throws UnknownVertex on out-of-range ids.
VertexSet normalize_subset(const Network& net, VertexSet set);

/// V \ set, in increasing order.
VertexSet complement(std::size_t n, const VertexSet& set);

/// Indicator vector of `set` over n vertices.
std::vector<bool> membership(std::size_t n, const VertexSet& set);

}  // namespace rnet
