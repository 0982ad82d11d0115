#include "rnet/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <Eigen/Sparse>

#include "rnet/error.hpp"
#include "rnet/random.hpp"
#include "rnet/trace.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

constexpr int kMaxExponent = 14;  // level + window; 3^15 edges is already far past dense range

void check_spec(const GasketSpec& spec) {
  if (spec.level < 0 || spec.window < 0) throw Error(ErrorKind::InvalidArgument, "gasket level and window must be >= 0");
  if (spec.level + spec.window > kMaxExponent) {
    throw Error(ErrorKind::TooLarge, "gasket level + window exceeds " + std::to_string(kMaxExponent));
  }
  if (spec.mode == GasketMode::Random && !(spec.lo > 0.0 && spec.lo <= spec.hi && std::isfinite(spec.hi))) {
    throw Error(ErrorKind::InvalidArgument, "random gasket needs 0 < lo <= hi");
  }
  if (!(spec.c0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "c0 must be positive");
}

/// Origins of the unit upward cells of the gasket of side `size` at `origin`.
void collect_cells(LatticePoint origin, std::int64_t size, std::vector<LatticePoint>& out) {
  if (size == 1) {
    out.push_back(origin);
    return;
  }
  const std::int64_t half = size / 2;
  collect_cells(origin, half, out);
  collect_cells({origin.i + half, origin.j}, half, out);
  collect_cells({origin.i, origin.j + half}, half, out);
}

void check_level(const Gasket& g, int m) {
  if (m < 0 || m > g.spec.level) {
    throw Error(ErrorKind::InvalidArgument,
                "level " + std::to_string(m) + " outside [0, " + std::to_string(g.spec.level) + "]");
  }
}

/// Resistances among `points` from sparse solves of the Laplacian grounded at
/// the root.
Matrix resistance_among(const Network& net, const VertexSet& points) {
  const auto n = static_cast<Index>(net.size());
  const auto root = static_cast<Index>(net.root());
  auto reduced = [&](VertexId v) { return Index(v) < root ? Index(v) : Index(v) - 1; };
  std::vector<Eigen::Triplet<double>> entries;
  for (VertexId x = 0; x < net.size(); ++x) {
    if (Index(x) == root) continue;
    entries.emplace_back(reduced(x), reduced(x), net.total_conductance(x));
    for (const auto& nb : net.neighbors(x)) {
      if (Index(nb.vertex) != root) entries.emplace_back(reduced(x), reduced(nb.vertex), -nb.conductance);
    }
  }
  Eigen::SparseMatrix<double> L(n - 1, n - 1);
  L.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Disconnected, "grounded Laplacian is singular");

  const auto k = static_cast<Index>(points.size());
  Matrix green = Matrix::Zero(k, k);
  for (Index a = 0; a < k; ++a) {
    if (Index(points[a]) == root) continue;
    Vector rhs = Vector::Zero(n - 1);
    rhs[reduced(points[a])] = 1.0;
    const Vector col = solver.solve(rhs);
    for (Index b = 0; b < k; ++b) {
      if (Index(points[b]) != root) green(b, a) = col[reduced(points[b])];
    }
  }
  Matrix R(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) R(a, b) = std::max(0.0, green(a, a) + green(b, b) - 2.0 * green(a, b));
  }
  return R;
}

}  // namespace

std::string dyadic_name(LatticePoint p, int level) {
  int e = level;
  while (e > 0 && p.i % 2 == 0 && p.j % 2 == 0) {
    p.i /= 2;
    p.j /= 2;
    --e;
  }
  return std::to_string(p.i) + ":" + std::to_string(p.j) + ":" + std::to_string(e);
}

bool Gasket::in_window(LatticePoint p, int window) const {
  const std::int64_t limit = std::int64_t{1} << (spec.level + window);
  return p.i >= 0 && p.j >= 0 && p.i + p.j <= limit;
}

VertexSet Gasket::level_vertices(int m) const {
  check_level(*this, m);
  const std::int64_t s = std::int64_t{1} << (spec.level - m);
  VertexSet out;
  for (VertexId v = 0; v < lattice.size(); ++v) {
    if (lattice[v].i % s == 0 && lattice[v].j % s == 0) out.push_back(v);
  }
  return out;
}

VertexSet Gasket::window_vertices(int window) const {
  if (window < 0) throw Error(ErrorKind::InvalidArgument, "window must be >= 0");
  VertexSet out;
  for (VertexId v = 0; v < lattice.size(); ++v) {
    if (in_window(lattice[v], window)) out.push_back(v);
  }
  return out;
}

VertexSet Gasket::level_window_vertices(int m, int window) const {
  const VertexSet level = level_vertices(m);
  VertexSet out;
  std::copy_if(level.begin(), level.end(), std::back_inserter(out),
               [&](VertexId v) { return in_window(lattice[v], window); });
  return out;
}

std::optional<VertexId> Gasket::find(LatticePoint p) const {
  const auto it = index.find(p);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Gasket build_gasket(const GasketSpec& spec) {
  check_spec(spec);
  std::vector<LatticePoint> cells;
  collect_cells({0, 0}, std::int64_t{1} << (spec.level + spec.window), cells);

  std::map<LatticePoint, VertexId> index;
  for (const LatticePoint& c : cells) {
    for (LatticePoint p : {c, LatticePoint{c.i + 1, c.j}, LatticePoint{c.i, c.j + 1}}) index.emplace(p, 0);
  }
  std::vector<LatticePoint> lattice;
  std::vector<std::string> names;
  std::vector<std::optional<Point2>> coords;
  const double unit = std::ldexp(1.0, -spec.level);
  for (auto& [p, id] : index) {
    id = lattice.size();
    lattice.push_back(p);
    names.push_back(dyadic_name(p, spec.level));
    coords.push_back(Point2{(double(p.i) + 0.5 * double(p.j)) * unit, 0.5 * std::sqrt(3.0) * double(p.j) * unit});
  }

  const double scale = spec.a_n();
  Rng rng(spec.seed);
  auto weight = [&] {
    if (spec.mode == GasketMode::Deterministic) return scale;
    return (spec.lo + (spec.hi - spec.lo) * rng.uniform()) * scale;
  };
  std::vector<Edge> edges;
  edges.reserve(3 * cells.size());
  for (const LatticePoint& c : cells) {
    const VertexId a = index.at(c);
    const VertexId b = index.at({c.i + 1, c.j});
    const VertexId t = index.at({c.i, c.j + 1});
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, t}, std::pair{a, t}}) {
      edges.push_back({std::min(u, v), std::max(u, v), weight()});
    }
  }
  Network net = Network::from_edges(std::move(names), index.at({0, 0}), std::move(edges), std::move(coords));
  return Gasket{spec, std::move(net), std::move(lattice), std::move(index)};
}

LatticePoint project_gm(LatticePoint p, int level, int m) {
  if (m < 0 || m > level) {
    throw Error(ErrorKind::InvalidArgument, "projection level must lie in [0, " + std::to_string(level) + "]");
  }
  const std::int64_t s = std::int64_t{1} << (level - m);
  const std::int64_t a = p.i % s, b = p.j % s;
  if (a == 0 && b == 0) return p;
  if (a + b > s) throw Error(ErrorKind::InvalidArgument, "point does not lie on the gasket");
  const LatticePoint o{p.i - a, p.j - b};
  // Corners o + (s,0) and o + (0,s) tie on i + j; the latter has the smaller
  // planar x coordinate.
  return {o.i, o.j + s};
}

VertexId project_gm(const Gasket& gasket, VertexId x, int m) {
  check_level(gasket, m);
  const LatticePoint p = project_gm(gasket.lattice.at(x), gasket.spec.level, m);
  const auto v = gasket.find(p);
  if (!v) throw Error(ErrorKind::UnknownVertex, "projection left the build");
  return *v;
}

ResistanceMatrix fused_level_resistance(const Gasket& gasket, int m, int window) {
  const TraceResult trace = trace_network(gasket.network, gasket.level_vertices(m), TraceMethod::Schur);
  std::vector<LatticePoint> lattice;
  for (VertexId v : trace.subset) lattice.push_back(gasket.lattice[v]);
  VertexSet inside;
  for (VertexId i = 0; i < trace.subset.size(); ++i) {
    if (gasket.in_window(lattice[i], window)) inside.push_back(i);
  }
  if (inside.size() == trace.subset.size()) return resistance_matrix(trace.reduced);
  return resistance_matrix(fuse_complement(trace.reduced, inside));
}

std::size_t window_crossing_edges(const Gasket& gasket, int window) {
  std::size_t count = 0;
  for (const Edge& e : gasket.network.edges()) {
    if (gasket.in_window(gasket.lattice[e.u], window) != gasket.in_window(gasket.lattice[e.v], window)) ++count;
  }
  return count;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<int>& levels, int m, int N0,
                                               const GasketSpec& base, std::size_t seeds, unsigned workers) {
  if (m < 0 || N0 < 0 || N0 > base.window) {
    throw Error(ErrorKind::InvalidArgument, "convergence needs m >= 0 and 0 <= N0 <= window");
  }
  if (base.mode == GasketMode::Deterministic || seeds == 0) seeds = 1;

  GasketSpec ref_spec = base;
  ref_spec.level = m;
  ref_spec.mode = GasketMode::Deterministic;
  const Gasket reference = build_gasket(ref_spec);
  const VertexSet ref_points = reference.level_window_vertices(m, N0);
  const Matrix expected = resistance_among(reference.network, ref_points);

  std::vector<ConvergenceRow> rows;
  for (int n : levels) {
    if (n < m) throw Error(ErrorKind::InvalidArgument, "level " + std::to_string(n) + " below m");
    std::vector<Matrix> samples(seeds);
    parallel_for(seeds, workers, [&](std::size_t s) {
      GasketSpec spec = base;
      spec.level = n;
      if (base.mode == GasketMode::Random) spec.seed = derive_seed(base.seed, s);
      const Gasket g = build_gasket(spec);
      // Same points in the same lattice order as the reference.
      const std::int64_t factor = std::int64_t{1} << (n - m);
      VertexSet points;
      for (VertexId v : ref_points) {
        const LatticePoint p = reference.lattice[v];
        points.push_back(g.index.at({p.i * factor, p.j * factor}));
      }
      samples[s] = resistance_among(g.network, points);
    });

    ConvergenceRow row;
    row.level = n;
    row.seeds = seeds;
    Matrix mean = Matrix::Zero(expected.rows(), expected.cols());
    for (const Matrix& R : samples) mean += R / double(seeds);
    for (const Matrix& R : samples) {
      row.sup_deviation += (R - expected).cwiseAbs().maxCoeff() / double(seeds);
      row.seed_spread += (R - mean).cwiseAbs().maxCoeff() / double(seeds);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rnet
