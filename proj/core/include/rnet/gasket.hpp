#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rnet/network.hpp"
#include "rnet/resistance.hpp"

namespace rnet {

enum class GasketMode { Deterministic, Random };

struct GasketSpec {
  int level = 0;   // n: edges have Euclidean length 2^{-n}
  int window = 0;  // N: the build covers K^(N), the gasket of side 2^N
  GasketMode mode = GasketMode::Deterministic;
  double lo = 1.0;  // random mode: conductance ~ U(lo, hi) * (5/3)^n
  double hi = 1.0;
  std::uint64_t seed = 0;
  double c0 = 1.0;

  double a_n() const { return std::pow(5.0 / 3.0, level); }
  double b_n() const { return c0 * std::pow(3.0, level); }
};

/// Exact coordinates on the level-n lattice: the point (i e1 + j e2) / 2^n
/// with e1 = (1, 0), e2 = (1/2, sqrt(3)/2).
struct LatticePoint {
  std::int64_t i = 0;
  std::int64_t j = 0;

  auto operator<=>(const LatticePoint&) const = default;
};

/// "i:j:e" naming the point (i e1 + j e2) / 2^e with e minimal.
std::string dyadic_name(LatticePoint p, int level);

struct Gasket {
  GasketSpec spec;
  Network network;
  std::vector<LatticePoint> lattice;  // by VertexId, level-n units
  std::map<LatticePoint, VertexId> index;

  /// Side of the build in lattice units, 2^{n+N}.
  std::int64_t side() const { return std::int64_t{1} << (spec.level + spec.window); }
  /// Closed containment in K^(N).
  bool in_window(LatticePoint p, int window) const;
  /// V_m as vertex ids (sorted); requires 0 <= m <= n.
  VertexSet level_vertices(int m) const;
  /// Vertices inside K^(N) (sorted).
  VertexSet window_vertices(int window) const;
  /// V_m^(N) = V_m within K^(N) (sorted).
  VertexSet level_window_vertices(int m, int window) const;
  std::optional<VertexId> find(LatticePoint p) const;
};

/// Finite Sierpinski gasket graph: vertices V_n in K^(N), edges the sides of
/// the level-n cells (pairs of cell corners at distance 2^{-n}), root at the
/// origin. Deterministic conductance (5/3)^n; random conductance
/// U(lo, hi) (5/3)^n, i.i.d. per edge.
Gasket build_gasket(const GasketSpec& spec);

/// g_m: a corner of the level-m cell containing p, the one farthest along
/// e1 + e2 (ties to the smaller planar x coordinate). Fixes V_m and never
/// moves a point outside K^(N) inside it.
LatticePoint project_gm(LatticePoint p, int level, int m);
VertexId project_gm(const Gasket& gasket, VertexId x, int m);

/// Trace onto V_m, then fuse V_m \ K^(N) to a single vertex. When nothing lies
/// outside the window the trace's resistance matrix is returned unfused.
ResistanceMatrix fused_level_resistance(const Gasket& gasket, int m, int window);

/// Number of edges with exactly one endpoint in K^(N).
std::size_t window_crossing_edges(const Gasket& gasket, int window);

struct ConvergenceRow {
  int level = 0;
  /// Mean over seeds of sup_{x,y in V_m^(N0)} |R_n(x,y) - R(x,y)|, R from the
  /// deterministic level-m build.
  double sup_deviation = 0.0;
  /// Mean over seeds of sup_{x,y} |R_n^s(x,y) - mean_s R_n^s(x,y)|.
  double seed_spread = 0.0;
  std::size_t seeds = 0;
};

/// Convergence table over `levels` (each >= m). Deterministic mode uses one
/// build per level; random mode averages `seeds` builds seeded from
/// base.seed. Builds use the window of `base`, which must be >= N0.
std::vector<ConvergenceRow> convergence_report(const std::vector<int>& levels, int m, int N0,
                                               const GasketSpec& base, std::size_t seeds = 1,
                                               unsigned workers = 1);

}  // namespace rnet
