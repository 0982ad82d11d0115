#pragma once

#include <string_view>

#include "rnet/network.hpp"

namespace rnet {

enum class TraceMethod { Schur, Hitting };

std::string_view to_string(TraceMethod method) noexcept;

/// Network reduced onto a vertex subset B.
struct TraceResult {
  /// Trace network on B. Vertex i of `reduced` is `subset[i]` of the original
  /// and keeps its name; the root is carried over.
  Network reduced;
  VertexSet subset;
  /// c(x) - c~(x) for each x in B, in `subset` order.
  Vector defect;
  /// Total conductance of edges leaving B (unscaled).
  double crossing = 0.0;
  TraceMethod method = TraceMethod::Schur;
};

/// Energy-minimizing extension of `boundary` (given on `subset`, in sorted
/// subset order) to all vertices: agrees with the data on B, harmonic off B.
VertexFunction harmonic_extension(const Network& net, const VertexSet& subset,
                                  const Vector& boundary);

/// H(x,y) = P_x(Y(T_B^+) = y) for x, y in B, where T_B^+ is the first return
/// time to B. Rows and columns follow the sorted subset order. Computed from
/// the transition matrix by solving (I - P_CC) h = P_CB for each y.
Matrix boundary_hitting_matrix(const Network& net, const VertexSet& subset);

/// Trace conductances c~(x,y) on B (zero diagonal), by the requested method:
/// Schur complement L_BB - L_BC L_CC^{-1} L_CB, or c(x) H(x,y).
Matrix trace_conductances(const Network& net, const VertexSet& subset, TraceMethod method);

/// Trace of `net` onto `subset`, which must contain the root.
TraceResult trace_network(const Network& net, const VertexSet& subset,
                          TraceMethod method = TraceMethod::Schur);

/// scale^{-1} * sum over x in A, y not in A of c(x,y).
double crossing_conductance(const Network& net, const VertexSet& a, double scale = 1.0);

/// Open resistance ball {x : R(root,x) < r}. Distances within 1e-12 of r
/// are excluded.
VertexSet resistance_ball(const Network& net, double r);

/// R(root, x) for every vertex.
Vector resistance_from_root(const Network& net);

/// trace_network onto resistance_ball(net, r).
TraceResult ball_trace(const Network& net, double r, TraceMethod method = TraceMethod::Schur);

}  // namespace rnet
