#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rnet/network.hpp"

namespace rnet {

/// All-pairs effective resistances over an ordered point list.
struct ResistanceMatrix {
  std::vector<std::string> points;
  Matrix R;

  std::size_t size() const noexcept { return points.size(); }
};

/// Effective resistance R(x,y) from a grounded Laplacian solve.
double effective_resistance(const Network& net, VertexId x, VertexId y);

/// All pairs from one factorization of the Laplacian grounded at the root.
ResistanceMatrix resistance_matrix(const Network& net);

/// Same values as resistance_matrix(net).R, as a bare matrix.
Matrix resistance_values(const Network& net);

/// R(A,B) = (inf{E(f,f) : f = 1 on A, f = 0 on B})^{-1}; zero when A and B
/// intersect. Returns +infinity only for B empty, which is rejected here.
double resistance_between_sets(const Network& net, const VertexSet& a, const VertexSet& b);

/// Inverse of resistance_matrix: recovers the conductances of the unique
/// network whose effective resistance is `R`. Recovered conductances with
/// magnitude at most kRecoveryTolerance are treated as absent edges; a value
/// below -kRecoveryTolerance raises NotResistanceMetric.
Network conductances_from_resistance(const ResistanceMatrix& R, VertexId root = 0);

inline constexpr double kRecoveryTolerance = 1e-9;

/// True when `d` satisfies the triangle inequality on all triples to `tol`.
bool satisfies_triangle_inequality(const Matrix& d, double tol = 1e-9);

/// Name used for the fused complement vertex.
inline constexpr const char* kFusedVertexName = "*";

/// Identifies V \ B to a single vertex: vertices B + {*}, c(x,*) =
/// sum_{y not in B} c(x,y), conductances inside B unchanged. The root must lie
/// in B. The fused vertex is the last vertex of the result.
Network fuse_complement(const Network& net, const VertexSet& subset);

struct FusedErrorRow {
  VertexId x = 0;
  VertexId y = 0;
  double resistance = 0.0;        // R(x,y)
  double fused = 0.0;             // R^(B)(x,y)
  double to_complement = 0.0;     // R(x, B^c)
  double bound = 0.0;             // 2 R(x,B^c)^{-1/2} R(x,y)^{3/2}
  bool fused_not_larger = false;  // R^(B) <= R
  bool within_bound = false;      // |R - R^(B)| <= bound
};

/// Compares R with the fused metric R^(B) on each requested pair.
std::vector<FusedErrorRow> fused_metric_error_report(
    const Network& net, const VertexSet& subset,
    const std::vector<std::pair<VertexId, VertexId>>& pairs);

}  // namespace rnet
