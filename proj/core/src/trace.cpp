#include "rnet/trace.hpp"

#include <algorithm>
#include <cmath>

#include "rnet/error.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

Index idx(VertexId v) { return static_cast<Index>(v); }

/// Trace conductances at or below this multiple of c(x)+c(y) are roundoff
/// from structurally zero entries and do not become edges.
constexpr double kTraceDropTolerance = 1e-13;

constexpr double kBallTieTolerance = 1e-12;

Matrix submatrix(const Matrix& m, const VertexSet& rows, const VertexSet& cols) {
  Matrix out(idx(rows.size()), idx(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(idx(i), idx(j)) = m(idx(rows[i]), idx(cols[j]));
  }
  return out;
}

VertexSet checked_subset(const Network& net, const VertexSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySet, "subset is empty");
  return normalize_subset(net, subset);
}

}  // namespace

std::string_view to_string(TraceMethod method) noexcept {
  return method == TraceMethod::Schur ? "schur" : "hitting";
}

VertexFunction harmonic_extension(const Network& net, const VertexSet& subset, const Vector& boundary) {
  const VertexSet b = checked_subset(net, subset);
  if (boundary.size() != idx(b.size())) {
    throw Error(ErrorKind::DomainMismatch, "boundary data has " + std::to_string(boundary.size()) +
                                               " values for " + std::to_string(b.size()) + " vertices");
  }
  VertexFunction h = Vector::Zero(idx(net.size()));
  for (std::size_t i = 0; i < b.size(); ++i) h[idx(b[i])] = boundary[idx(i)];
  const VertexSet c = complement(net.size(), b);
  if (c.empty()) return h;

  // Minimizing E(h,h) with h|_B fixed gives L_CC h_C = -L_CB phi.
  const Matrix L = laplacian(net);
  const Vector rhs = -submatrix(L, c, b) * boundary;
  const Vector hc = submatrix(L, c, c).llt().solve(rhs);
  for (std::size_t i = 0; i < c.size(); ++i) h[idx(c[i])] = hc[idx(i)];
  return h;
}

Matrix boundary_hitting_matrix(const Network& net, const VertexSet& subset) {
  const VertexSet b = checked_subset(net, subset);
  const VertexSet c = complement(net.size(), b);
  const Matrix P = transition_matrix(net);
  const Index nb = idx(b.size());

  // hit(z, y) = P_z(Y(T_B) = y): identity on B, P-harmonic on C.
  Matrix hit = Matrix::Zero(idx(net.size()), nb);
  for (std::size_t i = 0; i < b.size(); ++i) hit(idx(b[i]), idx(i)) = 1.0;
  if (!c.empty()) {
    const Matrix system = Matrix::Identity(idx(c.size()), idx(c.size())) - submatrix(P, c, c);
    const Eigen::PartialPivLU<Matrix> lu(system);
    const Matrix pcb = submatrix(P, c, b);
    for (Index y = 0; y < nb; ++y) {
      const Vector hy = lu.solve(pcb.col(y));
      for (std::size_t i = 0; i < c.size(); ++i) hit(idx(c[i]), y) = hy[idx(i)];
    }
  }
  // One step then hit: P_x(Y(T_B^+) = y) = sum_z P(x,z) hit(z,y).
  Matrix out(nb, nb);
  for (std::size_t i = 0; i < b.size(); ++i) out.row(idx(i)) = P.row(idx(b[i])) * hit;
  return out;
}

Matrix trace_conductances(const Network& net, const VertexSet& subset, TraceMethod method) {
  const VertexSet b = checked_subset(net, subset);
  const Index nb = idx(b.size());
  Matrix ct = Matrix::Zero(nb, nb);
  if (nb == 1) return ct;

  if (method == TraceMethod::Schur) {
    const VertexSet c = complement(net.size(), b);
    const Matrix L = laplacian(net);
    Matrix schur = submatrix(L, b, b);
    if (!c.empty()) {
      const Matrix lcb = submatrix(L, c, b);
      schur -= lcb.transpose() * submatrix(L, c, c).llt().solve(lcb);
    }
    ct = -schur;
  } else {
    const Matrix hit = boundary_hitting_matrix(net, b);
    for (Index i = 0; i < nb; ++i) ct.row(i) = net.total_conductance(b[std::size_t(i)]) * hit.row(i);
  }
  ct.diagonal().setZero();
  // Symmetrize and drop roundoff-level entries.
  for (Index i = 0; i < nb; ++i) {
    for (Index j = i + 1; j < nb; ++j) {
      double v = 0.5 * (ct(i, j) + ct(j, i));
      const double scale = net.total_conductance(b[std::size_t(i)]) + net.total_conductance(b[std::size_t(j)]);
      if (v <= kTraceDropTolerance * scale) v = 0.0;
      ct(i, j) = v;
      ct(j, i) = v;
    }
  }
  return ct;
}

TraceResult trace_network(const Network& net, const VertexSet& subset, TraceMethod method) {
  const VertexSet b = checked_subset(net, subset);
  const auto in_b = membership(net.size(), b);
  if (!in_b[net.root()]) {
    throw Error(ErrorKind::RootOutsideB, "root '" + net.name(net.root()) + "' is not in the subset");
  }
  const Matrix ct = trace_conductances(net, b, method);

  std::vector<std::string> names;
  std::vector<std::optional<Point2>> coords;
  VertexId root = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    names.push_back(net.name(b[i]));
    if (net.has_coords()) coords.push_back(net.coord(b[i]));
    if (b[i] == net.root()) root = i;
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (ct(idx(i), idx(j)) > 0.0) edges.push_back({i, j, ct(idx(i), idx(j))});
    }
  }

  Vector defect(idx(b.size()));
  if (method == TraceMethod::Hitting) {
    // c(x) - c~(x) = c(x) P_x(Y(T_B^+) = x).
    const Matrix hit = boundary_hitting_matrix(net, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
      defect[idx(i)] = net.total_conductance(b[i]) * hit(idx(i), idx(i));
    }
  } else {
    for (std::size_t i = 0; i < b.size(); ++i) {
      defect[idx(i)] = net.total_conductance(b[i]) - ct.row(idx(i)).sum();
    }
  }

  return TraceResult{
      Network::from_edges(std::move(names), root, std::move(edges), std::move(coords)),
      b,
      defect,
      crossing_conductance(net, b),
      method,
  };
}

double crossing_conductance(const Network& net, const VertexSet& a, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "crossing conductance scale must be positive");
  const auto in_a = membership(net.size(), normalize_subset(net, a));
  double total = 0.0;
  for (const auto& e : net.edges()) {
    if (in_a[e.u] != in_a[e.v]) total += e.conductance;
  }
  return total / scale;
}

Vector resistance_from_root(const Network& net) {
  const Index n = idx(net.size());
  Vector out = Vector::Zero(n);
  if (n == 1) return out;
  const Index g = idx(net.root());
  const Matrix L = laplacian(net);
  VertexSet others = complement(net.size(), {net.root()});
  const Matrix grounded = submatrix(L, others, others);
  // R(root, x) is the diagonal of the Green's function killed at the root.
  const Matrix green = grounded.llt().solve(Matrix::Identity(grounded.rows(), grounded.cols()));
  for (std::size_t i = 0; i < others.size(); ++i) out[idx(others[i])] = green(idx(i), idx(i));
  out[g] = 0.0;
  return out;
}

VertexSet resistance_ball(const Network& net, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
  const Vector dist = resistance_from_root(net);
  VertexSet ball;
  for (VertexId v = 0; v < net.size(); ++v) {
    if (v == net.root() || dist[idx(v)] < r - kBallTieTolerance) ball.push_back(v);
  }
  return ball;
}

TraceResult ball_trace(const Network& net, double r, TraceMethod method) {
  return trace_network(net, resistance_ball(net, r), method);
}

}  // namespace rnet
