#include "rnet/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rnet/error.hpp"
#include "rnet/trace.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

Index idx(VertexId v) { return static_cast<Index>(v); }

/// Laplacian with the root row and column removed; maps vertex -> reduced row.
struct GroundedLaplacian {
  Matrix matrix;
  std::vector<Index> row;  // -1 for the root

  explicit GroundedLaplacian(const Network& net) : row(net.size(), -1) {
    const Matrix L = laplacian(net);
    const Index n = idx(net.size());
    const Index g = idx(net.root());
    Index next = 0;
    for (VertexId v = 0; v < net.size(); ++v) {
      if (idx(v) != g) row[v] = next++;
    }
    matrix.resize(n - 1, n - 1);
    for (Index a = 0, ra = 0; a < n; ++a) {
      if (a == g) continue;
      for (Index b = 0, rb = 0; b < n; ++b) {
        if (b == g) continue;
        matrix(ra, rb) = L(a, b);
        ++rb;
      }
      ++ra;
    }
  }
};

}  // namespace

double effective_resistance(const Network& net, VertexId x, VertexId y) {
  if (x >= net.size() || y >= net.size()) {
    throw Error(ErrorKind::UnknownVertex, "resistance endpoint out of range");
  }
  if (x == y) return 0.0;
  GroundedLaplacian grounded(net);
  Vector rhs = Vector::Zero(grounded.matrix.rows());
  if (grounded.row[x] >= 0) rhs[grounded.row[x]] += 1.0;
  if (grounded.row[y] >= 0) rhs[grounded.row[y]] -= 1.0;
  const Vector v = grounded.matrix.llt().solve(rhs);
  const double vx = grounded.row[x] >= 0 ? v[grounded.row[x]] : 0.0;
  const double vy = grounded.row[y] >= 0 ? v[grounded.row[y]] : 0.0;
  return vx - vy;
}

Matrix resistance_values(const Network& net) {
  const Index n = idx(net.size());
  Matrix R = Matrix::Zero(n, n);
  if (n == 1) return R;
  GroundedLaplacian grounded(net);
  // Green's function of the walk killed at the root; one factorization,
  // all unit right-hand sides.
  const Matrix green = grounded.matrix.llt().solve(
      Matrix::Identity(grounded.matrix.rows(), grounded.matrix.cols()));
  auto g = [&](VertexId a, VertexId b) {
    const Index ra = grounded.row[a];
    const Index rb = grounded.row[b];
    return (ra < 0 || rb < 0) ? 0.0 : green(ra, rb);
  };
  for (VertexId a = 0; a < net.size(); ++a) {
    for (VertexId b = a + 1; b < net.size(); ++b) {
      const double r = std::max(0.0, g(a, a) + g(b, b) - 2.0 * g(a, b));
      R(idx(a), idx(b)) = r;
      R(idx(b), idx(a)) = r;
    }
  }
  return R;
}

ResistanceMatrix resistance_matrix(const Network& net) {
  return {net.names(), resistance_values(net)};
}

double resistance_between_sets(const Network& net, const VertexSet& a, const VertexSet& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "resistance between sets needs A and B nonempty");
  const VertexSet sa = normalize_subset(net, a);
  const VertexSet sb = normalize_subset(net, b);
  const auto in_a = membership(net.size(), sa);
  for (VertexId v : sb) {
    if (in_a[v]) return 0.0;
  }
  VertexSet boundary = sa;
  boundary.insert(boundary.end(), sb.begin(), sb.end());
  std::sort(boundary.begin(), boundary.end());
  Vector data(idx(boundary.size()));
  for (std::size_t i = 0; i < boundary.size(); ++i) data[idx(i)] = in_a[boundary[i]] ? 1.0 : 0.0;
  const VertexFunction h = harmonic_extension(net, boundary, data);
  return 1.0 / dirichlet_energy(net, h, h);
}

Network conductances_from_resistance(const ResistanceMatrix& rm, VertexId root) {
  const Index n = rm.R.rows();
  if (rm.R.cols() != n || idx(rm.points.size()) != n) {
    throw Error(ErrorKind::DomainMismatch, "resistance matrix shape does not match its point list");
  }
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty resistance matrix");
  for (Index i = 0; i < n; ++i) {
    if (std::abs(rm.R(i, i)) > kRecoveryTolerance) {
      throw Error(ErrorKind::NotResistanceMetric, "nonzero diagonal at '" + rm.points[std::size_t(i)] + "'");
    }
    for (Index j = 0; j < n; ++j) {
      if (!std::isfinite(rm.R(i, j)) || rm.R(i, j) < 0.0 ||
          std::abs(rm.R(i, j) - rm.R(j, i)) > kRecoveryTolerance) {
        throw Error(ErrorKind::NotResistanceMetric,
                    "entry (" + rm.points[std::size_t(i)] + ", " + rm.points[std::size_t(j)] +
                        ") is negative, infinite or asymmetric");
      }
    }
  }
  if (n == 1) return Network::from_edges(rm.points, root, {});

  // K = -1/2 J R J is the Moore-Penrose inverse of the Laplacian; its kernel is
  // the constants, so (K + 11^T/n)^{-1} = L + 11^T/n.
  const double nn = static_cast<double>(n);
  const Matrix J = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / nn);
  const Matrix K = -0.5 * J * rm.R * J;
  const Matrix shifted = K + Matrix::Constant(n, n, 1.0 / nn);
  const Matrix L = shifted.fullPivLu().inverse() - Matrix::Constant(n, n, 1.0 / nn);

  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double c = -0.5 * (L(i, j) + L(j, i));
      if (c < -kRecoveryTolerance) {
        throw Error(ErrorKind::NotResistanceMetric,
                    "recovered conductance " + std::to_string(c) + " on (" +
                        rm.points[std::size_t(i)] + ", " + rm.points[std::size_t(j)] + ")");
      }
      if (c > kRecoveryTolerance) edges.push_back({VertexId(i), VertexId(j), c});
    }
  }
  try {
    return Network::from_edges(rm.points, root, std::move(edges));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Disconnected) throw Error(ErrorKind::NotResistanceMetric, e.what());
    throw;
  }
}

bool satisfies_triangle_inequality(const Matrix& d, double tol) {
  const Index n = d.rows();
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      for (Index z = 0; z < n; ++z) {
        if (d(x, z) > d(x, y) + d(y, z) + tol) return false;
      }
    }
  }
  return true;
}

Network fuse_complement(const Network& net, const VertexSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySet, "fuse needs a nonempty subset");
  const VertexSet b = normalize_subset(net, subset);
  if (b.size() == net.size()) throw Error(ErrorKind::FullSet, "subset is the whole vertex set; nothing to fuse");
  const auto in_b = membership(net.size(), b);
  if (!in_b[net.root()]) throw Error(ErrorKind::RootOutsideB, "root '" + net.name(net.root()) + "' is not in the subset");

  std::vector<VertexId> position(net.size(), 0);
  std::vector<std::string> names;
  std::vector<std::optional<Point2>> coords;
  for (std::size_t i = 0; i < b.size(); ++i) {
    position[b[i]] = i;
    names.push_back(net.name(b[i]));
    if (net.has_coords()) coords.push_back(net.coord(b[i]));
  }
  std::string star = kFusedVertexName;
  while (net.find(star)) star += kFusedVertexName;
  names.push_back(star);
  if (net.has_coords()) coords.emplace_back(std::nullopt);
  const VertexId star_id = b.size();

  std::vector<double> to_star(b.size(), 0.0);
  std::vector<Edge> edges;
  for (const auto& e : net.edges()) {
    const bool u_in = in_b[e.u];
    const bool v_in = in_b[e.v];
    if (u_in && v_in) {
      edges.push_back({position[e.u], position[e.v], e.conductance});
    } else if (u_in) {
      to_star[position[e.u]] += e.conductance;
    } else if (v_in) {
      to_star[position[e.v]] += e.conductance;
    }
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (to_star[i] > 0.0) edges.push_back({i, star_id, to_star[i]});
  }
  return Network::from_edges(std::move(names), position[net.root()], std::move(edges), std::move(coords));
}

std::vector<FusedErrorRow> fused_metric_error_report(
    const Network& net, const VertexSet& subset,
    const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  const Network fused = fuse_complement(net, subset);
  const VertexSet b = normalize_subset(net, subset);
  const VertexSet outside = complement(net.size(), b);
  std::vector<VertexId> position(net.size(), net.size());
  for (std::size_t i = 0; i < b.size(); ++i) position[b[i]] = i;

  const Matrix R = resistance_values(net);
  const Matrix RB = resistance_values(fused);
  std::vector<double> to_complement(net.size(), -1.0);

  std::vector<FusedErrorRow> rows;
  rows.reserve(pairs.size());
  for (auto [x, y] : pairs) {
    if (x >= net.size() || y >= net.size()) throw Error(ErrorKind::UnknownVertex, "pair endpoint out of range");
    if (position[x] == net.size() || position[y] == net.size()) {
      throw Error(ErrorKind::NotInSubset, "pair (" + net.name(x) + ", " + net.name(y) + ") leaves the subset");
    }
    if (to_complement[x] < 0.0) to_complement[x] = resistance_between_sets(net, {x}, outside);
    FusedErrorRow row;
    row.x = x;
    row.y = y;
    row.resistance = R(idx(x), idx(y));
    row.fused = RB(idx(position[x]), idx(position[y]));
    row.to_complement = to_complement[x];
    row.bound = 2.0 * std::pow(row.to_complement, -0.5) * std::pow(row.resistance, 1.5);
    row.fused_not_larger = row.fused <= row.resistance + 1e-10;
    row.within_bound = std::abs(row.resistance - row.fused) <= row.bound + 1e-10;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rnet
