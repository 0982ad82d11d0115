#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace rnet::testing {

namespace {

using Index = Eigen::Index;

double uniform(Gen& gen, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

/// Laplacian of the graph with vertices relabelled by `label` (edges inside
/// one class dropped).
Matrix quotient_laplacian(const Network& net, const std::vector<Index>& label, Index classes) {
  Matrix L = Matrix::Zero(classes, classes);
  for (const Edge& e : net.edges()) {
    const Index a = label[e.u], b = label[e.v];
    if (a == b) continue;
    L(a, a) += e.conductance;
    L(b, b) += e.conductance;
    L(a, b) -= e.conductance;
    L(b, a) -= e.conductance;
  }
  return L;
}

}  // namespace

Network random_network(Gen& gen, std::size_t n, double extra, double cmin, double cmax) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(gen);
    seen.insert({j, i});
    edges.push_back({j, i, uniform(gen, cmin, cmax)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (seen.count({i, j}) == 0 && uniform(gen, 0.0, 1.0) < extra) edges.push_back({i, j, uniform(gen, cmin, cmax)});
    }
  }
  const std::size_t root = std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
  return Network::from_edges(std::move(names), root, std::move(edges));
}

VertexSet random_subset_with_root(Gen& gen, const Network& net) {
  const std::size_t n = net.size();
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(gen);
  std::vector<VertexId> others;
  for (VertexId v = 0; v < n; ++v) {
    if (v != net.root()) others.push_back(v);
  }
  std::shuffle(others.begin(), others.end(), gen);
  VertexSet b{net.root()};
  b.insert(b.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1));
  std::sort(b.begin(), b.end());
  return b;
}

Matrix edge_laplacian(const Network& net) {
  std::vector<Index> label(net.size());
  std::iota(label.begin(), label.end(), Index{0});
  return quotient_laplacian(net, label, Index(net.size()));
}

Matrix pinv_resistance(const Matrix& L) {
  const Matrix G = Eigen::CompleteOrthogonalDecomposition<Matrix>(L).pseudoInverse();
  const Index n = L.rows();
  Matrix R(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) R(i, j) = G(i, i) + G(j, j) - 2.0 * G(i, j);
  }
  return R;
}

Matrix pinv_resistance(const Network& net) { return pinv_resistance(edge_laplacian(net)); }

double contracted_resistance(const Network& net, const VertexSet& a, const VertexSet& b) {
  for (VertexId x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return 0.0;
  }
  std::vector<Index> label(net.size(), -1);
  for (VertexId x : a) label[x] = 0;
  for (VertexId x : b) label[x] = 1;
  Index next = 2;
  for (auto& l : label) {
    if (l < 0) l = next++;
  }
  return pinv_resistance(quotient_laplacian(net, label, next))(0, 1);
}

Matrix fused_resistance_oracle(const Network& net, const VertexSet& b) {
  std::vector<Index> label(net.size(), Index(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) label[b[i]] = Index(i);
  return pinv_resistance(quotient_laplacian(net, label, Index(b.size()) + 1));
}

Matrix kron_conductances(const Network& net, const VertexSet& b) {
  const Matrix L = edge_laplacian(net);
  std::vector<VertexId> c;
  for (VertexId v = 0; v < net.size(); ++v) {
    if (std::find(b.begin(), b.end(), v) == b.end()) c.push_back(v);
  }
  const Index nb = Index(b.size()), nc = Index(c.size());
  Matrix Lbb(nb, nb), Lbc(nb, nc), Lcc(nc, nc);
  for (Index i = 0; i < nb; ++i) {
    for (Index j = 0; j < nb; ++j) Lbb(i, j) = L(Index(b[i]), Index(b[j]));
    for (Index j = 0; j < nc; ++j) Lbc(i, j) = L(Index(b[i]), Index(c[j]));
  }
  for (Index i = 0; i < nc; ++i) {
    for (Index j = 0; j < nc; ++j) Lcc(i, j) = L(Index(c[i]), Index(c[j]));
  }
  Matrix S = Lbb;
  if (nc > 0) S -= Lbc * Lcc.colPivHouseholderQr().solve(Lbc.transpose());
  Matrix out = -S;
  out.diagonal().setZero();
  return out;
}

Matrix hitting_oracle(const Network& net, const VertexSet& b) {
  const Index n = Index(net.size());
  Matrix P = Matrix::Zero(n, n);
  for (const Edge& e : net.edges()) {
    P(Index(e.u), Index(e.v)) = e.conductance;
    P(Index(e.v), Index(e.u)) = e.conductance;
  }
  for (Index i = 0; i < n; ++i) {
    const double s = P.row(i).sum();
    if (s > 0) P.row(i) /= s;
  }
  std::vector<VertexId> c;
  for (VertexId v = 0; v < net.size(); ++v) {
    if (std::find(b.begin(), b.end(), v) == b.end()) c.push_back(v);
  }
  const Index nb = Index(b.size()), nc = Index(c.size());
  Matrix Pbb(nb, nb), Pbc(nb, nc), Pcb(nc, nb), Pcc(nc, nc);
  for (Index i = 0; i < nb; ++i) {
    for (Index j = 0; j < nb; ++j) Pbb(i, j) = P(Index(b[i]), Index(b[j]));
    for (Index j = 0; j < nc; ++j) Pbc(i, j) = P(Index(b[i]), Index(c[j]));
  }
  for (Index i = 0; i < nc; ++i) {
    for (Index j = 0; j < nb; ++j) Pcb(i, j) = P(Index(c[i]), Index(b[j]));
    for (Index j = 0; j < nc; ++j) Pcc(i, j) = P(Index(c[i]), Index(c[j]));
  }
  if (nc == 0) return Pbb;
  const Matrix I = Matrix::Identity(nc, nc);
  const Matrix absorb = (I - Pcc).colPivHouseholderQr().solve(Pcb);
  return Pbb + Pbc * absorb;
}

std::size_t exhaustive_cover(const Matrix& d, double eps) {
  const auto n = static_cast<std::size_t>(d.rows());
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    bool covers = true;
    for (std::size_t y = 0; y < n && covers; ++y) {
      bool hit = false;
      for (std::size_t x = 0; x < n && !hit; ++x) hit = ((mask >> x) & 1U) && d(Index(x), Index(y)) <= eps;
      covers = hit;
    }
    if (covers) best = size;
  }
  return best;
}

double exhaustive_prohorov(const Matrix& d, const Vector& mu, const Vector& nu) {
  const auto n = static_cast<std::size_t>(d.rows());
  auto f_one = [&](const Vector& a, const Vector& b, double eps) {
    double worst = 0.0;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      double ma = 0.0, mb = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        if ((mask >> x) & 1U) ma += a[Index(x)];
      }
      for (std::size_t y = 0; y < n; ++y) {
        bool near = false;
        for (std::size_t x = 0; x < n && !near; ++x) near = ((mask >> x) & 1U) && d(Index(x), Index(y)) <= eps;
        if (near) mb += b[Index(y)];
      }
      worst = std::max(worst, ma - mb);
    }
    return worst;
  };
  std::vector<double> eps{0.0};
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) eps.push_back(d(i, j));
  }
  double best = std::numeric_limits<double>::infinity();
  for (double e : eps) best = std::min(best, std::max(e, std::max(f_one(mu, nu, e), f_one(nu, mu, e))));
  return best;
}

FiniteMetricMeasureSpace random_space(Gen& gen, std::size_t n) {
  FiniteMetricMeasureSpace s;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    s.points.push_back("p" + std::to_string(i));
    pts.emplace_back(uniform(gen, 0, 1), uniform(gen, 0, 1));
  }
  s.d.resize(Index(n), Index(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s.d(Index(i), Index(j)) = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
    }
  }
  s.mass.resize(Index(n));
  for (std::size_t i = 0; i < n; ++i) s.mass[Index(i)] = uniform(gen, 0, 1) < 0.2 ? 0.0 : uniform(gen, 0, 1);
  s.root = std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
  return s;
}

BruteGasket brute_gasket(int level, int window) {
  using P = std::pair<double, double>;
  const double side = std::ldexp(1.0, window);
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<std::array<P, 3>> tris{{P{0, 0}, P{side, 0}, P{side / 2, side * h}}};
  auto mid = [](P a, P b) { return P{(a.first + b.first) / 2, (a.second + b.second) / 2}; };
  for (int k = 0; k < level + window; ++k) {
    std::vector<std::array<P, 3>> next;
    for (const auto& t : tris) {
      const P ab = mid(t[0], t[1]), ac = mid(t[0], t[2]), bc = mid(t[1], t[2]);
      next.push_back({t[0], ab, ac});
      next.push_back({ab, t[1], bc});
      next.push_back({ac, bc, t[2]});
    }
    tris = std::move(next);
  }
  BruteGasket g;
  std::map<std::pair<long long, long long>, std::size_t> id;
  auto key = [](P p) { return std::pair{std::llround(p.first * 1e9), std::llround(p.second * 1e9)}; };
  auto vertex = [&](P p) {
    auto [it, fresh] = id.emplace(key(p), g.points.size());
    if (fresh) g.points.push_back(p);
    return it->second;
  };
  std::vector<std::array<std::size_t, 3>> cells;
  for (const auto& t : tris) cells.push_back({vertex(t[0]), vertex(t[1]), vertex(t[2])});
  const auto n = Index(g.points.size());
  g.laplacian = Matrix::Zero(n, n);
  const double c = std::pow(5.0 / 3.0, level);
  for (const auto& cell : cells) {
    for (auto [a, b] : {std::pair{cell[0], cell[1]}, std::pair{cell[1], cell[2]}, std::pair{cell[0], cell[2]}}) {
      g.laplacian(Index(a), Index(a)) += c;
      g.laplacian(Index(b), Index(b)) += c;
      g.laplacian(Index(a), Index(b)) -= c;
      g.laplacian(Index(b), Index(a)) -= c;
      ++g.edge_count;
    }
  }
  g.origin = id.at(key({0, 0}));
  g.right = id.at(key({side, 0}));
  g.top = id.at(key({side / 2, side * h}));
  return g;
}

}  // namespace rnet::testing
