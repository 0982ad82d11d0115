#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rnet/error.hpp"
#include "rnet/gasket.hpp"
#include "rnet/trace.hpp"

using namespace rnet;
using Index = Eigen::Index;

namespace {

GasketSpec det(int n, int N) {
  GasketSpec s;
  s.level = n;
  s.window = N;
  return s;
}

double euclid(const Network& net, VertexId a, VertexId b) {
  const Point2 p = *net.coord(a), q = *net.coord(b);
  return std::hypot(p.x - q.x, p.y - q.y);
}

}  // namespace

TEST_CASE("vertex and edge counts") {
  const Gasket g0 = build_gasket(det(0, 0));
  CHECK(g0.network.size() == 3);
  CHECK(g0.network.edges().size() == 3);
  for (const Edge& e : g0.network.edges()) CHECK(e.conductance == 1.0);
  CHECK(g0.network.name(g0.network.root()) == "0:0:0");

  const Gasket g1 = build_gasket(det(1, 0));
  CHECK(g1.network.size() == 6);
  CHECK(g1.network.edges().size() == 9);
  for (const Edge& e : g1.network.edges()) CHECK(e.conductance == doctest::Approx(5.0 / 3.0));

  for (int n = 0; n <= 3; ++n) {
    for (int N = 0; N <= 2; ++N) {
      const Gasket g = build_gasket(det(n, N));
      const auto L = n + N;
      CHECK(g.network.size() == std::size_t((std::pow(3, L + 1) + 3) / 2));
      CHECK(g.network.edges().size() == std::size_t(std::pow(3, L + 1)));
      for (const Edge& e : g.network.edges()) CHECK(euclid(g.network, e.u, e.v) == doctest::Approx(std::ldexp(1.0, -n)));
    }
  }
}

TEST_CASE("matches the brute-force subdivision build") {
  for (int n = 0; n <= 3; ++n) {
    for (int N = 0; N <= 1; ++N) {
      const Gasket g = build_gasket(det(n, N));
      const testing::BruteGasket brute = testing::brute_gasket(n, N);
      CHECK(brute.points.size() == g.network.size());
      CHECK(brute.edge_count == g.network.edges().size());
      // Same Laplacian up to relabelling: compare via planar coordinates.
      const Matrix L = testing::edge_laplacian(g.network);
      std::vector<std::size_t> map(g.network.size());
      for (VertexId v = 0; v < g.network.size(); ++v) {
        const Point2 p = *g.network.coord(v);
        std::size_t best = 0;
        for (std::size_t i = 1; i < brute.points.size(); ++i) {
          if (std::hypot(brute.points[i].first - p.x, brute.points[i].second - p.y) <
              std::hypot(brute.points[best].first - p.x, brute.points[best].second - p.y)) {
            best = i;
          }
        }
        map[v] = best;
      }
      double worst = 0.0;
      for (VertexId u = 0; u < g.network.size(); ++u) {
        for (VertexId v = 0; v < g.network.size(); ++v) {
          worst = std::max(worst, std::abs(L(Index(u), Index(v)) - brute.laplacian(Index(map[u]), Index(map[v]))));
        }
      }
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("corner-to-corner resistance is 2/3 at every level") {
  for (int n = 0; n <= 4; ++n) {
    const testing::BruteGasket brute = testing::brute_gasket(n, 0);
    const Matrix R = testing::pinv_resistance(brute.laplacian);
    CHECK(R(Index(brute.origin), Index(brute.right)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(R(Index(brute.right), Index(brute.top)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    const Gasket g = build_gasket(det(n, 0));
    const auto side = std::int64_t{1} << n;
    const VertexId o = *g.find({0, 0}), r = *g.find({side, 0}), t = *g.find({0, side});
    const Matrix R2 = testing::pinv_resistance(g.network);
    CHECK(R2(Index(o), Index(r)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(R2(Index(r), Index(t)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("deterministic compatibility: trace onto V_m is the level-m network") {
  for (int n = 1; n <= 4; ++n) {
    const Gasket fine = build_gasket(det(n, 1));
    for (int m = 0; m <= n; ++m) {
      const Gasket coarse = build_gasket(det(m, 1));
      const Matrix traced = testing::kron_conductances(fine.network, fine.level_vertices(m));
      const VertexSet vm = fine.level_vertices(m);
      const std::int64_t s = std::int64_t{1} << (n - m);
      double worst = 0.0;
      for (std::size_t i = 0; i < vm.size(); ++i) {
        for (std::size_t j = 0; j < vm.size(); ++j) {
          const LatticePoint a = fine.lattice[vm[i]], b = fine.lattice[vm[j]];
          const VertexId ca = *coarse.find({a.i / s, a.j / s}), cb = *coarse.find({b.i / s, b.j / s});
          worst = std::max(worst, std::abs(traced(Index(i), Index(j)) - (i == j ? 0.0 : coarse.network.conductance(ca, cb))));
        }
      }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("projection g_m") {
  for (int n = 0; n <= 4; ++n) {
    for (int N = 0; N <= 1; ++N) {
      const Gasket g = build_gasket(det(n, N + 1));
      for (int m = 0; m <= n; ++m) {
        const VertexSet vm = g.level_vertices(m);
        for (VertexId x = 0; x < g.network.size(); ++x) {
          const VertexId y = project_gm(g, x, m);
          CHECK(std::binary_search(vm.begin(), vm.end(), y));
          CHECK(euclid(g.network, x, y) <= std::ldexp(1.0, -m) + 1e-12);
          if (std::binary_search(vm.begin(), vm.end(), x)) CHECK(y == x);
          if (!g.in_window(g.lattice[x], N)) CHECK_FALSE(g.in_window(g.lattice[y], N));
        }
      }
    }
  }
  CHECK_THROWS_AS(project_gm(LatticePoint{1, 0}, 1, 2), Error);
}

TEST_CASE("fused level resistance") {
  // Whole build inside the window: plain resistance on V_1.
  const Gasket g = build_gasket(det(2, 0));
  const ResistanceMatrix rm = fused_level_resistance(g, 1, 0);
  const VertexSet v1 = g.level_vertices(1);
  CHECK(rm.size() == v1.size());
  const Matrix oracle = testing::pinv_resistance(g.network);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (std::size_t j = 0; j < v1.size(); ++j) {
      CHECK(rm.R(Index(i), Index(j)) == doctest::Approx(oracle(Index(v1[i]), Index(v1[j]))).epsilon(1e-9));
    }
  }

  // Window K^(0) inside a K^(1) build: trace onto V_1, contract the outside.
  const Gasket big = build_gasket(det(2, 1));
  const ResistanceMatrix fused = fused_level_resistance(big, 1, 0);
  const VertexSet vm = big.level_vertices(1);
  const Matrix kron = testing::kron_conductances(big.network, vm);
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (VertexId v : vm) names.push_back(big.network.name(v));
  for (Index i = 0; i < kron.rows(); ++i) {
    for (Index j = i + 1; j < kron.cols(); ++j) {
      if (kron(i, j) > 1e-12) edges.push_back({VertexId(i), VertexId(j), kron(i, j)});
    }
  }
  const Network traced = Network::from_edges(names, 0, edges);
  VertexSet inside;
  for (std::size_t i = 0; i < vm.size(); ++i) {
    if (big.in_window(big.lattice[vm[i]], 0)) inside.push_back(i);
  }
  const Matrix expected = testing::fused_resistance_oracle(traced, inside);
  CHECK(fused.size() == inside.size() + 1);
  CHECK(fused.points.back() == "*");
  CHECK((fused.R - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("compatibility of fused resistances across levels") {
  const ResistanceMatrix base = fused_level_resistance(build_gasket(det(1, 1)), 1, 0);
  for (int n = 2; n <= 4; ++n) {
    const ResistanceMatrix r = fused_level_resistance(build_gasket(det(n, 1)), 1, 0);
    CHECK(r.points == base.points);
    CHECK((r.R - base.R).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("window crossing edges") {
  for (int n = 0; n <= 3; ++n) {
    const Gasket g = build_gasket(det(n, 2));
    CHECK(window_crossing_edges(g, 0) == 4);
    CHECK(window_crossing_edges(g, 1) == 4);
    CHECK(window_crossing_edges(g, 2) == 0);
    const VertexSet w = g.window_vertices(0);
    CHECK(crossing_conductance(g.network, w) == doctest::Approx(4.0 * std::pow(5.0 / 3.0, n)));
  }
}

TEST_CASE("random conductances") {
  GasketSpec s = det(3, 0);
  s.mode = GasketMode::Random;
  s.lo = 0.5;
  s.hi = 1.5;
  s.seed = 12;
  const Gasket g = build_gasket(s);
  const double a = std::pow(5.0 / 3.0, 3);
  for (const Edge& e : g.network.edges()) {
    CHECK(e.conductance >= 0.5 * a);
    CHECK(e.conductance <= 1.5 * a);
  }
  CHECK(build_gasket(s).network.edges()[7].conductance == g.network.edges()[7].conductance);

  s.lo = s.hi = 1.0;
  const Gasket flat = build_gasket(s);
  const Gasket d = build_gasket(det(3, 0));
  for (std::size_t i = 0; i < d.network.edges().size(); ++i) {
    CHECK(flat.network.edges()[i].conductance == d.network.edges()[i].conductance);
  }
  s.lo = 0.0;
  CHECK_THROWS_AS(build_gasket(s), Error);
}

TEST_CASE("convergence report") {
  const auto rows = convergence_report({1, 2, 3, 4}, 1, 0, det(0, 1));
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.sup_deviation < 1e-9);

  GasketSpec s = det(0, 1);
  s.mode = GasketMode::Random;
  s.lo = 0.5;
  s.hi = 1.5;
  s.seed = 2;
  const auto random_rows = convergence_report({2, 5}, 1, 1, s, 20, 2);
  CHECK(random_rows[1].sup_deviation < random_rows[0].sup_deviation);
  CHECK(random_rows[1].seed_spread < random_rows[0].seed_spread);
}

TEST_CASE("dyadic names") {
  CHECK(dyadic_name({0, 0}, 3) == "0:0:0");
  CHECK(dyadic_name({4, 2}, 3) == "2:1:2");
  CHECK(dyadic_name({3, 0}, 2) == "3:0:2");
}
