#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rnet/error.hpp"
#include "rnet/resistance.hpp"

using namespace rnet;

namespace {

Network path3(double c1, double c2) {
  return Network::from_edges({"a", "b", "c"}, 0, {{0, 1, c1}, {1, 2, c2}});
}

Network triangle() { return Network::from_edges({"a", "b", "c"}, 0, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

}  // namespace

TEST_CASE("series and parallel laws") {
  const Network p = path3(2.0, 3.0);
  CHECK(effective_resistance(p, 0, 2) == doctest::Approx(0.5 + 1.0 / 3.0));
  CHECK(effective_resistance(p, 0, 1) == doctest::Approx(0.5));
  CHECK(effective_resistance(p, 1, 1) == 0.0);
  // Unit triangle: 1 in parallel with 2.
  CHECK(effective_resistance(triangle(), 0, 1) == doctest::Approx(2.0 / 3.0));
  const ResistanceMatrix rm = resistance_matrix(triangle());
  CHECK(rm.points == std::vector<std::string>{"a", "b", "c"});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(rm.R(i, j) == doctest::Approx(i == j ? 0.0 : 2.0 / 3.0));
  }
}

TEST_CASE("resistance matrix matches the pseudoinverse oracle") {
  testing::Gen gen(2024);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 3 + rep % 20;
    const Network net = testing::random_network(gen, n, 0.2);
    const Matrix R = resistance_values(net);
    const Matrix oracle = testing::pinv_resistance(net);
    CHECK((R - oracle).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(satisfies_triangle_inequality(R));
    CHECK(effective_resistance(net, 0, n - 1) == doctest::Approx(oracle(0, Eigen::Index(n - 1))).epsilon(1e-10));
  }
}

TEST_CASE("resistance between sets matches the contraction oracle") {
  testing::Gen gen(7);
  for (int rep = 0; rep < 30; ++rep) {
    const Network net = testing::random_network(gen, 10, 0.2);
    const VertexSet a{0, 1}, b{5, 7, 9};
    CHECK(resistance_between_sets(net, a, b) ==
          doctest::Approx(testing::contracted_resistance(net, a, b)).epsilon(1e-10));
  }
  const Network net = triangle();
  CHECK(resistance_between_sets(net, {0, 1}, {1, 2}) == 0.0);
  CHECK_THROWS_AS(resistance_between_sets(net, {}, {1}), Error);
  // Two parallel paths a-b-c... simplest: from a to {b, c} in the triangle is 1/2.
  CHECK(resistance_between_sets(net, {0}, {1, 2}) == doctest::Approx(0.5));
}

TEST_CASE("conductances are recovered from the resistance matrix") {
  testing::Gen gen(99);
  for (int rep = 0; rep < 30; ++rep) {
    const Network net = testing::random_network(gen, 2 + rep % 11, 0.3);
    const Network back = conductances_from_resistance(resistance_matrix(net), net.root());
    CHECK(back.names() == net.names());
    for (VertexId x = 0; x < net.size(); ++x) {
      for (VertexId y = 0; y < net.size(); ++y) CHECK(std::abs(back.conductance(x, y) - net.conductance(x, y)) < 1e-8);
    }
  }
  const ResistanceMatrix tri{{"a", "b", "c"}, Matrix::Constant(3, 3, 2.0 / 3.0) - (2.0 / 3.0) * Matrix::Identity(3, 3)};
  const Network t = conductances_from_resistance(tri);
  CHECK(t.conductance(0, 1) == doctest::Approx(1.0));
  CHECK(t.conductance(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("non-resistance metrics are rejected") {
  // The 4-cycle graph metric (path lengths) is not a resistance metric.
  Matrix d(4, 4);
  d << 0, 1, 2, 1,  //
      1, 0, 1, 2,   //
      2, 1, 0, 1,   //
      1, 2, 1, 0;
  try {
    conductances_from_resistance({{"a", "b", "c", "d"}, d});
    FAIL("expected NotResistanceMetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotResistanceMetric);
  }
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(conductances_from_resistance({{"a", "b"}, asym}), Error);
}

TEST_CASE("fused network identifies the complement") {
  const Network net = triangle();
  // Fusing a single outside vertex only renames it: R^(B) = R = 2/3.
  const Network fused = fuse_complement(net, {0, 1});
  CHECK(fused.size() == 3);
  CHECK(fused.name(2) == kFusedVertexName);
  CHECK(effective_resistance(fused, 0, 1) == doctest::Approx(2.0 / 3.0));

  const Network p = path3(1.0, 1.0);
  CHECK_THROWS_AS(fuse_complement(p, {}), Error);
  CHECK_THROWS_AS(fuse_complement(p, {0, 1, 2}), Error);
  CHECK_THROWS_AS(fuse_complement(p, {1, 2}), Error);
}

TEST_CASE("fused resistance matches contraction and obeys the error bound") {
  testing::Gen gen(31);
  for (int rep = 0; rep < 40; ++rep) {
    const Network net = testing::random_network(gen, 12, 0.15);
    VertexSet b = testing::random_subset_with_root(gen, net);
    if (b.size() == net.size()) b.pop_back();
    if (std::find(b.begin(), b.end(), net.root()) == b.end()) continue;
    const Matrix oracle = testing::fused_resistance_oracle(net, b);
    const Matrix fused = resistance_values(fuse_complement(net, b));
    CHECK((fused - oracle).cwiseAbs().maxCoeff() < 1e-10);

    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) pairs.emplace_back(b[i], b[j]);
    }
    for (const auto& row : fused_metric_error_report(net, b, pairs)) {
      CHECK(row.fused_not_larger);
      CHECK(row.within_bound);
    }
  }
}

TEST_CASE("fused report rejects pairs outside B") {
  try {
    fused_metric_error_report(path3(1, 1), {0, 1}, {{0, 2}});
    FAIL("expected NotInSubset");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInSubset);
  }
}
