#include <doctest.h>

#include "oracles.hpp"
#include "rnet/error.hpp"
#include "rnet/io.hpp"
#include "rnet/network.hpp"

using namespace rnet;

namespace {

NetworkSpec triangle_spec() { return {{"a", "b", "c"}, "a", {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}}, {}}; }

ErrorKind kind_of(const NetworkSpec& spec) {
  try {
    Network::build(spec);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("triangle builds with unit measure 2 per vertex") {
  const Network net = Network::build(triangle_spec());
  CHECK(net.size() == 3);
  CHECK(net.edges().size() == 3);
  CHECK(net.name(net.root()) == "a");
  const Vector mu = associated_measure(net);
  for (int i = 0; i < 3; ++i) CHECK(mu[i] == doctest::Approx(2.0));
  CHECK(total_mass(net) == doctest::Approx(6.0));
  CHECK(net.conductance(net.index("a"), net.index("c")) == 1.0);
}

TEST_CASE("validation errors name their class") {
  NetworkSpec s = triangle_spec();
  s.edges[0].conductance = 0.0;
  CHECK(kind_of(s) == ErrorKind::NonPositiveConductance);

  s = triangle_spec();
  s.edges.push_back({"a", "a", 1});
  CHECK(kind_of(s) == ErrorKind::SelfLoop);

  s = triangle_spec();
  s.vertices.push_back("d");
  CHECK(kind_of(s) == ErrorKind::Disconnected);

  s = triangle_spec();
  s.root = "z";
  CHECK(kind_of(s) == ErrorKind::UnknownRoot);

  s = triangle_spec();
  s.edges.push_back({"a", "q", 1});
  CHECK(kind_of(s) == ErrorKind::UnknownVertex);

  s = triangle_spec();
  s.edges.push_back({"b", "a", 2});
  CHECK(kind_of(s) == ErrorKind::DuplicateEdge);
}

TEST_CASE("duplicate edges with equal weight merge") {
  NetworkSpec s = triangle_spec();
  s.edges.push_back({"b", "a", 1});
  CHECK(Network::build(s).edges().size() == 3);
}

TEST_CASE("disconnected error names an unreachable vertex") {
  NetworkSpec s = triangle_spec();
  s.vertices.push_back("lonely");
  try {
    Network::build(s);
    FAIL("expected Disconnected");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("lonely") != std::string::npos);
  }
}

TEST_CASE("energy agrees with the Laplacian quadratic form and the edge sum") {
  testing::Gen gen(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Network net = testing::random_network(gen, 8, 0.3);
    Vector f = Vector::Random(8), g = Vector::Random(8);
    double direct = 0.0;
    for (VertexId x = 0; x < 8; ++x) {
      for (VertexId y = 0; y < 8; ++y) {
        direct += 0.5 * net.conductance(x, y) * (f[x] - f[y]) * (g[x] - g[y]);
      }
    }
    CHECK(dirichlet_energy(net, f, g) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(f.dot(testing::edge_laplacian(net) * g) == doctest::Approx(direct).epsilon(1e-12));
    CHECK((laplacian(net) - testing::edge_laplacian(net)).cwiseAbs().maxCoeff() < 1e-14);
  }
  const Network net = Network::build(triangle_spec());
  CHECK_THROWS_AS(dirichlet_energy(net, Vector::Zero(2), Vector::Zero(3)), Error);
}

TEST_CASE("transition matrix is stochastic and reversible") {
  testing::Gen gen(5);
  const Network net = testing::random_network(gen, 10, 0.25);
  const Matrix P = transition_matrix(net);
  const Vector mu = associated_measure(net);
  for (Eigen::Index i = 0; i < 10; ++i) CHECK(P.row(i).sum() == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) CHECK(mu[i] * P(i, j) == doctest::Approx(mu[j] * P(j, i)));
  }
}

TEST_CASE("subset helpers") {
  const Network net = Network::build(triangle_spec());
  CHECK(normalize_subset(net, {2, 0, 2}) == VertexSet{0, 2});
  CHECK_THROWS_AS(normalize_subset(net, {5}), Error);
  CHECK(complement(4, {1, 3}) == VertexSet{0, 2});
}

TEST_CASE("network JSON round-trips and accepts integer ids") {
  const nlohmann::json doc = nlohmann::json::parse(
      R"({"vertices": [1, 2, 3], "root": 1, "edges": [[1, 2, 0.5], [2, 3, 2.0]],
          "coords": {"1": [0, 0], "2": [1, 0], "3": [2, 0]}, "meta": {"ignored": true}})");
  const Network net = network_from_json(doc);
  CHECK(net.name(net.root()) == "1");
  CHECK(net.has_coords());
  const Network again = network_from_json(network_to_json(net));
  CHECK(again.names() == net.names());
  REQUIRE(again.edges().size() == net.edges().size());
  for (std::size_t i = 0; i < net.edges().size(); ++i) CHECK(again.edges()[i].conductance == net.edges()[i].conductance);
  CHECK(again.coord(2)->x == 2.0);
}

TEST_CASE("space JSON: explicit metric, masses by name, derived resistance") {
  const auto explicit_space = space_from_json(nlohmann::json::parse(
      R"({"vertices": ["x", "y"], "root": "x", "d": [[0, 2], [2, 0]], "mass": {"y": 3}})"));
  CHECK(explicit_space.d(0, 1) == 2.0);
  CHECK(explicit_space.mass[0] == 0.0);
  CHECK(explicit_space.mass[1] == 3.0);

  const auto derived = space_from_json(nlohmann::json::parse(
      R"({"vertices": ["a", "b", "c"], "root": "a", "edges": [["a","b",1],["b","c",1],["a","c",1]]})"));
  CHECK(derived.d(0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(derived.mass[2] == doctest::Approx(2.0));

  const auto back = space_from_json(space_to_json(derived));
  CHECK((back.d - derived.d).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(
                      R"({"vertices": ["x", "y"], "root": "x", "d": [[0, -1], [-1, 0]]})")),
                  Error);
}

TEST_CASE("missing file is an I/O error") {
  try {
    load_network("/nonexistent/net.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("/nonexistent/net.json") != std::string::npos);
  }
}
