#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rnet/error.hpp"
#include "rnet/random.hpp"
#include "rnet/walk.hpp"
#include "rnet/walk_reports.hpp"

using namespace rnet;

namespace {

Network triangle() { return Network::from_edges({"a", "b", "c"}, 0, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

}  // namespace

TEST_CASE("random streams are reproducible and independent of worker count") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 10; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.next() != c.next());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  std::vector<std::uint64_t> serial(100), threaded(100);
  parallel_for(100, 1, [&](std::size_t i) { serial[i] = Rng(derive_seed(9, i)).next(); });
  parallel_for(100, 4, [&](std::size_t i) { threaded[i] = Rng(derive_seed(9, i)).next(); });
  CHECK(serial == threaded);
}

TEST_CASE("simulate: discrete and continuous paths") {
  const Network net = triangle();
  const WalkPath d = simulate(net, 0, WalkKind::Discrete, 10.0, 3);
  CHECK(d.states.size() == 11);
  for (std::size_t k = 1; k < d.states.size(); ++k) CHECK(d.states[k] != d.states[k - 1]);
  const WalkPath again = simulate(net, 0, WalkKind::Discrete, 10.0, 3);
  CHECK(again.states == d.states);

  const WalkPath c = simulate(net, 0, WalkKind::Csrw, 5.0, 3);
  CHECK(c.times.size() == c.states.size());
  CHECK(c.times.back() > 5.0);
  for (std::size_t k = 0; k + 1 < c.times.size(); ++k) CHECK(c.times[k] <= 5.0);
  CHECK(c.state_at(0.0) == 0);
  CHECK_THROWS_AS(simulate(net, 7, WalkKind::Discrete, 1.0, 0), Error);
}

TEST_CASE("occupation density formula holds pathwise") {
  testing::Gen gen(3);
  const Network net = testing::random_network(gen, 9, 0.3);
  for (int rep = 0; rep < 50; ++rep) {
    const WalkKind kind = rep % 2 ? WalkKind::Csrw : WalkKind::Discrete;
    const WalkPath path = simulate(net, net.root(), kind, 30.0, std::uint64_t(rep));
    const Vector f = Vector::Random(9);
    const double t = path.horizon * (rep + 1) / 51.0;
    CHECK(occupation_residual(path, net, f, t) < 1e-12);
  }
}

TEST_CASE("local time on a grid and the sum of occupations") {
  const Network net = triangle();
  const WalkPath path = simulate(net, 0, WalkKind::Csrw, 4.0, 11);
  const double grid[] = {4.0, 0.0, 2.5};
  const LocalTimeField field = local_time(path, net, grid);
  CHECK(field.values.col(1).sum() == 0.0);
  // sum_x l(x,t) c(x) = t
  CHECK((field.values.col(0) * 2.0).sum() == doctest::Approx(4.0));
  CHECK((field.values.col(2) * 2.0).sum() == doctest::Approx(2.5));
  const Vector occ = occupation_times(path, 3, 2.5);
  CHECK(occ.sum() == doctest::Approx(2.5));
  const double bad[] = {5.0};
  try {
    local_time(path, net, bad);
    FAIL("expected GridOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridOutOfRange);
  }
}

TEST_CASE("trace of a path follows the recursive definition") {
  WalkPath path;
  path.kind = WalkKind::Discrete;
  path.states = {0, 2, 0, 1, 1, 3, 1, 0};
  path.horizon = 7;
  // B = {0, 1}: keep B visits that differ from the current B position.
  CHECK(trace_path(path, {0, 1}).states == std::vector<VertexId>{0, 1, 0});
  path.states = {2, 0};
  try {
    trace_path(path, {0, 1});
    FAIL("expected StartOutsideB");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StartOutsideB);
  }
}

TEST_CASE("trace coupling passes on a small network") {
  testing::Gen gen(8);
  const Network net = testing::random_network(gen, 10, 0.2);
  const VertexSet b = testing::random_subset_with_root(gen, net);
  const CouplingReport r = verify_trace_coupling(net, b, 2, 20000, 5, 2);
  CHECK(r.p_value > 0.001);
  double total = 0.0;
  for (double p : r.expected) total += p;
  CHECK(total == doctest::Approx(1.0));
  // Same seed, different worker count, same counts.
  CHECK(verify_trace_coupling(net, b, 2, 20000, 5, 1).observed == r.observed);
}

TEST_CASE("exit-time report") {
  const Network p = Network::from_edges({"a", "b", "c", "d", "e"}, 0,
                                        {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  const ExitTimeReport r = exit_time_report(p, 2.5, 0.5, 2.0, 4.0, 4000, 1);
  CHECK(r.resistance_to_complement == doctest::Approx(3.0));
  CHECK(r.ball_mass == doctest::Approx(1.0));
  CHECK(r.bound == doctest::Approx(exit_time_bound(2.0, 0.5, 4.0, 3.0, 1.0)));
  // Leaving {a,b,c} within four steps means a-b-c-d exactly: probability 1/4.
  CHECK(std::abs(r.empirical - 0.25) < 4.0 * r.standard_error);
  CHECK(r.within_bound());
  CHECK_THROWS_AS(exit_time_report(p, 2.5, 3.0, 2.0, 4.0, 10, 1), Error);
}

TEST_CASE("modulus report shape") {
  testing::Gen gen(4);
  const Network net = testing::random_network(gen, 8, 0.2);
  const DiagnosticsReport r = local_time_modulus_report(net, 1.0, 0.25, 500, 2, 2, 8);
  CHECK(r.horizon == doctest::Approx(r.m_total * r.r_diam));
  REQUIRE(!r.scales.empty());
  CHECK(r.entries.size() == r.scales.size() * 8);
  for (const auto& e : r.entries) {
    CHECK(e.frequency >= 0.0);
    CHECK(e.frequency <= 1.0);
    CHECK(e.threshold == doctest::Approx(std::pow(2.0, -0.25 * e.scale)));
  }
  CHECK_THROWS_AS(local_time_modulus_report(net, 1.0, 0.5, 10, 1), Error);
}
