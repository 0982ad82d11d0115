#include <benchmark/benchmark.h>

#include <random>

#include "rnet/gasket.hpp"
#include "rnet/metric.hpp"
#include "rnet/resistance.hpp"
#include "rnet/trace.hpp"

namespace {

// Ring with chords: n vertices, conductances in [0.5, 2].
rnet::Network ring(std::size_t n) {
  std::mt19937_64 gen(n);
  std::uniform_real_distribution<double> c(0.5, 2.0);
  std::vector<std::string> names;
  std::vector<rnet::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i));
    edges.push_back({i, (i + 1) % n, c(gen)});
    if (i + n / 3 < n && i % 3 == 0) edges.push_back({i, i + n / 3, c(gen)});
  }
  return rnet::Network::from_edges(names, 0, edges);
}

void BM_ResistanceMatrix(benchmark::State& state) {
  const rnet::Network net = ring(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rnet::resistance_values(net));
}
BENCHMARK(BM_ResistanceMatrix)->Arg(16)->Arg(64)->Arg(256);

void BM_Trace(benchmark::State& state) {
  const rnet::Network net = ring(std::size_t(state.range(0)));
  rnet::VertexSet half;
  for (rnet::VertexId v = 0; v < net.size(); v += 2) half.push_back(v);
  const auto method = state.range(1) == 0 ? rnet::TraceMethod::Schur : rnet::TraceMethod::Hitting;
  for (auto _ : state) benchmark::DoNotOptimize(rnet::trace_conductances(net, half, method));
}
BENCHMARK(BM_Trace)->Args({64, 0})->Args({64, 1})->Args({256, 0})->Args({256, 1});

rnet::FiniteMetricMeasureSpace space(std::size_t n) { return rnet::space_from_network(ring(n)); }

void BM_Prohorov(benchmark::State& state) {
  const rnet::FiniteMetricMeasureSpace s = space(std::size_t(state.range(0)));
  rnet::Vector nu = s.mass.reverse();
  for (auto _ : state) benchmark::DoNotOptimize(rnet::prohorov_distance(s.d, s.mass, nu));
}
BENCHMARK(BM_Prohorov)->Arg(16)->Arg(48);

void BM_ExactCover(benchmark::State& state) {
  const rnet::FiniteMetricMeasureSpace s = space(std::size_t(state.range(0)));
  const double eps = 0.25 * s.d.maxCoeff();
  for (auto _ : state) benchmark::DoNotOptimize(rnet::covering_number(s, eps).count);
}
BENCHMARK(BM_ExactCover)->Arg(16)->Arg(32)->Arg(64);

void BM_GasketBuild(benchmark::State& state) {
  rnet::GasketSpec spec;
  spec.level = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rnet::build_gasket(spec).network.size());
}
BENCHMARK(BM_GasketBuild)->Arg(3)->Arg(5)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
