#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rnet/network.hpp"
#include "rnet/random.hpp"

namespace rnet {

enum class WalkKind { Discrete, Csrw };

std::string_view to_string(WalkKind kind) noexcept;

/// Realized trajectory. states[k] occupies [J(k), J(k+1)) with J(0) = 0; for
/// discrete paths J(k) = k, for CSRW paths `times[k]` stores J(k+1).
struct WalkPath {
  WalkKind kind = WalkKind::Discrete;
  std::vector<VertexId> states;
  std::vector<double> times;
  /// Observation window [0, horizon]: a step count or a time.
  double horizon = 0.0;
  std::uint64_t seed = 0;
  VertexId start = 0;

  /// J(k), the time at which states[k] is entered.
  double jump_time(std::size_t k) const;
  /// State occupied at time t (Y(t) = Y(floor t) for discrete paths).
  VertexId state_at(double t) const;
};

/// Inverse-CDF sampler over the cumulative transition rows, neighbours in
/// increasing vertex order.
class TransitionSampler {
 public:
  explicit TransitionSampler(const Network& net);

  VertexId step(VertexId from, Rng& rng) const;

 private:
  std::vector<std::vector<VertexId>> targets_;
  std::vector<std::vector<double>> cumulative_;
};

/// Simulates the discrete-time chain (horizon = number of steps, rounded
/// down) or the constant-speed walk (horizon = time) from `start`.
WalkPath simulate(const Network& net, VertexId start, WalkKind kind, double horizon, std::uint64_t seed);

/// Local times l(x,t) = c(x)^{-1} * occupation time of x in [0,t].
struct LocalTimeField {
  std::vector<double> grid;
  /// values(x, j) = l(x, grid[j]).
  Matrix values;
};

/// Occupation time of every vertex during [0, t].
Vector occupation_times(const WalkPath& path, std::size_t vertex_count, double t);

LocalTimeField local_time(const WalkPath& path, const Network& net, std::span<const double> grid);

/// Integral of f(Y(s)) over [0, t], summed interval by interval along the path.
double path_integral(const WalkPath& path, const VertexFunction& f, double t);

/// |int_0^t f(Y(s)) ds - sum_y f(y) l(y,t) mu(y)|.
double occupation_residual(const WalkPath& path, const Network& net, const VertexFunction& f, double t);

/// Trace of a discrete path onto B: the states at the successive times the
/// path sits in B at a vertex different from the current traced position.
/// The result lists the traced positions observed within the path.
WalkPath trace_path(const WalkPath& path, const VertexSet& subset);

}  // namespace rnet
