#include "rnet/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnet/error.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

double occupation_end(const WalkPath& path, std::size_t k) {
  return path.kind == WalkKind::Discrete ? static_cast<double>(k + 1) : path.times[k];
}

void check_time(const WalkPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon) {
    throw Error(ErrorKind::GridOutOfRange,
                "time " + std::to_string(t) + " outside [0, " + std::to_string(path.horizon) + "]");
  }
}

void check_positive_measure(const Network& net) {
  for (VertexId x = 0; x < net.size(); ++x) {
    if (!(net.total_conductance(x) > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "local time undefined at '" + net.name(x) + "' with c(x) = 0");
    }
  }
}

}  // namespace

std::string_view to_string(WalkKind kind) noexcept {
  return kind == WalkKind::Discrete ? "discrete" : "csrw";
}

double WalkPath::jump_time(std::size_t k) const {
  if (k == 0) return 0.0;
  return kind == WalkKind::Discrete ? static_cast<double>(k) : times.at(k - 1);
}

VertexId WalkPath::state_at(double t) const {
  if (kind == WalkKind::Discrete) {
    const auto k = static_cast<std::size_t>(std::floor(t));
    return states.at(std::min(k, states.size() - 1));
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto k = static_cast<std::size_t>(it - times.begin());
  return states.at(std::min(k, states.size() - 1));
}

TransitionSampler::TransitionSampler(const Network& net)
    : targets_(net.size()), cumulative_(net.size()) {
  for (VertexId x = 0; x < net.size(); ++x) {
    const double cx = net.total_conductance(x);
    double acc = 0.0;
    for (const auto& nb : net.neighbors(x)) {
      acc += nb.conductance / cx;
      targets_[x].push_back(nb.vertex);
      cumulative_[x].push_back(acc);
    }
    if (!cumulative_[x].empty()) cumulative_[x].back() = 1.0;
  }
}

VertexId TransitionSampler::step(VertexId from, Rng& rng) const {
  const auto& cum = cumulative_[from];
  if (cum.empty()) return from;
  const double u = rng.uniform();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const auto j = std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
  return targets_[from][j];
}

WalkPath simulate(const Network& net, VertexId start, WalkKind kind, double horizon, std::uint64_t seed) {
  if (start >= net.size()) throw Error(ErrorKind::UnknownVertex, "start index " + std::to_string(start));
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::InvalidArgument, "walk horizon must be positive and finite");
  }
  const TransitionSampler sampler(net);
  Rng rng(seed);
  WalkPath path;
  path.kind = kind;
  path.seed = seed;
  path.start = start;
  path.states.push_back(start);

  if (kind == WalkKind::Discrete) {
    const auto steps = static_cast<std::size_t>(std::floor(horizon));
    path.horizon = static_cast<double>(steps);
    path.states.reserve(steps + 1);
    VertexId x = start;
    for (std::size_t k = 0; k < steps; ++k) {
      x = sampler.step(x, rng);
      path.states.push_back(x);
    }
    return path;
  }

  path.horizon = horizon;
  double t = 0.0;
  VertexId x = start;
  for (;;) {
    t += rng.exponential();
    path.times.push_back(t);
    if (t > horizon) break;
    x = sampler.step(x, rng);
    path.states.push_back(x);
  }
  return path;
}

Vector occupation_times(const WalkPath& path, std::size_t vertex_count, double t) {
  check_time(path, t);
  Vector occ = Vector::Zero(static_cast<Index>(vertex_count));
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const double begin = path.jump_time(k);
    if (begin >= t) break;
    occ[static_cast<Index>(path.states[k])] += std::min(occupation_end(path, k), t) - begin;
  }
  return occ;
}

LocalTimeField local_time(const WalkPath& path, const Network& net, std::span<const double> grid) {
  check_positive_measure(net);
  for (double t : grid) check_time(path, t);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  LocalTimeField field;
  field.grid.assign(grid.begin(), grid.end());
  field.values = Matrix::Zero(static_cast<Index>(net.size()), static_cast<Index>(grid.size()));

  // Sweep once: `closed` holds the occupation of fully elapsed intervals
  // before interval k.
  Vector closed = Vector::Zero(static_cast<Index>(net.size()));
  std::size_t k = 0;
  for (std::size_t j : order) {
    const double t = grid[j];
    while (k < path.states.size() && occupation_end(path, k) <= t) {
      closed[static_cast<Index>(path.states[k])] += occupation_end(path, k) - path.jump_time(k);
      ++k;
    }
    Vector occ = closed;
    if (k < path.states.size() && path.jump_time(k) < t) {
      occ[static_cast<Index>(path.states[k])] += t - path.jump_time(k);
    }
    for (VertexId x = 0; x < net.size(); ++x) {
      field.values(static_cast<Index>(x), static_cast<Index>(j)) =
          occ[static_cast<Index>(x)] / net.total_conductance(x);
    }
  }
  return field;
}

double path_integral(const WalkPath& path, const VertexFunction& f, double t) {
  check_time(path, t);
  double total = 0.0;
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const double begin = path.jump_time(k);
    if (begin >= t) break;
    total += f[static_cast<Index>(path.states[k])] * (std::min(occupation_end(path, k), t) - begin);
  }
  return total;
}

double occupation_residual(const WalkPath& path, const Network& net, const VertexFunction& f, double t) {
  if (f.size() != static_cast<Index>(net.size())) {
    throw Error(ErrorKind::DomainMismatch, "function length differs from vertex count");
  }
  const double times[] = {t};
  const LocalTimeField field = local_time(path, net, times);
  const VertexMeasure mu = associated_measure(net);
  double rhs = 0.0;
  for (VertexId y = 0; y < net.size(); ++y) {
    const auto i = static_cast<Index>(y);
    rhs += f[i] * field.values(i, 0) * mu[i];
  }
  return std::abs(path_integral(path, f, t) - rhs);
}

WalkPath trace_path(const WalkPath& path, const VertexSet& subset) {
  if (path.kind != WalkKind::Discrete) {
    throw Error(ErrorKind::InvalidArgument, "trace_path needs a discrete-time path");
  }
  if (path.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  std::size_t n = 0;
  for (VertexId v : path.states) n = std::max(n, v + 1);
  for (VertexId v : subset) n = std::max(n, v + 1);
  const auto in_b = membership(n, subset);
  if (!in_b[path.states.front()]) {
    throw Error(ErrorKind::StartOutsideB, "path starts at vertex " + std::to_string(path.states.front()) +
                                              " outside the subset");
  }

  WalkPath traced;
  traced.kind = WalkKind::Discrete;
  traced.seed = path.seed;
  traced.start = path.states.front();
  traced.states.push_back(path.states.front());
  for (std::size_t k = 1; k < path.states.size(); ++k) {
    const VertexId y = path.states[k];
    if (in_b[y] && y != traced.states.back()) traced.states.push_back(y);
  }
  traced.horizon = static_cast<double>(traced.states.size() - 1);
  return traced;
}

}  // namespace rnet
