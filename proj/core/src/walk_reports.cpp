#include "rnet/walk_reports.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "rnet/error.hpp"
#include "rnet/random.hpp"
#include "rnet/resistance.hpp"
#include "rnet/trace.hpp"
#include "rnet/walk.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

constexpr double kPositiveCell = 1e-15;

}  // namespace

CouplingReport verify_trace_coupling(const Network& net, const VertexSet& subset, std::size_t steps,
                                     std::size_t samples, std::uint64_t seed, unsigned workers) {
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "coupling test needs at least one sample");
  const TraceResult trace = trace_network(net, subset, TraceMethod::Schur);
  const VertexSet& b = trace.subset;
  const auto in_b = membership(net.size(), b);
  std::vector<std::size_t> position(net.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) position[b[i]] = i;

  CouplingReport report;
  report.subset = b;
  report.steps = steps;
  report.samples = samples;

  // Exact law of the trace chain after `steps` steps from the root.
  const Matrix P = transition_matrix(trace.reduced);
  Eigen::RowVectorXd law = Eigen::RowVectorXd::Zero(P.rows());
  law[static_cast<Index>(trace.reduced.root())] = 1.0;
  for (std::size_t k = 0; k < steps; ++k) law = law * P;
  report.expected.assign(law.data(), law.data() + law.size());

  const TransitionSampler sampler(net);
  std::vector<VertexId> endpoint(samples, net.root());
  parallel_for(samples, workers, [&](std::size_t i) {
    if (b.size() == 1) return;
    Rng rng(derive_seed(seed, i));
    VertexId x = net.root();
    VertexId traced = x;
    std::size_t moves = 0;
    while (moves < steps) {
      x = sampler.step(x, rng);
      if (in_b[x] && x != traced) {
        traced = x;
        ++moves;
      }
    }
    endpoint[i] = traced;
  });

  report.observed.assign(b.size(), 0);
  for (VertexId v : endpoint) ++report.observed[position[v]];

  int cells = 0;
  bool impossible = false;
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double p = report.expected[i];
    if (p > kPositiveCell) {
      const double e = n * p;
      const double o = static_cast<double>(report.observed[i]);
      report.chi_square += (o - e) * (o - e) / e;
      ++cells;
    } else if (report.observed[i] > 0) {
      impossible = true;
    }
  }
  report.degrees_of_freedom = std::max(0, cells - 1);
  if (impossible) {
    report.chi_square = std::numeric_limits<double>::infinity();
    report.p_value = 0.0;
  } else if (report.degrees_of_freedom == 0) {
    report.p_value = 1.0;
  } else {
    report.p_value = boost::math::gamma_q(0.5 * report.degrees_of_freedom, 0.5 * report.chi_square);
  }
  return report;
}

double exit_time_bound(double lambda, double delta, double time, double resistance_to_complement,
                       double ball_mass) {
  if (std::isinf(resistance_to_complement)) return 1.0 / lambda;
  return 1.0 / lambda + 4.0 * delta / resistance_to_complement +
         4.0 * time * lambda / (ball_mass * (resistance_to_complement - delta));
}

ExitTimeReport exit_time_report(const Network& net, double radius, double delta, double lambda,
                                double time, std::size_t samples, std::uint64_t seed, unsigned workers) {
  if (!(lambda > 0.0) || !(time >= 0.0) || samples == 0) {
    throw Error(ErrorKind::InvalidArgument, "exit-time report needs lambda > 0, t >= 0 and samples > 0");
  }
  const VertexSet ball = resistance_ball(net, radius);
  const VertexSet outside = complement(net.size(), ball);
  const auto in_ball = membership(net.size(), ball);

  ExitTimeReport report;
  report.radius = radius;
  report.delta = delta;
  report.lambda = lambda;
  report.time = time;
  report.samples = samples;
  report.resistance_to_complement = outside.empty()
                                        ? std::numeric_limits<double>::infinity()
                                        : resistance_between_sets(net, {net.root()}, outside);
  if (!(delta > 0.0) || !(delta < report.resistance_to_complement)) {
    throw Error(ErrorKind::DeltaTooLarge, "delta " + std::to_string(delta) + " not in (0, " +
                                              std::to_string(report.resistance_to_complement) + ")");
  }
  const VertexSet small_ball = resistance_ball(net, delta);
  for (VertexId v : small_ball) report.ball_mass += net.total_conductance(v);
  report.bound = exit_time_bound(lambda, delta, time, report.resistance_to_complement, report.ball_mass);

  const auto steps = static_cast<std::size_t>(std::floor(time));
  const TransitionSampler sampler(net);
  std::vector<char> exited(samples, 0);
  if (!outside.empty()) {
    parallel_for(samples, workers, [&](std::size_t i) {
      Rng rng(derive_seed(seed, i));
      VertexId x = net.root();
      for (std::size_t k = 0; k < steps; ++k) {
        x = sampler.step(x, rng);
        if (!in_ball[x]) {
          exited[i] = 1;
          return;
        }
      }
    });
  }
  const auto hits = static_cast<double>(std::count(exited.begin(), exited.end(), 1));
  const double n = static_cast<double>(samples);
  report.empirical = hits / n;
  report.standard_error = std::sqrt(report.empirical * (1.0 - report.empirical) / n);
  return report;
}

double log_linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    count += 1.0;
  }
  const double denom = count * sxx - sx * sx;
  if (count < 2.0 || !(std::abs(denom) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / denom;
}

DiagnosticsReport local_time_modulus_report(const Network& net, double T, double alpha, std::size_t samples,
                                            std::uint64_t seed, unsigned workers, std::size_t lambda_points) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1/2)");
  if (!(T > 0.0) || samples == 0 || lambda_points < 2) {
    throw Error(ErrorKind::InvalidArgument, "modulus report needs T > 0, samples > 0, >= 2 lambda points");
  }
  if (net.size() < 2) throw Error(ErrorKind::InvalidArgument, "modulus report needs at least two vertices");

  const std::size_t n = net.size();
  const Matrix R = resistance_values(net);
  DiagnosticsReport report;
  report.r_diam = R.maxCoeff();
  report.m_total = total_mass(net);
  report.horizon = T * report.m_total * report.r_diam;
  report.T = T;
  report.alpha = alpha;
  report.samples = samples;

  // Pairs sorted by normalized resistance, largest first; scale N admits the
  // suffix with R/r < 2^{1-N}.
  struct Pair {
    VertexId x, y;
    double q;
  };
  std::vector<Pair> pairs;
  for (VertexId x = 0; x < n; ++x) {
    for (VertexId y = x + 1; y < n; ++y) pairs.push_back({x, y, R(Index(x), Index(y)) / report.r_diam});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.q > b.q; });
  std::vector<std::size_t> first_pair;  // first index admitted at scale N
  for (int N = 0; N < 64; ++N) {
    const double cut = std::ldexp(1.0, 1 - N);
    const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const Pair& p) { return p.q < cut; });
    if (it == pairs.end()) break;
    first_pair.push_back(static_cast<std::size_t>(it - pairs.begin()));
  }
  const std::size_t scales = first_pair.size();

  const TransitionSampler sampler(net);
  const double horizon = report.horizon;
  const auto last = static_cast<std::size_t>(std::floor(horizon));
  std::vector<std::vector<double>> stats(scales, std::vector<double>(samples, 0.0));

  parallel_for(samples, workers, [&](std::size_t s) {
    Rng rng(derive_seed(seed, s));
    std::vector<double> ell(n, 0.0);
    Matrix oscillation = Matrix::Zero(Index(n), Index(n));
    VertexId v = net.root();
    for (std::size_t k = 0; k <= last; ++k) {
      const double len = std::min(static_cast<double>(k + 1), horizon) - static_cast<double>(k);
      if (len > 0.0) {
        // Only l(v) moves on [k, k+1); |l(v) - l(y)| peaks at an endpoint.
        ell[v] += len / net.total_conductance(v);
        for (VertexId y = 0; y < n; ++y) {
          if (y == v) continue;
          const double gap = std::abs(ell[v] - ell[y]);
          double& slot = oscillation(Index(std::min(v, y)), Index(std::max(v, y)));
          slot = std::max(slot, gap);
        }
      }
      if (k < last) v = sampler.step(v, rng);
    }
    double running = 0.0;
    std::size_t next = pairs.size();
    for (std::size_t N = scales; N-- > 0;) {
      for (; next > first_pair[N]; --next) {
        const Pair& p = pairs[next - 1];
        const double stat = oscillation(Index(p.x), Index(p.y)) / report.r_diam / std::sqrt(p.q);
        running = std::max(running, stat);
      }
      stats[N][s] = running;
    }
  });

  for (std::size_t N = 0; N < scales; ++N) {
    const double top = *std::max_element(stats[N].begin(), stats[N].end());
    std::vector<double> lambdas, freqs;
    const double threshold = std::pow(2.0, -(0.5 - alpha) * static_cast<double>(N));
    for (std::size_t j = 0; j < lambda_points; ++j) {
      const double lambda =
          j + 1 == lambda_points ? top : top * static_cast<double>(j) / static_cast<double>(lambda_points - 1);
      const auto hits = std::count_if(stats[N].begin(), stats[N].end(), [&](double v) { return v >= lambda; });
      const double freq = static_cast<double>(hits) / static_cast<double>(samples);
      lambdas.push_back(lambda);
      freqs.push_back(freq);
      report.entries.push_back({static_cast<int>(N), lambda, freq, threshold});
    }
    report.scales.push_back({static_cast<int>(N), pairs.size() - first_pair[N], log_linear_slope(lambdas, freqs)});
  }
  return report;
}

}  // namespace rnet
