#pragma once

#include <cstdint>
#include <vector>

#include "rnet/network.hpp"

namespace rnet {

struct CouplingReport {
  VertexSet subset;                   // sorted
  std::size_t steps = 0;
  std::size_t samples = 0;
  std::vector<double> expected;       // P~^steps(root, y), subset order
  std::vector<std::size_t> observed;  // counts of tr_B Y(steps) = y
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Samples tr_B Y_G(steps) from the root and compares the counts with the
/// exact `steps`-step law of the trace network's chain by a chi-square test.
/// Cells with zero expected probability that are nevertheless observed give
/// p = 0.
CouplingReport verify_trace_coupling(const Network& net, const VertexSet& subset, std::size_t steps,
                                     std::size_t samples, std::uint64_t seed, unsigned workers = 1);

struct ExitTimeReport {
  double radius = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double time = 0.0;
  double resistance_to_complement = 0.0;  // R(root, B(root,r)^c)
  double ball_mass = 0.0;                 // mu(B(root, delta))
  double empirical = 0.0;                 // P(T_{B^c} <= t)
  double standard_error = 0.0;
  double bound = 0.0;
  std::size_t samples = 0;

  /// empirical <= bound + 3 standard errors.
  bool within_bound() const noexcept { return empirical <= bound + 3.0 * standard_error; }
};

/// 1/lambda + 4 delta / R + 4 t lambda / (mass (R - delta)).
double exit_time_bound(double lambda, double delta, double time, double resistance_to_complement,
                       double ball_mass);

/// Monte Carlo estimate of the probability that the discrete chain started at
/// the root leaves the open resistance ball B(root, r) within `time` steps,
/// next to the analytic bound. Requires 0 < delta < R(root, B^c).
ExitTimeReport exit_time_report(const Network& net, double radius, double delta, double lambda,
                                double time, std::size_t samples, std::uint64_t seed,
                                unsigned workers = 1);

struct ModulusEntry {
  int scale = 0;           // N: pairs with R(x,y)/r(G) < 2^{1-N}
  double lambda = 0.0;
  double frequency = 0.0;  // fraction of samples with statistic >= lambda
  double threshold = 0.0;  // 2^{-(1/2 - alpha) N}, the constant-free modulus shape
};

struct ModulusScale {
  int scale = 0;
  std::size_t pairs = 0;
  /// Least-squares slope of log(frequency) against lambda over the points
  /// with positive frequency; NaN when fewer than two distinct points exist.
  double slope = 0.0;
};

struct DiagnosticsReport {
  double r_diam = 0.0;   // r(G) = max R(x,y)
  double m_total = 0.0;  // m(G) = mu(V)
  double horizon = 0.0;  // T m(G) r(G)
  double T = 0.0;
  double alpha = 0.0;
  std::size_t samples = 0;
  std::vector<ModulusEntry> entries;
  std::vector<ModulusScale> scales;
};

/// For each sample path up to T m(G) r(G) and each dyadic scale N, records
/// sup over pairs with R/r < 2^{1-N} of
///   max_t r^{-1} |l(x,t) - l(y,t)| / sqrt(R(x,y)/r)
/// and reports exceedance frequencies over a lambda grid (lambda_points
/// values from 0 to the largest observed statistic) with fitted log slopes.
DiagnosticsReport local_time_modulus_report(const Network& net, double T, double alpha, std::size_t samples,
                                            std::uint64_t seed, unsigned workers = 1,
                                            std::size_t lambda_points = 16);

/// Least-squares slope of log(y) on x over entries with y > 0.
double log_linear_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rnet
