#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "rnet/network.hpp"

namespace rnet {

/// Rooted finite metric space with point masses.
struct FiniteMetricMeasureSpace {
  std::vector<std::string> points;
  Matrix d;
  std::size_t root = 0;
  Vector mass;

  std::size_t size() const noexcept { return points.size(); }
};

/// Checks shape, zero diagonal, symmetry, nonnegative masses and the
/// triangle inequality (tolerance 1e-9); throws InvalidMetric.
void validate_space(const FiniteMetricMeasureSpace& space);

/// (V, R, root, mu) of a network.
FiniteMetricMeasureSpace space_from_network(const Network& net);

/// Distances within this of the radius count as outside an open ball.
inline constexpr double kBallTieTolerance = 1e-12;

inline bool in_open_ball(double distance, double radius) noexcept {
  return distance < radius - kBallTieTolerance;
}

/// Points with d(root, x) < r (the root always stays), restricted metric and
/// masses.
FiniteMetricMeasureSpace restrict_space(const FiniteMetricMeasureSpace& space, double r);

enum class CoverMode { Exact, Greedy };

std::string_view to_string(CoverMode mode) noexcept;

struct CoveringReport {
  double epsilon = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> centers;
  CoverMode mode = CoverMode::Exact;
};

/// Largest space accepted by the exact covering search.
inline constexpr std::size_t kMaxExactCoverPoints = 64;

/// Covering by closed balls {y : d(x,y) <= eps}. Exact mode runs a
/// branch-and-bound minimum set cover (at most 64 points); greedy mode picks
/// the ball covering the most uncovered points, lowest index on ties.
CoveringReport covering_number(const FiniteMetricMeasureSpace& space, double epsilon,
                               CoverMode mode = CoverMode::Exact);

/// Same as covering_number on a bare distance matrix.
CoveringReport covering_number(const Matrix& d, double epsilon, CoverMode mode = CoverMode::Exact);

/// sum_{k >= m} N(d/scale, 2^{-k})^2 exp(-2^{alpha k}), summed until the
/// covering number saturates at the point count and the remaining tail is
/// below 1e-15.
double entropy_tail(const FiniteMetricMeasureSpace& space, double alpha, int m, double scale = 1.0,
                    CoverMode mode = CoverMode::Exact);

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Hausdorff distance between index sets of one space; kInfinite when exactly
/// one of them is empty, zero when both are.
double hausdorff_distance(const Matrix& d, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b);

/// Default size limit for prohorov_distance.
inline constexpr std::size_t kMaxProhorovPoints = 2048;

/// Exact Prohorov distance between finite measures on a common finite metric
/// space. For a candidate eps, sup_A [mu(A) - nu(A^eps)] is mu(S) minus a
/// maximum flow in the bipartite graph joining points within eps; the
/// infimum is attained at max(D, f(D)) over the distinct distances D.
/// With a finite cutoff the search stops early and returns
/// min(distance, cutoff).
double prohorov_distance(const Matrix& d, const Vector& mu, const Vector& nu,
                         std::size_t max_points = kMaxProhorovPoints, double cutoff = kInfinite);

/// sup over A of (mu(A) - nu(A^eps)), via maximum flow.
double prohorov_excess(const Matrix& d, const Vector& mu, const Vector& nu, double epsilon);

struct GhpOptions {
  /// Exhaustive search over map-pair correspondences when both spaces have at
  /// most this many points and the candidate count stays under the cap.
  std::size_t exhaustive_points = 6;
  std::size_t exhaustive_cap = 200000;
  std::size_t refine_passes = 4;
};

struct GhpBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool exhaustive = false;
  std::size_t candidates = 0;
};

/// Bounds on the pointed Gromov-Hausdorff-Prohorov distance. Upper: best
/// correspondence gluing of the two spaces (root pair forced), scored by the
/// root, Hausdorff and Prohorov terms in the glued space. Lower: the largest
/// of |diam1 - diam2|/2, |mass1 - mass2| and |ecc1(root) - ecc2(root)|/2.
GhpBounds ghp_distance_bounds(const FiniteMetricMeasureSpace& a, const FiniteMetricMeasureSpace& b,
                              const GhpOptions& options = {});

}  // namespace rnet
