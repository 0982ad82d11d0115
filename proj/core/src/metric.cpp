#include "rnet/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "rnet/error.hpp"
#include "rnet/resistance.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;
using Mask = std::uint64_t;

constexpr double kMetricTolerance = 1e-9;

Mask bit(std::size_t i) { return Mask{1} << i; }

/// Minimum set cover over ball masks by depth-first branch and bound.
class ExactCover {
 public:
  ExactCover(std::vector<Mask> balls, std::size_t initial_best, std::vector<std::size_t> initial_centers)
      : balls_(std::move(balls)), best_(initial_best), best_centers_(std::move(initial_centers)) {}

  std::vector<std::size_t> solve(Mask universe) {
    search(universe);
    return best_centers_;
  }

 private:
  void search(Mask uncovered) {
    if (uncovered == 0) {
      if (chosen_.size() < best_) {
        best_ = chosen_.size();
        best_centers_ = chosen_;
      }
      return;
    }
    if (chosen_.size() + 1 >= best_) return;

    int widest = 0;
    for (Mask ball : balls_) widest = std::max(widest, std::popcount(ball & uncovered));
    const std::size_t need = (static_cast<std::size_t>(std::popcount(uncovered)) + widest - 1) / widest;
    if (chosen_.size() + need >= best_) return;

    // Branch on the uncovered point with the fewest balls containing it.
    std::size_t pivot = 0;
    int fewest = 1 << 30;
    for (Mask rest = uncovered; rest != 0; rest &= rest - 1) {
      const auto p = static_cast<std::size_t>(std::countr_zero(rest));
      int count = 0;
      for (Mask ball : balls_) count += (ball >> p) & 1U;
      if (count < fewest) {
        fewest = count;
        pivot = p;
      }
    }
    std::vector<std::size_t> options;
    for (std::size_t i = 0; i < balls_.size(); ++i) {
      if ((balls_[i] >> pivot) & 1U) options.push_back(i);
    }
    std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return std::popcount(balls_[a] & uncovered) > std::popcount(balls_[b] & uncovered);
    });
    for (std::size_t i : options) {
      chosen_.push_back(i);
      search(uncovered & ~balls_[i]);
      chosen_.pop_back();
    }
  }

  std::vector<Mask> balls_;
  std::size_t best_;
  std::vector<std::size_t> best_centers_;
  std::vector<std::size_t> chosen_;
};

std::vector<std::size_t> greedy_cover(const Matrix& d, double epsilon) {
  const auto n = static_cast<std::size_t>(d.rows());
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  std::vector<std::size_t> centers;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t gain = 0;
      for (std::size_t y = 0; y < n; ++y) gain += (!covered[y] && d(Index(x), Index(y)) <= epsilon) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = x;
      }
    }
    centers.push_back(best);
    for (std::size_t y = 0; y < n; ++y) {
      if (!covered[y] && d(Index(best), Index(y)) <= epsilon) {
        covered[y] = true;
        --remaining;
      }
    }
  }
  return centers;
}

}  // namespace

void validate_space(const FiniteMetricMeasureSpace& space) {
  const auto n = static_cast<Index>(space.size());
  if (n == 0) throw Error(ErrorKind::InvalidMetric, "space has no points");
  if (space.d.rows() != n || space.d.cols() != n || space.mass.size() != n) {
    throw Error(ErrorKind::InvalidMetric, "metric or mass shape does not match the point list");
  }
  if (space.root >= space.size()) throw Error(ErrorKind::UnknownRoot, "root index out of range");
  for (Index i = 0; i < n; ++i) {
    if (!(space.mass[i] >= 0.0)) {
      throw Error(ErrorKind::InvalidMetric, "negative mass at '" + space.points[std::size_t(i)] + "'");
    }
    if (space.d(i, i) != 0.0) {
      throw Error(ErrorKind::InvalidMetric, "nonzero diagonal at '" + space.points[std::size_t(i)] + "'");
    }
    for (Index j = 0; j < n; ++j) {
      if (!(space.d(i, j) >= 0.0) || std::abs(space.d(i, j) - space.d(j, i)) > kMetricTolerance) {
        throw Error(ErrorKind::InvalidMetric, "distance (" + space.points[std::size_t(i)] + ", " +
                                                  space.points[std::size_t(j)] + ") negative or asymmetric");
      }
    }
  }
  if (!satisfies_triangle_inequality(space.d, kMetricTolerance)) {
    throw Error(ErrorKind::InvalidMetric, "triangle inequality fails");
  }
}

FiniteMetricMeasureSpace space_from_network(const Network& net) {
  return {net.names(), resistance_values(net), net.root(), associated_measure(net)};
}

FiniteMetricMeasureSpace restrict_space(const FiniteMetricMeasureSpace& space, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "restriction radius must be positive");
  std::vector<std::size_t> keep;
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (x == space.root || in_open_ball(space.d(Index(space.root), Index(x)), r)) keep.push_back(x);
  }
  FiniteMetricMeasureSpace out;
  out.d.resize(Index(keep.size()), Index(keep.size()));
  out.mass.resize(Index(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.points.push_back(space.points[keep[i]]);
    if (keep[i] == space.root) out.root = i;
    out.mass[Index(i)] = space.mass[Index(keep[i])];
    for (std::size_t j = 0; j < keep.size(); ++j) out.d(Index(i), Index(j)) = space.d(Index(keep[i]), Index(keep[j]));
  }
  return out;
}

std::string_view to_string(CoverMode mode) noexcept {
  return mode == CoverMode::Exact ? "exact" : "greedy";
}

CoveringReport covering_number(const Matrix& d, double epsilon, CoverMode mode) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "covering radius must be positive");
  const auto n = static_cast<std::size_t>(d.rows());
  CoveringReport report;
  report.epsilon = epsilon;
  report.mode = mode;
  std::vector<std::size_t> greedy = greedy_cover(d, epsilon);
  if (mode == CoverMode::Greedy) {
    report.centers = std::move(greedy);
  } else {
    if (n > kMaxExactCoverPoints) {
      throw Error(ErrorKind::TooLargeForExact, std::to_string(n) + " points exceed the exact cover limit of " +
                                                   std::to_string(kMaxExactCoverPoints));
    }
    std::vector<Mask> balls(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (d(Index(x), Index(y)) <= epsilon) balls[x] |= bit(y);
      }
    }
    const Mask universe = n == 64 ? ~Mask{0} : bit(n) - 1;
    const std::size_t greedy_count = greedy.size();
    report.centers = ExactCover(std::move(balls), greedy_count + 1, greedy).solve(universe);
  }
  std::sort(report.centers.begin(), report.centers.end());
  report.count = report.centers.size();
  return report;
}

CoveringReport covering_number(const FiniteMetricMeasureSpace& space, double epsilon, CoverMode mode) {
  return covering_number(space.d, epsilon, mode);
}

double entropy_tail(const FiniteMetricMeasureSpace& space, double alpha, int m, double scale, CoverMode mode) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1/2)");
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "tail index must be nonnegative");
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "metric scale must be positive");
  if (mode == CoverMode::Exact && space.size() > kMaxExactCoverPoints) {
    throw Error(ErrorKind::TooLargeForExact, std::to_string(space.size()) + " points exceed the exact cover limit");
  }

  const Matrix scaled = space.d / scale;
  double min_positive = kInfinite;
  for (Index i = 0; i < scaled.rows(); ++i) {
    for (Index j = 0; j < scaled.cols(); ++j) {
      if (scaled(i, j) > 0.0) min_positive = std::min(min_positive, scaled(i, j));
    }
  }
  const double saturated = static_cast<double>(space.size());
  const double growth = std::exp2(alpha) - 1.0;

  double sum = 0.0;
  for (int k = m;; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const bool is_saturated = eps < min_positive;
    const double count = is_saturated ? saturated : static_cast<double>(covering_number(scaled, eps, mode).count);
    const double term = count * count * std::exp(-std::exp2(alpha * k));
    sum += term;
    if (is_saturated) {
      // Successive term ratios exp(-2^{alpha j}(2^alpha - 1)) decrease in j,
      // so the tail after k is at most t_{k+1} / (1 - q_{k+1}).
      const double next = saturated * saturated * std::exp(-std::exp2(alpha * (k + 1)));
      const double ratio = std::exp(-std::exp2(alpha * (k + 1)) * growth);
      if (next == 0.0 || next / (1.0 - ratio) < 1e-15) break;
    }
  }
  return sum;
}

double hausdorff_distance(const Matrix& d, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInfinite;
  auto excess = [&](const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
    double worst = 0.0;
    for (std::size_t x : from) {
      double nearest = kInfinite;
      for (std::size_t y : to) nearest = std::min(nearest, d(Index(x), Index(y)));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(excess(a, b), excess(b, a));
}

}  // namespace rnet
