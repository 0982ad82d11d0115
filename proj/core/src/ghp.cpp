#include <algorithm>
#include <cmath>
#include <optional>

#include "rnet/error.hpp"
#include "rnet/metric.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

/// A correspondence as a pair of root-preserving maps f: A -> B, g: B -> A;
/// its pairs are {(x, f(x))} and {(g(y), y)}.
struct Correspondence {
  std::vector<std::size_t> f;
  std::vector<std::size_t> g;
};

class GhpScorer {
 public:
  GhpScorer(const FiniteMetricMeasureSpace& a, const FiniteMetricMeasureSpace& b) : a_(a), b_(b) {
    const Index n = Index(a.size()), m = Index(b.size());
    mu_ = Vector::Zero(n + m);
    nu_ = Vector::Zero(n + m);
    mu_.head(n) = a.mass;
    nu_.tail(m) = b.mass;
    for (std::size_t i = 0; i < a.size(); ++i) left_.push_back(i);
    for (std::size_t j = 0; j < b.size(); ++j) right_.push_back(a.size() + j);
    glued_ = Matrix::Zero(n + m, n + m);
    glued_.topLeftCorner(n, n) = a.d;
    glued_.bottomRightCorner(m, m) = b.d;
  }

  double distortion(const Correspondence& c) const {
    pairs_.clear();
    for (std::size_t x = 0; x < c.f.size(); ++x) pairs_.emplace_back(x, c.f[x]);
    for (std::size_t y = 0; y < c.g.size(); ++y) pairs_.emplace_back(c.g[y], y);
    double dis = 0.0;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      for (std::size_t q = p + 1; q < pairs_.size(); ++q) {
        const double gap = a_.d(Index(pairs_[p].first), Index(pairs_[q].first)) -
                           b_.d(Index(pairs_[p].second), Index(pairs_[q].second));
        dis = std::max(dis, std::abs(gap));
      }
    }
    return dis;
  }

  /// Score of the gluing along c, or `cutoff` when it cannot beat it.
  double score(const Correspondence& c, double cutoff) {
    const double half = 0.5 * distortion(c);
    if (half >= cutoff) return cutoff;
    const Index n = Index(a_.size());
    for (std::size_t x = 0; x < a_.size(); ++x) {
      for (std::size_t y = 0; y < b_.size(); ++y) {
        double best = kInfinite;
        for (const auto& [u, v] : pairs_) {
          best = std::min(best, a_.d(Index(x), Index(u)) + half + b_.d(Index(v), Index(y)));
        }
        glued_(Index(x), n + Index(y)) = best;
        glued_(n + Index(y), Index(x)) = best;
      }
    }
    double value = std::max(half, hausdorff_distance(glued_, left_, right_));
    if (value >= cutoff) return cutoff;
    return std::max(value, prohorov_distance(glued_, mu_, nu_, kMaxProhorovPoints, cutoff));
  }

 private:
  const FiniteMetricMeasureSpace& a_;
  const FiniteMetricMeasureSpace& b_;
  Vector mu_, nu_;
  Matrix glued_;
  std::vector<std::size_t> left_, right_;
  mutable std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

double eccentricity(const FiniteMetricMeasureSpace& s) { return s.d.row(Index(s.root)).maxCoeff(); }

/// Maps each point to the point of the other space whose root distance is
/// closest to its own.
std::vector<std::size_t> radial_map(const FiniteMetricMeasureSpace& from, const FiniteMetricMeasureSpace& to) {
  std::vector<std::size_t> map(from.size(), to.root);
  for (std::size_t x = 0; x < from.size(); ++x) {
    if (x == from.root) continue;
    const double r = from.d(Index(from.root), Index(x));
    double best = kInfinite;
    for (std::size_t y = 0; y < to.size(); ++y) {
      const double gap = std::abs(to.d(Index(to.root), Index(y)) - r);
      if (gap < best) {
        best = gap;
        map[x] = y;
      }
    }
  }
  return map;
}

/// Identity by name when the spaces share point names, else by index.
std::optional<Correspondence> matching_correspondence(const FiniteMetricMeasureSpace& a,
                                                      const FiniteMetricMeasureSpace& b) {
  if (a.size() != b.size()) return std::nullopt;
  Correspondence c{std::vector<std::size_t>(a.size()), std::vector<std::size_t>(b.size())};
  bool by_name = true;
  for (std::size_t x = 0; x < a.size() && by_name; ++x) {
    const auto it = std::find(b.points.begin(), b.points.end(), a.points[x]);
    if (it == b.points.end()) {
      by_name = false;
    } else {
      c.f[x] = static_cast<std::size_t>(it - b.points.begin());
      c.g[c.f[x]] = x;
    }
  }
  if (!by_name || c.f[a.root] != b.root) {
    if (a.root != b.root) return std::nullopt;
    for (std::size_t x = 0; x < a.size(); ++x) c.f[x] = c.g[x] = x;
  }
  return c;
}

bool next_map(std::vector<std::size_t>& map, std::size_t fixed, std::size_t range) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (i == fixed) continue;
    if (++map[i] < range) return true;
    map[i] = 0;
  }
  return false;
}

}  // namespace

GhpBounds ghp_distance_bounds(const FiniteMetricMeasureSpace& a, const FiniteMetricMeasureSpace& b,
                              const GhpOptions& options) {
  validate_space(a);
  validate_space(b);

  GhpBounds out;
  out.lower = std::max({0.5 * std::abs(a.d.maxCoeff() - b.d.maxCoeff()), std::abs(a.mass.sum() - b.mass.sum()),
                        0.5 * std::abs(eccentricity(a) - eccentricity(b))});

  GhpScorer scorer(a, b);
  const std::size_t n = a.size(), m = b.size();

  // Candidate count m^(n-1) n^(m-1), computed with saturation.
  double count = std::pow(double(m), double(n - 1)) * std::pow(double(n), double(m - 1));
  out.exhaustive = n <= options.exhaustive_points && m <= options.exhaustive_points &&
                   count <= double(options.exhaustive_cap);

  if (out.exhaustive) {
    Correspondence c{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(m, 0)};
    c.f[a.root] = b.root;
    c.g[b.root] = a.root;
    double best = kInfinite;
    if (const auto seed = matching_correspondence(a, b)) best = scorer.score(*seed, best);
    do {
      do {
        best = std::min(best, scorer.score(c, best));
        ++out.candidates;
      } while (next_map(c.g, b.root, n));
    } while (next_map(c.f, a.root, m));
    out.upper = best;
    return out;
  }

  // Greedy: best of a few seeds, then coordinate descent on single entries.
  std::vector<Correspondence> seeds{{radial_map(a, b), radial_map(b, a)}};
  if (const auto seed = matching_correspondence(a, b)) seeds.push_back(*seed);
  double best = kInfinite;
  Correspondence current;
  for (const auto& s : seeds) {
    const double v = scorer.score(s, best);
    ++out.candidates;
    if (v < best) {
      best = v;
      current = s;
    }
  }
  for (std::size_t pass = 0; pass < options.refine_passes; ++pass) {
    bool improved = false;
    auto sweep = [&](std::vector<std::size_t>& map, std::size_t fixed, std::size_t range) {
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (i == fixed) continue;
        const std::size_t keep = map[i];
        for (std::size_t t = 0; t < range; ++t) {
          if (t == keep) continue;
          map[i] = t;
          const double v = scorer.score(current, best);
          ++out.candidates;
          if (v < best) {
            best = v;
            improved = true;
            break;
          }
          map[i] = keep;
        }
      }
    };
    sweep(current.f, a.root, m);
    sweep(current.g, b.root, n);
    if (!improved) break;
  }
  out.upper = best;
  return out;
}

}  // namespace rnet
