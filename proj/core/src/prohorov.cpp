#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "rnet/error.hpp"
#include "rnet/metric.hpp"

namespace rnet {

namespace {

using Index = Eigen::Index;

/// Dinic maximum flow on double capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes, double epsilon) : adj_(nodes), level_(nodes), cursor_(nodes), eps_(epsilon) {}

  void add_edge(std::size_t from, std::size_t to, double cap) {
    adj_[from].push_back({to, adj_[to].size(), cap});
    adj_[to].push_back({from, adj_[from].size() - 1, 0.0});
  }

  double run(std::size_t source, std::size_t sink) {
    double flow = 0.0;
    while (levels(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (;;) {
        const double pushed = augment(source, sink, std::numeric_limits<double>::infinity());
        if (!(pushed > eps_)) break;
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double cap;
  };

  bool levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> queue;
    level_[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (const Arc& a : adj_[u]) {
        if (a.cap > eps_ && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          queue.push(a.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double augment(std::size_t u, std::size_t sink, double limit) {
    if (u == sink) return limit;
    for (std::size_t& i = cursor_[u]; i < adj_[u].size(); ++i) {
      Arc& a = adj_[u][i];
      if (a.cap > eps_ && level_[a.to] == level_[u] + 1) {
        const double pushed = augment(a.to, sink, std::min(limit, a.cap));
        if (pushed > eps_) {
          a.cap -= pushed;
          adj_[a.to][a.rev].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  double eps_;
};

void check_measures(const Matrix& d, const Vector& mu, const Vector& nu) {
  if (d.rows() != d.cols() || mu.size() != d.rows() || nu.size() != d.rows()) {
    throw Error(ErrorKind::DomainMismatch, "measures and metric disagree in size");
  }
  for (Index i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0.0) || !(nu[i] >= 0.0) || !std::isfinite(mu[i]) || !std::isfinite(nu[i])) {
      throw Error(ErrorKind::InvalidArgument, "measures must be finite and nonnegative");
    }
  }
}

double excess_unchecked(const Matrix& d, const Vector& mu, const Vector& nu, double epsilon) {
  std::vector<Index> left, right;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) left.push_back(i);
    if (nu[i] > 0.0) right.push_back(i);
  }
  const double total = mu.sum();
  if (left.empty()) return 0.0;
  const std::size_t source = left.size() + right.size();
  const std::size_t sink = source + 1;
  MaxFlow flow(sink + 1, 1e-15 * std::max(1.0, std::max(total, nu.sum())));
  for (std::size_t a = 0; a < left.size(); ++a) flow.add_edge(source, a, mu[left[a]]);
  for (std::size_t b = 0; b < right.size(); ++b) flow.add_edge(left.size() + b, sink, nu[right[b]]);
  for (std::size_t a = 0; a < left.size(); ++a) {
    for (std::size_t b = 0; b < right.size(); ++b) {
      if (d(left[a], right[b]) <= epsilon) {
        flow.add_edge(a, left.size() + b, std::numeric_limits<double>::infinity());
      }
    }
  }
  return std::max(0.0, total - flow.run(source, sink));
}

}  // namespace

double prohorov_excess(const Matrix& d, const Vector& mu, const Vector& nu, double epsilon) {
  check_measures(d, mu, nu);
  return excess_unchecked(d, mu, nu, epsilon);
}

double prohorov_distance(const Matrix& d, const Vector& mu, const Vector& nu, std::size_t max_points,
                         double cutoff) {
  check_measures(d, mu, nu);
  if (static_cast<std::size_t>(d.rows()) > max_points) {
    throw Error(ErrorKind::TooLarge, std::to_string(d.rows()) + " points exceed the Prohorov limit of " +
                                         std::to_string(max_points));
  }
  std::vector<double> candidates{0.0};
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = i + 1; j < d.cols(); ++j) candidates.push_back(d(i, j));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // f(eps) = max of the two excesses is nonincreasing, so once a candidate
  // distance reaches the best value found nothing later can improve on it.
  double best = cutoff;
  for (double eps : candidates) {
    if (eps >= best) break;
    const double f = std::max(excess_unchecked(d, mu, nu, eps), excess_unchecked(d, nu, mu, eps));
    best = std::min(best, std::max(eps, f));
  }
  return best;
}

}  // namespace rnet
