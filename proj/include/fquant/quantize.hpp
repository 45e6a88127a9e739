#pragma once

#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/geometry.hpp"
#include "fquant/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace fquant {

enum class QuantMethod { ExactDp, Lloyd, Provided };

inline std::string to_string(QuantMethod m) {
  switch (m) {
    case QuantMethod::ExactDp:
      return "exact_dp";
    case QuantMethod::Lloyd:
      return "lloyd";
    case QuantMethod::Provided:
      return "provided";
  }
  return "?";
}

/// Center set with its attained cost sum_i w_i d(x_i, alpha)^r.
struct QuantResult {
  std::vector<Vector> centers;
  double cost = 0.0;
  QuantMethod method = QuantMethod::Provided;
  std::size_t n = 0;
  int restarts = 0;
  int iterations = 0;
};

/// sum_i w_i d(x_i, centers)^r, recomputed from scratch.
inline double assignment_cost(const DiscreteMeasure& mu, const std::vector<Vector>& centers, double r) {
  if (centers.empty()) return mu.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  long double total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto p = mu.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) {
      double sq = 0.0;
      for (int k = 0; k < mu.dimension(); ++k) sq += (p[k] - c[k]) * (p[k] - c[k]);
      best = std::min(best, sq);
    }
    total += mu.weight(i) * std::pow(std::sqrt(best), r);
  }
  return static_cast<double>(total);
}

namespace detail {

/// Optimal one-center cost of contiguous atom ranges [i, j) of a sorted 1-D measure.
///
/// r = 2: weighted mean; r = 1: weighted median; r > 1: root of the monotone
/// derivative; 0 < r < 1: best atom (the objective is concave between atoms).
class ClusterCost {
 public:
  ClusterCost(std::vector<double> x, std::vector<double> w, double r) : x_(std::move(x)), w_(std::move(w)), r_(r) {
    const std::size_t m = x_.size();
    origin_ = m ? x_[0] : 0.0;
    W_.assign(m + 1, 0);
    WX_.assign(m + 1, 0);
    WXX_.assign(m + 1, 0);
    for (std::size_t k = 0; k < m; ++k) {
      const long double u = static_cast<long double>(x_[k]) - origin_;
      W_[k + 1] = W_[k] + w_[k];
      WX_[k + 1] = WX_[k] + w_[k] * u;
      WXX_[k + 1] = WXX_[k] + w_[k] * u * u;
    }
    if (r_ != 1.0 && r_ != 2.0 && m <= kMatrixLimit) build_matrix();
  }

  std::size_t size() const { return x_.size(); }
  double r() const { return r_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (j <= i + 1) return 0.0;
    if (!matrix_.empty()) return matrix_[i * (size() + 1) + j];
    return direct_cost(i, j);
  }

  double center(std::size_t i, std::size_t j) const {
    if (j <= i + 1) return x_[i];
    if (r_ == 2.0) {
      long double sw = 0, sx = 0;
      for (std::size_t k = i; k < j; ++k) {
        sw += w_[k];
        sx += w_[k] * static_cast<long double>(x_[k]);
      }
      return static_cast<double>(sx / sw);
    }
    if (r_ == 1.0) return x_[median_index(i, j)];
    if (r_ > 1.0) return convex_center(i, j);
    return best_atom(i, j).first;
  }

 private:
  static constexpr std::size_t kSmall = 16;
  static constexpr std::size_t kMatrixLimit = 1500;

  double direct_cost(std::size_t i, std::size_t j) const {
    if (r_ == 2.0) {
      if (j - i <= kSmall) {
        const double c = center(i, j);
        long double s = 0;
        for (std::size_t k = i; k < j; ++k) s += w_[k] * (x_[k] - c) * (x_[k] - c);
        return static_cast<double>(s);
      }
      const long double sw = W_[j] - W_[i];
      const long double sx = WX_[j] - WX_[i];
      const long double sxx = WXX_[j] - WXX_[i];
      return static_cast<double>(std::max<long double>(0, sxx - sx * sx / sw));
    }
    if (r_ == 1.0) {
      const std::size_t l = median_index(i, j);
      if (j - i <= kSmall) {
        long double s = 0;
        for (std::size_t k = i; k < j; ++k) s += w_[k] * std::abs(x_[k] - x_[l]);
        return static_cast<double>(s);
      }
      const long double xl = static_cast<long double>(x_[l]) - origin_;
      const long double right = (WX_[j] - WX_[l]) - xl * (W_[j] - W_[l]);
      const long double left = xl * (W_[l] - W_[i]) - (WX_[l] - WX_[i]);
      return static_cast<double>(std::max<long double>(0, right + left));
    }
    if (r_ > 1.0) return range_cost(i, j, convex_center(i, j));
    return best_atom(i, j).second;
  }

  /// First index l with cumulative weight from i through l reaching half the range weight.
  std::size_t median_index(std::size_t i, std::size_t j) const {
    const long double half = 0.5L * (W_[j] - W_[i]);
    const long double target = W_[i] + half;
    auto it = std::lower_bound(W_.begin() + static_cast<long>(i) + 1, W_.begin() + static_cast<long>(j), target);
    return static_cast<std::size_t>(it - W_.begin()) - 1;
  }

  double range_cost(std::size_t i, std::size_t j, double c) const {
    long double s = 0;
    for (std::size_t k = i; k < j; ++k) s += w_[k] * std::pow(std::abs(x_[k] - c), r_);
    return static_cast<double>(s);
  }

  /// Root of the (nondecreasing) derivative on [x_i, x_{j-1}] by safeguarded Newton.
  double convex_center(std::size_t i, std::size_t j, double hint = std::numeric_limits<double>::quiet_NaN()) const {
    double lo = x_[i], hi = x_[j - 1];
    auto derivs = [&](double c) {
      long double g = 0, h = 0;
      for (std::size_t k = i; k < j; ++k) {
        const double d = c - x_[k];
        if (d == 0) continue;
        const double a = std::pow(std::abs(d), r_ - 2);
        g += w_[k] * a * d;
        h += w_[k] * a;
      }
      return std::pair{g, h * (r_ - 1)};
    };
    double c = (hint >= lo && hint <= hi) ? hint : 0.5 * (lo + hi);
    for (int it = 0; it < 200 && lo < hi; ++it) {
      const auto [g, h] = derivs(c);
      if (g == 0) return c;
      if (g > 0)
        hi = c;
      else
        lo = c;
      double next = c - static_cast<double>(g / h);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next <= lo || next >= hi || next == c) break;
      c = next;
    }
    double best = c, best_cost = range_cost(i, j, c);
    for (double e : {lo, hi}) {
      const double v = range_cost(i, j, e);
      if (v < best_cost) {
        best_cost = v;
        best = e;
      }
    }
    return best;
  }

  std::pair<double, double> best_atom(std::size_t i, std::size_t j) const {
    double best = std::numeric_limits<double>::infinity(), where = x_[i];
    for (std::size_t l = i; l < j; ++l) {
      const double c = range_cost(i, j, x_[l]);
      if (c < best) {
        best = c;
        where = x_[l];
      }
    }
    return {where, best};
  }

  void build_matrix() {
    const std::size_t m = size();
    matrix_.assign((m + 1) * (m + 1), 0.0);
    if (r_ < 1.0) {
      // f[l] = sum_{a in [i, j)} w_a |x_a - x_l|^r, grown one atom at a time.
      std::vector<long double> f(m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
          long double fj = 0;
          for (std::size_t l = i; l < j; ++l) {
            const double d = std::pow(std::abs(x_[j] - x_[l]), r_);
            f[l] += w_[j] * d;
            fj += w_[l] * d;
          }
          f[j] = fj;
          long double best = f[i];
          for (std::size_t l = i + 1; l <= j; ++l) best = std::min(best, f[l]);
          matrix_[i * (m + 1) + j + 1] = static_cast<double>(best);
        }
      }
    } else {
      // the optimal center only moves right as the range grows
      for (std::size_t i = 0; i < m; ++i) {
        double c = x_[i];
        for (std::size_t j = i + 2; j <= m; ++j) {
          c = convex_center(i, j, c);
          matrix_[i * (m + 1) + j] = range_cost(i, j, c);
        }
      }
    }
  }

  std::vector<double> x_, w_;
  double r_;
  double origin_ = 0.0;
  std::vector<long double> W_, WX_, WXX_;
  std::vector<double> matrix_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One DP layer: cur[i] = min_{j in [jmin, i)} prev[j] + cost(j, i) for i in [imin, m].
///
/// When `monotone` is set the optimal split is nondecreasing in i (the cost is
/// Monge for r >= 1) and rows are solved by divide and conquer.
inline void dp_layer(const std::vector<double>& prev, std::vector<double>& cur, std::vector<int>* arg,
                     const ClusterCost& cost, std::size_t imin, std::size_t jmin, bool monotone) {
  const std::size_t m = cost.size();
  std::fill(cur.begin(), cur.end(), kInf);
  auto best_for = [&](std::size_t i, std::size_t jlo, std::size_t jhi) {
    double best = kInf;
    std::size_t where = jlo;
    for (std::size_t j = jlo; j <= jhi && j < i; ++j) {
      if (prev[j] == kInf) continue;
      const double v = prev[j] + cost(j, i);
      if (v < best) {
        best = v;
        where = j;
      }
    }
    return std::pair{best, where};
  };
  if (imin > m) return;
  if (!monotone) {
    for (std::size_t i = imin; i <= m; ++i) {
      const auto [v, j] = best_for(i, jmin, i - 1);
      cur[i] = v;
      if (arg) (*arg)[i] = static_cast<int>(j);
    }
    return;
  }
  auto solve = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t optlo, std::size_t opthi) -> void {
    if (lo > hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto [v, j] = best_for(mid, optlo, std::min(opthi, mid - 1));
    cur[mid] = v;
    if (arg) (*arg)[mid] = static_cast<int>(j);
    if (mid > lo) self(self, lo, mid - 1, optlo, j);
    self(self, mid + 1, hi, j, opthi);
  };
  solve(solve, imin, m, jmin, m - 1);
}

inline void require_1d(const DiscreteMeasure& mu) {
  if (mu.dimension() != 1) throw Unsupported("exact quantization is available in d = 1 only");
}

inline ClusterCost make_cluster_cost(const DiscreteMeasure& mu, double r) {
  std::vector<double> x = mu.positions(), w = mu.weights();
  if (!std::is_sorted(x.begin(), x.end())) {
    DiscreteMeasure sorted = mu;
    sorted.canonicalize();
    x = sorted.positions();
    w = sorted.weights();
  }
  return ClusterCost(std::move(x), std::move(w), r);
}

inline std::vector<double> sorted_positions(const DiscreteMeasure& mu) {
  std::vector<double> x = mu.positions();
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace detail

/// V_{k,r} for k = 1..n_max on a 1-D measure (exact, no centers kept).
inline std::vector<double> vnr_exact_1d_series(const DiscreteMeasure& mu, std::size_t n_max, double r) {
  detail::require_1d(mu);
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  const auto cost = detail::make_cluster_cost(mu, r);
  const std::size_t m = cost.size();
  const bool monotone = r >= 1.0;
  std::vector<double> out;
  std::vector<double> prev(m + 1, detail::kInf), cur(m + 1);
  prev[0] = 0.0;
  double running = detail::kInf;
  for (std::size_t k = 1; k <= n_max; ++k) {
    if (k >= m) {
      out.push_back(0.0);
      continue;
    }
    detail::dp_layer(prev, cur, nullptr, cost, k, k - 1, monotone);
    running = std::min(running, cur[m]);
    out.push_back(running);
    std::swap(prev, cur);
  }
  return out;
}

/// Exact V_{n,r} in 1-D by dynamic programming over contiguous clusters.
inline QuantResult vnr_exact_1d(const DiscreteMeasure& mu, std::size_t n, double r) {
  detail::require_1d(mu);
  if (n == 0) throw DegenerateInput("V_{n,r} needs n >= 1");
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  QuantResult res;
  res.method = QuantMethod::ExactDp;
  res.n = n;
  if (n >= mu.size()) {
    for (double x : detail::sorted_positions(mu)) res.centers.push_back(Vector::Constant(1, x));
    res.cost = 0.0;
    return res;
  }
  const auto cost = detail::make_cluster_cost(mu, r);
  const std::size_t m = cost.size();
  const bool monotone = r >= 1.0;
  std::vector<std::vector<int>> args(n + 1, std::vector<int>(m + 1, -1));
  std::vector<std::vector<double>> F(n + 1, std::vector<double>(m + 1, detail::kInf));
  F[0][0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) detail::dp_layer(F[k - 1], F[k], &args[k], cost, k, k - 1, monotone);
  std::size_t best_k = n;
  for (std::size_t k = 1; k <= n; ++k)
    if (F[k][m] < F[best_k][m]) best_k = k;
  res.cost = F[best_k][m];
  std::size_t i = m;
  for (std::size_t k = best_k; k >= 1; --k) {
    const std::size_t j = static_cast<std::size_t>(args[k][i]);
    res.centers.push_back(Vector::Constant(1, cost.center(j, i)));
    i = j;
  }
  std::reverse(res.centers.begin(), res.centers.end());
  return res;
}

/// Exact U_{n,r}: distance d(x, alpha u U^c) with U = (lo, hi) the interior of `open_set`.
///
/// The two boundary points act as free centers: the atoms they serve form a
/// prefix (lo) and a suffix (hi) of the sorted atoms. n = 0 is allowed.
inline QuantResult unr_exact_1d(const DiscreteMeasure& mu, std::size_t n, double r, const Box& open_set) {
  detail::require_1d(mu);
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  const double lo = open_set.lo[0], hi = open_set.hi[0];
  QuantResult res;
  res.method = QuantMethod::ExactDp;
  res.n = n;
  if (n >= mu.size()) {
    for (double x : detail::sorted_positions(mu)) res.centers.push_back(Vector::Constant(1, x));
    res.cost = 0.0;
    return res;
  }
  const auto cost = detail::make_cluster_cost(mu, r);
  const std::size_t m = cost.size();
  DiscreteMeasure sorted = mu;
  sorted.canonicalize();
  std::vector<double> lo_cost(m + 1, 0.0), hi_cost(m + 1, 0.0);
  {
    long double acc = 0;
    for (std::size_t a = 0; a < m; ++a) {
      acc += sorted.weight(a) * std::pow(std::max(0.0, sorted.coord(a) - lo), r);
      lo_cost[a + 1] = static_cast<double>(acc);
    }
    acc = 0;
    for (std::size_t a = m; a-- > 0;) {
      acc += sorted.weight(a) * std::pow(std::max(0.0, hi - sorted.coord(a)), r);
      hi_cost[a] = static_cast<double>(acc);
    }
  }
  const bool monotone = r >= 1.0;
  std::vector<std::vector<double>> F(n + 1, std::vector<double>(m + 1));
  std::vector<std::vector<int>> args(n + 1, std::vector<int>(m + 1, -1));
  F[0] = lo_cost;
  std::vector<double> cur(m + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    detail::dp_layer(F[k - 1], cur, &args[k], cost, 1, 0, monotone);
    for (std::size_t i = 0; i <= m; ++i) {
      if (F[k - 1][i] <= cur[i]) {
        F[k][i] = F[k - 1][i];
        args[k][i] = -1;  // carry: one fewer real center
      } else {
        F[k][i] = cur[i];
      }
    }
  }
  std::size_t split = 0;
  double best = detail::kInf;
  for (std::size_t i = 0; i <= m; ++i) {
    const double v = F[n][i] + hi_cost[i];
    if (v < best) {
      best = v;
      split = i;
    }
  }
  res.cost = best;
  std::size_t i = split;
  for (std::size_t k = n; k >= 1; --k) {
    if (args[k][i] < 0) continue;
    const std::size_t j = static_cast<std::size_t>(args[k][i]);
    res.centers.push_back(Vector::Constant(1, cost.center(j, i)));
    i = j;
  }
  std::reverse(res.centers.begin(), res.centers.end());
  return res;
}

/// sum_i w_i min(d(x_i, centers), d(x_i, complement of U))^r for U = interior(open_set).
inline double constrained_cost(const DiscreteMeasure& mu, const std::vector<Vector>& centers, double r,
                               const Box& open_set) {
  long double total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto p = mu.point(i);
    double boundary = std::numeric_limits<double>::infinity();
    for (int k = 0; k < mu.dimension(); ++k)
      boundary = std::min({boundary, std::max(0.0, p[k] - open_set.lo[k]), std::max(0.0, open_set.hi[k] - p[k])});
    double best = boundary * boundary;
    for (const auto& c : centers) {
      double sq = 0.0;
      for (int k = 0; k < mu.dimension(); ++k) sq += (p[k] - c[k]) * (p[k] - c[k]);
      best = std::min(best, sq);
    }
    total += mu.weight(i) * std::pow(std::sqrt(best), r);
  }
  return static_cast<double>(total);
}

/// CSV n;V;method;centers... (one row per result; centers comma-joined per point).
inline void write_quant_csv(std::ostream& os, const std::vector<QuantResult>& results) {
  os << "n;V;method;centers\n";
  for (const auto& q : results) {
    os << q.n << ';' << num(q.cost) << ';' << to_string(q.method);
    for (const auto& c : q.centers) os << ';' << num(c);
    os << '\n';
  }
}

}  // namespace fquant
