#pragma once

#include "fquant/antichain.hpp"
#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/rifs.hpp"
#include "fquant/word.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

namespace fquant {

/// Root of a pressure equation  sum (p_sigma c_sigma^r)^{s/(r+s)} = 1  solved in z = s/(r+s).
struct PressureSolution {
  double exponent = 0.0;  // kappa_r, t_{n,r} or s_{n,r}
  double z = 0.0;
  double residual = 0.0;  // defining log-equation evaluated at z
  int iterations = 0;
};

namespace detail {

using Real = long double;

/// log sum_k exp(z * a_k), stable.
inline Real log_sum_exp_scaled(const std::vector<double>& logs, Real z) {
  Real m = -std::numeric_limits<Real>::infinity();
  for (double a : logs) m = std::max(m, z * a);
  Real s = 0;
  for (double a : logs) s += std::exp(z * a - m);
  return m + std::log(s);
}

/// Bisection on a strictly decreasing F over [0,1] with F(0) > 0 > F(1).
inline PressureSolution bisect_pressure(const std::function<Real(Real)>& F, double r) {
  Real lo = 0, hi = 1;
  Real f_lo = F(lo), f_hi = F(hi);
  if (!(f_lo > 0 && f_hi < 0))
    throw InternalInvariant("pressure function does not change sign on [0,1]; invariants violated upstream");
  int it = 0;
  while (it < 200) {
    const Real mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Real f = F(mid);
    ++it;
    if (f == 0) {
      lo = hi = mid;
      f_lo = f_hi = 0;
      break;
    }
    if (f > 0) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  const Real z = (std::abs(f_lo) <= std::abs(f_hi)) ? lo : hi;
  PressureSolution sol;
  sol.z = static_cast<double>(z);
  sol.exponent = static_cast<double>(r * z / (1 - z));
  sol.residual = static_cast<double>(F(z));
  sol.iterations = it;
  return sol;
}

inline std::vector<std::vector<double>> component_logs(const RifsSpec& spec, double r) {
  return log_weight_table(spec, r);
}

}  // namespace detail

/// log B_i(z) = log sum_{j in I_i} (p_{i,j} c_{i,j}^r)^z for every component i.
inline std::vector<double> log_brackets(const RifsSpec& spec, double r, double z) {
  const auto logs = detail::component_logs(spec, r);
  std::vector<double> out;
  for (const auto& row : logs) out.push_back(static_cast<double>(detail::log_sum_exp_scaled(row, z)));
  return out;
}

/// Expected pressure T(z) = sum_j zeta_j log B_j(z).
inline double expected_pressure(const RifsSpec& spec, double r, double z) {
  const auto logs = detail::component_logs(spec, r);
  detail::Real t = 0;
  for (std::size_t j = 0; j < logs.size(); ++j) t += spec.zeta[j] * detail::log_sum_exp_scaled(logs[j], z);
  return static_cast<double>(t);
}

/// kappa_r: the unique zero of the expected pressure.
inline PressureSolution solve_kappa(const RifsSpec& spec, double r) {
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  const auto logs = detail::component_logs(spec, r);
  auto T = [&](detail::Real z) {
    detail::Real t = 0;
    for (std::size_t j = 0; j < logs.size(); ++j) t += spec.zeta[j] * detail::log_sum_exp_scaled(logs[j], z);
    return t;
  };
  return detail::bisect_pressure(T, r);
}

/// s_{n,r}(omega) = D_r(mu_{omega_n^p}): root of prod_{i<=n} B_{omega_i}(z) = 1.
///
/// Evaluated through letter counts, so the cost per z is O(N * max card). The
/// residual is reported per letter, (1/n) log prod B.
inline PressureSolution solve_level_pressure(const RifsSpec& spec, const Word& omega, std::size_t n, double r) {
  if (n == 0) throw DegenerateInput("level pressure needs n >= 1");
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  const auto logs = detail::component_logs(spec, r);
  std::vector<double> freq(spec.components.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) freq[omega.at(k)] += 1.0;
  for (auto& f : freq) f /= static_cast<double>(n);
  auto F = [&](detail::Real z) {
    detail::Real t = 0;
    for (std::size_t j = 0; j < logs.size(); ++j)
      if (freq[j] > 0) t += freq[j] * detail::log_sum_exp_scaled(logs[j], z);
    return t;
  };
  return detail::bisect_pressure(F, r);
}

/// Root of sum_{sigma in gamma} (p_sigma c_sigma^r)^z = 1 with log-sum-exp.
inline PressureSolution solve_antichain_pressure(const std::vector<double>& log_weights, double r) {
  if (log_weights.size() < 2) throw DegenerateInput("antichain pressure needs at least two members");
  auto F = [&](detail::Real z) { return detail::log_sum_exp_scaled(log_weights, z); };
  return detail::bisect_pressure(F, r);
}

/// t_{n,r}: pressure exponent on an antichain (normally Gamma_{omega,n}).
inline PressureSolution solve_tnr(const Antichain& gamma, double r) {
  std::vector<double> lw;
  lw.reserve(gamma.size());
  for (const auto& m : gamma.members) lw.push_back(m.geom.log_weight(r));
  return solve_antichain_pressure(lw, r);
}

/// Ordinary least squares y = a + b x with the usual standard error of b.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw DegenerateInput("least squares needs at least three paired points");
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DegenerateInput("least squares with constant abscissa");
  LinearFit fit;
  const long double b = sxy / sxx;
  fit.slope = static_cast<double>(b);
  fit.intercept = static_cast<double>(my - b * mx);
  long double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double e = y[i] - (my + b * (x[i] - mx));
    ssr += e * e;
  }
  fit.stderr_slope = static_cast<double>(std::sqrt(ssr / (n - 2) / sxx));
  return fit;
}

/// Window products P(n, n') = prod_{i=n+1}^{n+n'} B_{omega_i}(z0) at z0 = kappa/(r+kappa).
///
/// Stored as prefix sums of log B so any entry is O(1); the full grid is only
/// materialized on request.
class WindowProducts {
 public:
  WindowProducts(std::vector<long double> prefix, std::size_t n_max, std::size_t nprime_max)
      : prefix_(std::move(prefix)), n_max_(n_max), nprime_max_(nprime_max) {
    scan_extrema();
  }

  std::size_t n_max() const { return n_max_; }
  std::size_t nprime_max() const { return nprime_max_; }

  /// log P(n, n'), 0 <= n <= n_max, 1 <= n' <= nprime_max.
  double log_product(std::size_t n, std::size_t nprime) const {
    return static_cast<double>(prefix_[n + nprime] - prefix_[n]);
  }

  double min_log() const { return min_log_; }
  double max_log() const { return max_log_; }
  double min_product() const { return std::exp(min_log_); }  // empirical m_omega candidate
  double max_product() const { return std::exp(max_log_); }  // empirical M_omega candidate

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(n_max_ + 1, std::vector<double>(nprime_max_));
    for (std::size_t n = 0; n <= n_max_; ++n)
      for (std::size_t k = 1; k <= nprime_max_; ++k) m[n][k - 1] = std::exp(log_product(n, k));
    return m;
  }

  /// Drift of log P(0, n) against n, n = 1..nprime_max.
  LinearFit drift() const {
    std::vector<double> x, y;
    for (std::size_t k = 1; k <= nprime_max_; ++k) {
      x.push_back(static_cast<double>(k));
      y.push_back(log_product(0, k));
    }
    return least_squares(x, y);
  }

  /// "consistent with Omega'" when |slope| <= 2 * stderr, or when the drift over the
  /// whole window is below rounding level (|slope| * n' <= 1e-12).
  bool consistent_with_omega_prime() const {
    const LinearFit f = drift();
    if (std::abs(f.slope) * static_cast<double>(nprime_max_) <= 1e-12) return true;
    return std::abs(f.slope) <= 2.0 * f.stderr_slope;
  }

  void write_csv(std::ostream& os) const {
    os << "n;nprime;log_product\n";
    for (std::size_t n = 0; n <= n_max_; ++n)
      for (std::size_t k = 1; k <= nprime_max_; ++k) os << n << ';' << k << ';' << num(log_product(n, k)) << '\n';
  }

 private:
  // For each n the extreme of prefix over (n, n + nprime_max] via monotone deques.
  void scan_extrema() {
    min_log_ = std::numeric_limits<double>::infinity();
    max_log_ = -std::numeric_limits<double>::infinity();
    std::deque<std::size_t> qmin, qmax;
    std::size_t next = 1;
    for (std::size_t n = 0; n <= n_max_; ++n) {
      const std::size_t hi = n + nprime_max_;
      for (; next <= hi; ++next) {
        while (!qmin.empty() && prefix_[qmin.back()] >= prefix_[next]) qmin.pop_back();
        qmin.push_back(next);
        while (!qmax.empty() && prefix_[qmax.back()] <= prefix_[next]) qmax.pop_back();
        qmax.push_back(next);
      }
      while (qmin.front() <= n) qmin.pop_front();
      while (qmax.front() <= n) qmax.pop_front();
      min_log_ = std::min(min_log_, static_cast<double>(prefix_[qmin.front()] - prefix_[n]));
      max_log_ = std::max(max_log_, static_cast<double>(prefix_[qmax.front()] - prefix_[n]));
    }
  }

  std::vector<long double> prefix_;
  std::size_t n_max_, nprime_max_;
  double min_log_ = 0.0, max_log_ = 0.0;
};

inline WindowProducts window_products(const RifsSpec& spec, const Word& omega, double r, double kappa,
                                      std::size_t n_max, std::size_t nprime_max) {
  if (nprime_max == 0) throw DegenerateInput("window products need n' >= 1");
  const detail::Real z = static_cast<detail::Real>(kappa) / (static_cast<detail::Real>(r) + kappa);
  const auto logs = detail::component_logs(spec, r);
  std::vector<detail::Real> logb;
  for (const auto& row : logs) logb.push_back(detail::log_sum_exp_scaled(row, z));
  const std::size_t len = n_max + nprime_max;
  std::vector<long double> prefix(len + 1, 0.0L);
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + logb[omega.at(i)];
  return WindowProducts(std::move(prefix), n_max, nprime_max);
}

/// Birkhoff average (1/n) log sum_{sigma in Lambda^(n)} (p_sigma c_sigma^r)^z = (1/n) sum_i log B_{omega_i}(z).
inline double ergodic_average(const RifsSpec& spec, const Word& omega, double r, double z, std::size_t n) {
  if (n == 0) throw DegenerateInput("ergodic average needs n >= 1");
  const auto logb = log_brackets(spec, r, z);
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += logb[omega.at(i)];
  return static_cast<double>(s / n);
}

/// The running averages for n = 1..n_max (CSV n;average).
inline std::vector<double> ergodic_series(const RifsSpec& spec, const Word& omega, double r, double z,
                                          std::size_t n_max) {
  const auto logb = log_brackets(spec, r, z);
  std::vector<double> out;
  out.reserve(n_max);
  long double s = 0;
  for (std::size_t i = 0; i < n_max; ++i) {
    s += logb[omega.at(i)];
    out.push_back(static_cast<double>(s / (i + 1)));
  }
  return out;
}

inline void write_ergodic_csv(std::ostream& os, const std::vector<double>& series) {
  os << "n;average\n";
  for (std::size_t i = 0; i < series.size(); ++i) os << (i + 1) << ';' << num(series[i]) << '\n';
}

}  // namespace fquant
