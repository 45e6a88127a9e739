#pragma once

#include "fquant/antichain.hpp"
#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/lloyd.hpp"
#include "fquant/measure.hpp"
#include "fquant/pressure.hpp"
#include "fquant/quantize.hpp"
#include "fquant/rifs.hpp"
#include "fquant/word.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

namespace fquant {

/// (n, V_{n,r}) pair.
using SeriesPoint = std::pair<double, double>;

inline double median(std::vector<double> v) {
  if (v.empty()) throw DegenerateInput("median of an empty list");
  const std::size_t h = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(h), v.end());
  const double hi = v[h];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<long>(h)));
}

/// Median of pairwise slopes.
inline double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DegenerateInput("Theil-Sen needs at least two paired values");
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  return median(std::move(slopes));
}

struct DimensionEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double slope_fit = 0.0;
  std::vector<SeriesPoint> points;
  std::vector<double> e_n;  // r log n / (-log V_n), aligned with points
};

/// Pointwise ratios e_n, their range over the largest quarter of n, and the
/// least-squares slope of r log n against -log V_n.
inline DimensionEstimate estimate_dimension(std::vector<SeriesPoint> points, double r) {
  if (points.size() < 4) throw DegenerateInput("dimension estimate needs at least 4 points");
  for (const auto& [n, v] : points)
    if (!(v > 0)) throw DegenerateInput("dimension estimate needs V_n > 0 (got " + num(v) + " at n = " + num(n) + ")");
  std::sort(points.begin(), points.end());
  DimensionEstimate est;
  std::vector<double> x, y;
  for (const auto& [n, v] : points) {
    est.e_n.push_back(r * std::log(n) / -std::log(v));
    x.push_back(-std::log(v));
    y.push_back(r * std::log(n));
  }
  est.slope_fit = least_squares(x, y).slope;
  const std::size_t tail = std::max<std::size_t>(1, points.size() / 4);
  const auto first = est.e_n.end() - static_cast<long>(tail);
  est.lower = *std::min_element(first, est.e_n.end());
  est.upper = *std::max_element(first, est.e_n.end());
  est.points = std::move(points);
  return est;
}

struct CoefficientSeries {
  double s = 0.0;
  std::vector<SeriesPoint> values;      // (n, n^{r/s} V_n)
  std::vector<SeriesPoint> phi_subseq;  // values with n in the Phi list
  double tail_min = 0.0;
  double tail_max = 0.0;
};

/// n^{r/s} V_n, plus its restriction to n in `phi_list`; tail = largest half of n.
inline CoefficientSeries coefficient_series(std::vector<SeriesPoint> points, double s, double r,
                                            const std::vector<double>& phi_list) {
  if (!(s > 0)) throw DegenerateInput("coefficient series needs s > 0");
  std::sort(points.begin(), points.end());
  CoefficientSeries cs;
  cs.s = s;
  for (const auto& [n, v] : points) {
    const double value = std::pow(n, r / s) * v;
    cs.values.emplace_back(n, value);
    if (std::find(phi_list.begin(), phi_list.end(), n) != phi_list.end()) cs.phi_subseq.emplace_back(n, value);
  }
  if (!cs.values.empty()) {
    const std::size_t tail = std::max<std::size_t>(1, cs.values.size() / 2);
    cs.tail_min = cs.tail_max = cs.values.back().second;
    for (std::size_t k = cs.values.size() - tail; k < cs.values.size(); ++k) {
      cs.tail_min = std::min(cs.tail_min, cs.values[k].second);
      cs.tail_max = std::max(cs.tail_max, cs.values[k].second);
    }
  }
  return cs;
}

/// Dimension table rows n;e_n;coef_s.
inline void write_dimension_csv(std::ostream& os, const DimensionEstimate& est, double s, double r) {
  os << "n;e_n;coef_s\n";
  for (std::size_t k = 0; k < est.points.size(); ++k) {
    const auto [n, v] = est.points[k];
    os << num(n) << ';' << num(est.e_n[k]) << ';' << num(std::pow(n, r / s) * v) << '\n';
  }
}

struct SubdivisionBound {
  double bound = 0.0;
  std::size_t n = 0;  // total number of centers used
  std::vector<std::size_t> allocation;  // n_sigma, aligned with the antichain members
};

namespace detail {

/// V_{k,r} series (k = 1..k_max) of the shifted approximant, one per shift length.
class ShiftedSeries {
 public:
  ShiftedSeries(const RifsSpec& spec, const Word& omega, double r, std::size_t depth_L)
      : spec_(spec), omega_(omega), r_(r), depth_L_(depth_L) {}

  double operator()(std::size_t shift_len, std::size_t k) {
    if (k == 0) throw DegenerateInput("each cylinder needs at least one center");
    auto& entry = cache_[shift_len];
    if (entry.second.size() < k) {
      if (entry.first.empty())
        entry.first = approximant(spec_, shift(omega_, shift_len), depth_L_ - shift_len, default_anchor(spec_));
      if (spec_.dimension == 1) {
        entry.second = vnr_exact_1d_series(entry.first, std::max(k, 2 * entry.second.size()), r_);
      } else {
        std::vector<double> s;
        for (std::size_t q = 1; q <= k; ++q) s.push_back(vnr_lloyd(entry.first, q, r_, 8, q).cost);
        for (std::size_t q = 1; q < s.size(); ++q) s[q] = std::min(s[q], s[q - 1]);
        entry.second = std::move(s);
      }
    }
    return entry.second[k - 1];
  }

 private:
  const RifsSpec& spec_;
  const Word& omega_;
  double r_;
  std::size_t depth_L_;
  std::map<std::size_t, std::pair<DiscreteMeasure, std::vector<double>>> cache_;
};

inline SubdivisionBound evaluate_subdivision(const RifsSpec& spec, const Word& omega, const Antichain& gamma,
                                             std::vector<std::size_t> alloc, double r, std::size_t depth_L) {
  if (gamma.max_depth() > depth_L) throw DegenerateInput("depth_L must be at least the deepest antichain member");
  ShiftedSeries series(spec, omega, r, depth_L);
  SubdivisionBound out;
  long double total = 0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const auto& m = gamma.members[k];
    total += std::exp(m.geom.log_weight(r)) * series(m.sigma.size(), alloc[k]);
    out.n += alloc[k];
  }
  out.bound = static_cast<double>(total);
  out.allocation = std::move(alloc);
  return out;
}

}  // namespace detail

/// sum_{sigma in gamma} p_sigma c_sigma^r V_{inner_n,r}(shifted approximant of depth depth_L - |sigma|);
/// an upper bound for V_{inner_n * card(gamma), r} of the depth-depth_L approximant.
inline SubdivisionBound vnr_subdivision_upper(const RifsSpec& spec, const Word& omega, const Antichain& gamma,
                                              std::size_t inner_n, double r, std::size_t depth_L) {
  if (!validate_fma(spec, omega, gamma)) throw NotAnFma("subdivision bound needs a finite maximal antichain");
  return detail::evaluate_subdivision(spec, omega, gamma, std::vector<std::size_t>(gamma.size(), inner_n), r, depth_L);
}

/// Same bound with n split across members proportionally to (p_sigma c_sigma^r)^{kappa/(r+kappa)}
/// (at least one each, remainders by largest fractional part).
inline SubdivisionBound vnr_subdivision_upper_greedy(const RifsSpec& spec, const Word& omega, const Antichain& gamma,
                                                     std::size_t total_n, double r, double kappa,
                                                     std::size_t depth_L) {
  if (!validate_fma(spec, omega, gamma)) throw NotAnFma("subdivision bound needs a finite maximal antichain");
  const std::size_t m = gamma.size();
  if (total_n < m) throw DegenerateInput("greedy allocation needs n >= card(gamma)");
  const double z = kappa / (r + kappa);
  std::vector<double> share(m);
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    share[k] = std::exp(z * gamma.members[k].geom.log_weight(r));
    sum += share[k];
  }
  std::vector<std::size_t> alloc(m, 1);
  const double spare = static_cast<double>(total_n - m);
  std::vector<std::pair<double, std::size_t>> frac;
  std::size_t used = m;
  for (std::size_t k = 0; k < m; ++k) {
    const double want = spare * share[k] / sum;
    const auto whole = static_cast<std::size_t>(std::floor(want));
    alloc[k] += whole;
    used += whole;
    frac.emplace_back(want - static_cast<double>(whole), k);
  }
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t q = 0; used < total_n; ++q, ++used) ++alloc[frac[q % m].second];
  return detail::evaluate_subdivision(spec, omega, gamma, std::move(alloc), r, depth_L);
}

}  // namespace fquant
