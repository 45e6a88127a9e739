#pragma once

#include "fquant/error.hpp"
#include "fquant/rifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fquant {

struct UesscResult {
  bool holds = false;
  double beta = 0.0;  // largest admissible beta (0 when the condition fails)
};

/// Uniform extra strong separation at level 1:
///   min_{j != j'} dist(E_{i,j}, E_{i,j'}) >= beta * max_j |E_{i,j}|  for every i.
inline UesscResult check_uessc(const RifsSpec& spec) {
  constexpr double tol = 1e-12;
  const double diam_x = spec.ambient.diameter();
  double beta = std::numeric_limits<double>::infinity();
  for (const Ifs& ifs : spec.components) {
    double min_dist = std::numeric_limits<double>::infinity();
    double max_diam = 0.0;
    for (std::size_t j = 0; j < ifs.size(); ++j) {
      max_diam = std::max(max_diam, ifs.maps[j].ratio * diam_x);
      const Box bj = ifs.maps[j].affine().image(spec.ambient);
      for (std::size_t k = j + 1; k < ifs.size(); ++k) {
        min_dist = std::min(min_dist, box_distance(bj, ifs.maps[k].affine().image(spec.ambient)));
      }
    }
    if (min_dist <= tol) return {false, 0.0};
    beta = std::min(beta, min_dist / max_diam);
  }
  return {true, beta};
}

struct SuoscResult {
  bool holds = false;
  Box open_set;  // U = interior of this box
};

/// Strong uniform open set condition for interval systems with U = interior(X).
///
/// Requires disjoint open images inside U and every level-1 image inside the open
/// interior, which forces F_omega to meet U for every omega.
inline SuoscResult check_suosc_intervals(const RifsSpec& spec) {
  if (spec.dimension != 1) throw Unsupported("SUOSC check is implemented for d = 1 only");
  constexpr double tol = 1e-12;
  const double lo = spec.ambient.lo[0];
  const double hi = spec.ambient.hi[0];
  SuoscResult res{true, spec.ambient};
  for (const Ifs& ifs : spec.components) {
    std::vector<std::pair<double, double>> images;
    for (const auto& s : ifs.maps) {
      const Box b = s.affine().image(spec.ambient);
      images.emplace_back(b.lo[0], b.hi[0]);
    }
    std::sort(images.begin(), images.end());
    for (std::size_t j = 0; j < images.size(); ++j) {
      if (!(images[j].first > lo + tol && images[j].second < hi - tol)) res.holds = false;
      // open images overlap when the next one starts before this one ends
      if (j + 1 < images.size() && images[j + 1].first < images[j].second + tol) res.holds = false;
    }
  }
  return res;
}

/// Covering constants used by the upper-bound argument.
struct LemmaConstants {
  long long D = 0;
  long long G1 = 0;
  long long G2 = 0;
  long long G = 0;
};

namespace detail {
inline long long floor_tolerant(double v) { return static_cast<long long>(std::floor(v * (1.0 + 1e-12))); }
}  // namespace detail

/// D = smallest positive integer with D^r > 2/(p c^r); G1 = floor((1+16D/beta)^d);
/// G2 = floor((1+16D/beta+8D)^d); G = G1 + G2.
inline LemmaConstants lemma_constants(const RifsSpec& spec, double r, double beta) {
  if (!(beta > 0)) throw SeparationRequired("lemma constants need a positive separation constant beta");
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  const Extrema e = spec.extrema();
  const double bound = 2.0 / (e.p_min * std::pow(e.c_min, r));
  long long D = std::max<long long>(1, static_cast<long long>(std::floor(std::pow(bound, 1.0 / r))) - 1);
  while (!(std::pow(static_cast<double>(D), r) > bound)) ++D;
  const int d = spec.dimension;
  const double Dd = static_cast<double>(D);
  LemmaConstants lc;
  lc.D = D;
  lc.G1 = detail::floor_tolerant(std::pow(1.0 + 16.0 * Dd / beta, d));
  lc.G2 = detail::floor_tolerant(std::pow(1.0 + 16.0 * Dd / beta + 8.0 * Dd, d));
  lc.G = lc.G1 + lc.G2;
  return lc;
}

}  // namespace fquant
