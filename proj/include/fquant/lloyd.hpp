#pragma once

#include "fquant/error.hpp"
#include "fquant/geometry.hpp"
#include "fquant/measure.hpp"
#include "fquant/quantize.hpp"
#include "fquant/word.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace fquant {

namespace detail {

struct LloydState {
  std::vector<Vector> centers;
  std::vector<int> owner;  // -1: served by the boundary
  std::vector<double> contrib;
  double cost = 0.0;
};

inline double dist(std::span<const double> p, const Vector& c) {
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sq += (p[k] - c[static_cast<Eigen::Index>(k)]) * (p[k] - c[static_cast<Eigen::Index>(k)]);
  return std::sqrt(sq);
}

inline double boundary_dist(std::span<const double> p, const Box& open_set) {
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    b = std::min({b, std::max(0.0, p[k] - open_set.lo[kk]), std::max(0.0, open_set.hi[kk] - p[k])});
  }
  return b;
}

inline void assign(const DiscreteMeasure& mu, double r, LloydState& st, const std::optional<Box>& open_set) {
  const std::size_t m = mu.size();
  st.owner.assign(m, -1);
  st.contrib.assign(m, 0.0);
  long double total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto p = mu.point(i);
    double best = open_set ? boundary_dist(p, *open_set) : std::numeric_limits<double>::infinity();
    int who = -1;
    for (std::size_t c = 0; c < st.centers.size(); ++c) {
      const double d = dist(p, st.centers[c]);
      if (d < best) {
        best = d;
        who = static_cast<int>(c);
      }
    }
    st.owner[i] = who;
    st.contrib[i] = mu.weight(i) * std::pow(best, r);
    total += st.contrib[i];
  }
  st.cost = static_cast<double>(total);
}

inline double cluster_cost(const DiscreteMeasure& mu, const std::vector<std::size_t>& idx, const Vector& c, double r) {
  long double s = 0;
  for (std::size_t i : idx) s += mu.weight(i) * std::pow(dist(mu.point(i), c), r);
  return static_cast<double>(s);
}

/// Best single center for the atoms `idx`: exact in 1-D, improving iterations otherwise.
inline Vector one_center(const DiscreteMeasure& mu, const std::vector<std::size_t>& idx, double r, const Vector& start) {
  const int d = mu.dimension();
  if (r == 2.0) {
    Vector c = Vector::Zero(d);
    double w = 0.0;
    for (std::size_t i : idx) {
      const auto p = mu.point(i);
      for (int k = 0; k < d; ++k) c[k] += mu.weight(i) * p[static_cast<std::size_t>(k)];
      w += mu.weight(i);
    }
    return c / w;
  }
  if (d == 1) {
    std::vector<double> x, w;
    std::vector<std::size_t> order(idx);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return mu.coord(a) < mu.coord(b); });
    for (std::size_t i : order) {
      x.push_back(mu.coord(i));
      w.push_back(mu.weight(i));
    }
    ClusterCost cc(std::move(x), std::move(w), r);
    return Vector::Constant(1, cc.center(0, cc.size()));
  }
  // Weiszfeld / IRLS step x <- sum(w_i |x_i - c|^{r-2} x_i) / sum(w_i |x_i - c|^{r-2}), kept only while it improves.
  // Atoms sitting on the current center are left out of the step, otherwise a
  // center seeded on an atom never moves.
  Vector c = start;
  double cost = cluster_cost(mu, idx, c, r);
  {
    Vector mean = Vector::Zero(d);
    double w = 0.0;
    for (std::size_t i : idx) {
      for (int k = 0; k < d; ++k) mean[k] += mu.weight(i) * mu.coord(i, k);
      w += mu.weight(i);
    }
    mean /= w;
    const double mc = cluster_cost(mu, idx, mean, r);
    if (mc < cost) {
      c = mean;
      cost = mc;
    }
  }
  for (int it = 0; it < 200; ++it) {
    Vector num = Vector::Zero(d);
    double den = 0.0;
    for (std::size_t i : idx) {
      const auto p = mu.point(i);
      const double dd = dist(p, c);
      if (dd < 1e-14) continue;
      const double a = mu.weight(i) * std::pow(dd, r - 2.0);
      for (int k = 0; k < d; ++k) num[k] += a * p[static_cast<std::size_t>(k)];
      den += a;
    }
    if (!(den > 0) || !std::isfinite(den)) break;
    const Vector next = num / den;
    const double next_cost = cluster_cost(mu, idx, next, r);
    if (!(next_cost < cost * (1 - 1e-15))) break;
    c = next;
    cost = next_cost;
  }
  if (r < 1.0) {
    // Concave pieces favour atoms; try them when cheap.
    if (idx.size() <= 256) {
      for (std::size_t i : idx) {
        Vector a(d);
        for (int k = 0; k < d; ++k) a[k] = mu.coord(i, k);
        const double ac = cluster_cost(mu, idx, a, r);
        if (ac < cost) {
          cost = ac;
          c = a;
        }
      }
    }
  }
  return c;
}

inline Vector atom_vector(const DiscreteMeasure& mu, std::size_t i) {
  Vector v(mu.dimension());
  for (int k = 0; k < mu.dimension(); ++k) v[k] = mu.coord(i, k);
  return v;
}

/// k-means++ style seeding with D^r sampling.
inline std::vector<Vector> seed_centers(const DiscreteMeasure& mu, std::size_t n, double r, std::mt19937_64& rng) {
  std::vector<Vector> centers;
  std::discrete_distribution<std::size_t> first(mu.weights().begin(), mu.weights().end());
  centers.push_back(atom_vector(mu, first(rng)));
  std::vector<double> d(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) d[i] = mu.weight(i) * std::pow(dist(mu.point(i), centers[0]), r);
  while (centers.size() < n) {
    const double total = std::accumulate(d.begin(), d.end(), 0.0);
    if (!(total > 0)) break;
    std::discrete_distribution<std::size_t> pick(d.begin(), d.end());
    centers.push_back(atom_vector(mu, pick(rng)));
    for (std::size_t i = 0; i < mu.size(); ++i)
      d[i] = std::min(d[i], mu.weight(i) * std::pow(dist(mu.point(i), centers.back()), r));
  }
  return centers;
}

inline QuantResult lloyd_impl(const DiscreteMeasure& mu, std::size_t n, double r, int restarts, std::uint64_t seed,
                              const std::optional<Box>& open_set) {
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  if (restarts < 1) throw DegenerateInput("restarts must be >= 1");
  QuantResult best;
  best.method = QuantMethod::Lloyd;
  best.n = n;
  best.restarts = restarts;
  if (mu.empty()) return best;
  DiscreteMeasure atoms = mu;
  atoms.canonicalize();
  if (n >= atoms.size()) {
    for (std::size_t i = 0; i < atoms.size(); ++i) best.centers.push_back(atom_vector(atoms, i));
    best.cost = 0.0;
    return best;
  }
  best.cost = std::numeric_limits<double>::infinity();
  if (n == 0) {
    LloydState st;
    assign(atoms, r, st, open_set);
    best.cost = st.cost;
    return best;
  }
  for (int run = 0; run < restarts; ++run) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(run) + 1)));
    LloydState st;
    st.centers = seed_centers(atoms, n, r, rng);
    assign(atoms, r, st, open_set);
    int it = 0;
    for (; it < 500; ++it) {
      std::vector<std::vector<std::size_t>> members(n);
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (st.owner[i] >= 0) members[static_cast<std::size_t>(st.owner[i])].push_back(i);
      for (std::size_t c = 0; c < n; ++c) {
        if (c >= st.centers.size() || members[c].empty()) {
          // reseed at the atom paying the most
          const auto worst = static_cast<std::size_t>(
              std::max_element(st.contrib.begin(), st.contrib.end()) - st.contrib.begin());
          if (c >= st.centers.size())
            st.centers.push_back(atom_vector(atoms, worst));
          else
            st.centers[c] = atom_vector(atoms, worst);
          st.contrib[worst] = 0.0;
          continue;
        }
        st.centers[c] = one_center(atoms, members[c], r, st.centers[c]);
      }
      const double before = st.cost;
      assign(atoms, r, st, open_set);
      if (!(st.cost < before * (1 - 1e-14))) {
        ++it;
        break;
      }
    }
    if (st.cost < best.cost) {
      best.cost = st.cost;
      best.centers = st.centers;
      best.iterations = it;
    }
  }
  return best;
}

}  // namespace detail

/// Heuristic V_{n,r}: best of `restarts` Lloyd runs; an upper bound on the optimum.
inline QuantResult vnr_lloyd(const DiscreteMeasure& mu, std::size_t n, double r, int restarts, std::uint64_t seed) {
  if (n == 0) throw DegenerateInput("V_{n,r} needs n >= 1");
  return detail::lloyd_impl(mu, n, r, restarts, seed, std::nullopt);
}

/// Heuristic U_{n,r} for any dimension.
inline QuantResult unr_lloyd(const DiscreteMeasure& mu, std::size_t n, double r, const Box& open_set, int restarts,
                             std::uint64_t seed) {
  return detail::lloyd_impl(mu, n, r, restarts, seed, open_set);
}

/// U_{n,r}: exact in 1-D, Unsupported otherwise (use unr_lloyd).
inline QuantResult unr(const DiscreteMeasure& mu, std::size_t n, double r, const Box& open_set) {
  if (mu.dimension() != 1) throw Unsupported("exact U_{n,r} is available in d = 1 only; use the Lloyd variant");
  return unr_exact_1d(mu, n, r, open_set);
}

}  // namespace fquant
