#pragma once

#include "fquant/cylinder.hpp"
#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/rifs.hpp"
#include "fquant/word.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

namespace fquant {

/// Enumeration budget: FRACTAL_QUANT_BUDGET when set, 10^7 otherwise.
inline double default_budget() {
  if (const char* env = std::getenv("FRACTAL_QUANT_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 1e7;
}

struct Cylinder {
  Sigma sigma;
  CylinderGeom geom;
};

/// A finite set of pairwise incomparable symbol strings with their cylinder geometry.
struct Antichain {
  enum class Source { Level, Gamma, Custom };

  std::vector<Cylinder> members;
  Source source = Source::Custom;
  std::uint64_t parameter = 0;  // n of Lambda^(n) or of Gamma_{omega,n}

  std::size_t size() const { return members.size(); }

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& m : members) d = std::max(d, m.sigma.size());
    return d;
  }

  std::size_t min_depth() const {
    if (members.empty()) return 0;
    std::size_t d = members.front().sigma.size();
    for (const auto& m : members) d = std::min(d, m.sigma.size());
    return d;
  }

  double total_prob() const {
    double s = 0.0;
    for (const auto& m : members) s += m.geom.prob;
    return s;
  }
};

/// Builds an antichain from bare strings (geometry composed along omega).
inline Antichain make_antichain(const RifsSpec& spec, const Word& omega, const std::vector<Sigma>& sigmas,
                                const Vector& anchor) {
  Antichain a;
  a.source = Antichain::Source::Custom;
  for (const auto& s : sigmas) a.members.push_back({s, compose(spec, omega, s, anchor)});
  return a;
}

inline Antichain make_antichain(const RifsSpec& spec, const Word& omega, const std::vector<Sigma>& sigmas) {
  return make_antichain(spec, omega, sigmas, default_anchor(spec));
}

/// Lambda_omega^(n): every level-n cylinder, in lexicographic order.
inline Antichain enumerate_level(const RifsSpec& spec, const Word& omega, std::size_t n, const Vector& anchor,
                                 double budget = default_budget()) {
  const double count = level_count(spec, omega, n);
  if (count > budget) throw BudgetExceeded(count, budget);
  Antichain out;
  out.source = Antichain::Source::Level;
  out.parameter = n;
  out.members.reserve(static_cast<std::size_t>(count));
  Sigma sigma;
  auto rec = [&](auto&& self, const CylinderBuilder& b, std::size_t depth) -> void {
    if (depth == n) {
      out.members.push_back({sigma, b.geometry(spec, anchor)});
      return;
    }
    const Letter letter = omega.at(depth);
    for (std::size_t j = 0; j < spec.components[letter].size(); ++j) {
      sigma.push_back(static_cast<int>(j));
      self(self, b.child(spec, letter, static_cast<int>(j)), depth + 1);
      sigma.pop_back();
    }
  };
  rec(rec, CylinderBuilder::root(spec.dimension), 0);
  return out;
}

inline Antichain enumerate_level(const RifsSpec& spec, const Word& omega, std::size_t n) {
  return enumerate_level(spec, omega, n, default_anchor(spec));
}

/// Counters of Gamma_{omega,n}.
struct GammaStats {
  std::size_t phi = 0;  // card Gamma_{omega,n}
  std::size_t l1 = 0;   // min |sigma|
  std::size_t l2 = 0;   // max |sigma|
  double threshold = 0.0;  // p c^r / n
  double log_threshold = 0.0;
};

namespace detail {

constexpr double kTieTol = 1e-12;

/// a >= b in log space, ties within kTieTol counted as ">=".
inline bool log_ge(double a, double b) { return a >= b - kTieTol; }

inline double gamma_log_threshold(const RifsSpec& spec, double n, double r) {
  const Extrema e = spec.extrema();
  return std::log(e.p_min) + r * std::log(e.c_min) - std::log(n);
}

/// log(p_{i,j} c_{i,j}^r) tabulated per component.
inline std::vector<std::vector<double>> log_weight_table(const RifsSpec& spec, double r) {
  std::vector<std::vector<double>> t(spec.components.size());
  for (std::size_t i = 0; i < spec.components.size(); ++i)
    for (std::size_t j = 0; j < spec.components[i].size(); ++j) t[i].push_back(spec.log_weight(i, j, r));
  return t;
}

}  // namespace detail

/// Gamma_{omega,n} = { sigma : p_{sigma-} c_{sigma-}^r >= p c^r / n > p_sigma c_sigma^r }.
///
/// Depth-first: descend while the node weight is >= the threshold; the first
/// strings to fall below it are the members. `n` is real-valued so very large
/// indices can be reached without iterating.
inline std::pair<Antichain, GammaStats> build_gamma(const RifsSpec& spec, const Word& omega, double n, double r,
                                                    const Vector& anchor) {
  if (!(n >= 1)) throw DegenerateInput("Gamma_{omega,n} needs n >= 1");
  if (!(r > 0)) throw DegenerateInput("r must be positive");
  GammaStats st;
  st.log_threshold = detail::gamma_log_threshold(spec, n, r);
  st.threshold = std::exp(st.log_threshold);
  st.l1 = static_cast<std::size_t>(-1);
  Antichain out;
  out.source = Antichain::Source::Gamma;
  out.parameter = static_cast<std::uint64_t>(n);
  Sigma sigma;
  auto rec = [&](auto&& self, const CylinderBuilder& b, std::size_t depth) -> void {
    const Letter letter = omega.at(depth);
    for (std::size_t j = 0; j < spec.components[letter].size(); ++j) {
      const CylinderBuilder child = b.child(spec, letter, static_cast<int>(j));
      sigma.push_back(static_cast<int>(j));
      if (detail::log_ge(child.log_prob + r * child.log_ratio, st.log_threshold)) {
        self(self, child, depth + 1);
      } else {
        out.members.push_back({sigma, child.geometry(spec, anchor)});
        st.l1 = std::min(st.l1, depth + 1);
        st.l2 = std::max(st.l2, depth + 1);
      }
      sigma.pop_back();
    }
  };
  rec(rec, CylinderBuilder::root(spec.dimension), 0);
  st.phi = out.members.size();
  return {std::move(out), st};
}

inline std::pair<Antichain, GammaStats> build_gamma(const RifsSpec& spec, const Word& omega, double n, double r) {
  return build_gamma(spec, omega, n, r, default_anchor(spec));
}

/// Same counters as build_gamma without materializing the members.
inline GammaStats gamma_stats(const RifsSpec& spec, const Word& omega, double n, double r) {
  GammaStats st;
  st.log_threshold = detail::gamma_log_threshold(spec, n, r);
  st.threshold = std::exp(st.log_threshold);
  st.l1 = static_cast<std::size_t>(-1);
  const auto table = detail::log_weight_table(spec, r);
  std::vector<Letter> letters;
  auto rec = [&](auto&& self, double lw, std::size_t depth) -> void {
    if (letters.size() <= depth) letters.push_back(omega.at(depth));
    const auto& row = table[letters[depth]];
    for (double w : row) {
      if (detail::log_ge(lw + w, st.log_threshold)) {
        self(self, lw + w, depth + 1);
      } else {
        ++st.phi;
        st.l1 = std::min(st.l1, depth + 1);
        st.l2 = std::max(st.l2, depth + 1);
      }
    }
  };
  rec(rec, 0.0, 0);
  return st;
}

/// Finite maximal antichain check: pairwise incomparable, and every string of the
/// symbolic tree is comparable with some member.
inline bool validate_fma(const RifsSpec& spec, const Word& omega, const std::vector<Sigma>& sigmas) {
  if (sigmas.empty()) return false;
  std::vector<Sigma> sorted = sigmas;
  for (const auto& s : sorted) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      Letter letter;
      try {
        letter = omega.at(j);
      } catch (const WordTooShort&) {
        return false;
      }
      if (s[j] < 0 || static_cast<std::size_t>(s[j]) >= spec.components[letter].size()) return false;
    }
  }
  std::sort(sorted.begin(), sorted.end());
  // In lexicographic order every extension of a string follows it immediately.
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    if (is_prefix(sorted[k], sorted[k + 1])) return false;
  }
  // Coverage: a node is covered iff it is a member or all its children are covered.
  auto covered = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t depth) -> bool {
    if (lo == hi) return false;
    if (sorted[lo].size() == depth) return hi - lo == 1;
    const Letter letter = omega.at(depth);
    std::size_t pos = lo;
    for (std::size_t j = 0; j < spec.components[letter].size(); ++j) {
      std::size_t end = pos;
      while (end < hi && sorted[end][depth] == static_cast<int>(j)) ++end;
      if (!self(self, pos, end, depth + 1)) return false;
      pos = end;
    }
    return pos == hi;
  };
  return covered(covered, 0, sorted.size(), 0);
}

inline bool validate_fma(const RifsSpec& spec, const Word& omega, const Antichain& a) {
  std::vector<Sigma> sigmas;
  sigmas.reserve(a.size());
  for (const auto& m : a.members) sigmas.push_back(m.sigma);
  return validate_fma(spec, omega, sigmas);
}

/// CSV rows sigma;depth;log_p;log_c;box_lo;box_hi (sigma one-based, dotted).
inline void write_antichain_csv(std::ostream& os, const Antichain& a) {
  os << "sigma;depth;log_p;log_c;box_lo;box_hi\n";
  for (const auto& m : a.members) {
    os << format_sigma(m.sigma) << ';' << m.sigma.size() << ';' << num(m.geom.log_prob) << ';'
       << num(m.geom.log_ratio) << ';' << num(m.geom.box.lo) << ';' << num(m.geom.box.hi) << '\n';
  }
}

}  // namespace fquant
