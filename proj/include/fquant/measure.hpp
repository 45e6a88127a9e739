#pragma once

#include "fquant/antichain.hpp"
#include "fquant/cylinder.hpp"
#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/rifs.hpp"
#include "fquant/word.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace fquant {

/// Finitely supported probability measure: weighted atoms in R^d.
///
/// Coordinates are stored flat (atom-major). 1-D measures built by this module
/// are sorted by coordinate.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(int dimension) : dim_(dimension) {}

  int dimension() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  void add(std::span<const double> point, double weight, Sigma sigma = {}) {
    coords_.insert(coords_.end(), point.begin(), point.end());
    weights_.push_back(weight);
    sigmas_.push_back(std::move(sigma));
  }
  void add(const Vector& point, double weight, Sigma sigma = {}) {
    add(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())), weight, std::move(sigma));
  }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  double coord(std::size_t i, int k = 0) const { return coords_[i * dim_ + k]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Sigma& sigma(std::size_t i) const { return sigmas_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }

  double total() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  /// 1-D coordinates (requires dimension 1).
  std::vector<double> positions() const {
    if (dim_ != 1) throw Unsupported("positions() is defined for 1-D measures only");
    return coords_;
  }

  /// Sorts atoms lexicographically by coordinates and merges coincident ones
  /// (all coordinates within `tol`); merged atoms keep the first provenance.
  void canonicalize(double tol = 1e-12) {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      for (int k = 0; k < dim_; ++k) {
        if (coord(a, k) != coord(b, k)) return coord(a, k) < coord(b, k);
      }
      return a < b;
    });
    DiscreteMeasure out(dim_);
    out.coords_.reserve(coords_.size());
    for (std::size_t i : idx) {
      if (!out.empty()) {
        const std::size_t last = out.size() - 1;
        bool same = true;
        for (int k = 0; k < dim_ && same; ++k) same = std::abs(out.coord(last, k) - coord(i, k)) <= tol;
        if (same) {
          out.weights_[last] += weights_[i];
          continue;
        }
      }
      out.add(point(i), weights_[i], sigmas_[i]);
    }
    *this = std::move(out);
  }

  /// Every coordinate multiplied by lambda.
  DiscreteMeasure scaled(double lambda) const {
    DiscreteMeasure out = *this;
    for (double& c : out.coords_) c *= lambda;
    return out;
  }

 private:
  int dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> weights_;
  std::vector<Sigma> sigmas_;
};

/// 1-D measure from positions and weights (sorted and merged).
inline DiscreteMeasure make_measure_1d(const std::vector<double>& x, const std::vector<double>& w) {
  if (x.size() != w.size()) throw DegenerateInput("positions and weights differ in length");
  DiscreteMeasure m(1);
  for (std::size_t i = 0; i < x.size(); ++i) m.add(std::span<const double>(&x[i], 1), w[i]);
  m.canonicalize();
  return m;
}

/// Product measure a x b on R^{da + db}.
inline DiscreteMeasure product(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  DiscreteMeasure out(a.dimension() + b.dimension());
  std::vector<double> pt(a.dimension() + b.dimension());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::copy(a.point(i).begin(), a.point(i).end(), pt.begin());
      std::copy(b.point(j).begin(), b.point(j).end(), pt.begin() + a.dimension());
      out.add(pt, a.weight(i) * b.weight(j));
    }
  }
  return out;
}

/// mu_omega^(n) with nu = delta_anchor: atoms S_sigma(anchor) weighted p_sigma over Lambda_omega^(n).
inline DiscreteMeasure approximant(const RifsSpec& spec, const Word& omega, std::size_t depth, const Vector& anchor,
                                   double budget = default_budget()) {
  const double count = level_count(spec, omega, depth);
  if (count > budget) throw BudgetExceeded(count, budget);
  DiscreteMeasure m(spec.dimension);
  std::vector<Letter> letters = omega.prefix(depth);
  Sigma sigma;
  auto rec = [&](auto&& self, const CylinderBuilder& b, std::size_t level) -> void {
    if (level == depth) {
      m.add(b.map(anchor), std::exp(b.log_prob), sigma);
      return;
    }
    const Letter letter = letters[level];
    for (std::size_t j = 0; j < spec.components[letter].size(); ++j) {
      sigma.push_back(static_cast<int>(j));
      self(self, b.child(spec, letter, static_cast<int>(j)), level + 1);
      sigma.pop_back();
    }
  };
  rec(rec, CylinderBuilder::root(spec.dimension), 0);
  m.canonicalize();
  return m;
}

inline DiscreteMeasure approximant(const RifsSpec& spec, const Word& omega, std::size_t depth) {
  return approximant(spec, omega, depth, default_anchor(spec));
}

/// Atoms S_sigma(anchor) weighted p_sigma over a finite maximal antichain.
inline DiscreteMeasure approximant_on_antichain(const RifsSpec& spec, const Word& omega, const Antichain& gamma,
                                                const Vector& anchor) {
  if (!validate_fma(spec, omega, gamma)) throw NotAnFma("antichain is not a finite maximal antichain");
  DiscreteMeasure m(spec.dimension);
  for (const auto& c : gamma.members) {
    const CylinderGeom g = compose(spec, omega, c.sigma, anchor);
    m.add(g.anchor, g.prob, c.sigma);
  }
  m.canonicalize();
  return m;
}

inline DiscreteMeasure approximant_on_antichain(const RifsSpec& spec, const Word& omega, const Antichain& gamma) {
  return approximant_on_antichain(spec, omega, gamma, default_anchor(spec));
}

/// Refines every antichain member to level depth_L along the shifted word and
/// compares weights atom-by-atom with the direct level-L approximant. Returns
/// the largest absolute weight discrepancy.
inline double refine_consistency(const RifsSpec& spec, const Word& omega, const Antichain& gamma, std::size_t depth_L,
                                 double budget = default_budget()) {
  if (!validate_fma(spec, omega, gamma)) throw NotAnFma("antichain is not a finite maximal antichain");
  if (depth_L < gamma.max_depth()) throw DegenerateInput("refinement depth below the antichain depth");
  const double count = level_count(spec, omega, depth_L);
  if (count > budget) throw BudgetExceeded(count, budget);

  std::map<Sigma, double> direct;
  const Antichain level = enumerate_level(spec, omega, depth_L, default_anchor(spec), budget);
  for (const auto& c : level.members) direct[c.sigma] = c.geom.prob;

  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& c : gamma.members) {
    // mu restricted to E_sigma is p_sigma times the shifted measure pushed by S_sigma.
    const Word tail = omega.shifted(c.sigma.size());
    const Antichain sub = enumerate_level(spec, tail, depth_L - c.sigma.size(), default_anchor(spec), budget);
    for (const auto& t : sub.members) {
      Sigma full = c.sigma;
      full.insert(full.end(), t.sigma.begin(), t.sigma.end());
      const auto it = direct.find(full);
      if (it == direct.end()) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(c.geom.prob * t.geom.prob - it->second));
      ++matched;
    }
  }
  if (matched != direct.size()) return std::numeric_limits<double>::infinity();
  return worst;
}

/// Exact W_1 between 1-D measures: integral of |F_mu - F_nu|.
inline double w1_distance_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dimension() != 1 || nu.dimension() != 1) throw Unsupported("exact W1 is available in d = 1 only");
  std::vector<std::pair<double, double>> events;  // (x, signed mass)
  events.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) events.emplace_back(mu.coord(i), mu.weight(i));
  for (std::size_t i = 0; i < nu.size(); ++i) events.emplace_back(nu.coord(i), -nu.weight(i));
  std::sort(events.begin(), events.end());
  long double diff = 0, total = 0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    diff += events[k].second;
    total += std::abs(diff) * (events[k + 1].first - events[k].first);
  }
  return static_cast<double>(total);
}

/// Cauchy rate of the approximants: L(mu^(n), mu^(n+k)) <= A_nu c_max^n / (1 - c_max).
struct ConvergenceBound {
  double a_nu = 0.0;
  double c_max = 0.0;

  double at_depth(std::size_t n) const { return a_nu * std::pow(c_max, static_cast<double>(n)) / (1.0 - c_max); }
};

/// A_nu for nu = delta_anchor: max_{i,j} |anchor - S_{i,j}(anchor)|.
inline ConvergenceBound cauchy_bound(const RifsSpec& spec, const Vector& anchor) {
  ConvergenceBound b;
  b.c_max = spec.extrema().c_max;
  for (const auto& ifs : spec.components)
    for (const auto& s : ifs.maps) b.a_nu = std::max(b.a_nu, (anchor - s(anchor)).norm());
  return b;
}

/// Smallest depth with c_max^depth <= target (every cylinder diameter below target).
inline std::size_t depth_for_resolution(const RifsSpec& spec, double target = 1e-4) {
  const double c_max = spec.extrema().c_max;
  return static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(target) / std::log(c_max) - 1e-12)));
}

/// Depth rule for quantizing with up to n centers: c_max^depth <= 1e-2 n^{-1/kappa}.
inline std::size_t depth_for_quantization(const RifsSpec& spec, std::size_t n, double kappa) {
  return depth_for_resolution(spec, 1e-2 * std::pow(static_cast<double>(n), -1.0 / kappa));
}

/// CSV x1..xd;weight;sigma
inline void write_measure_csv(std::ostream& os, const DiscreteMeasure& m) {
  for (int k = 0; k < m.dimension(); ++k) os << 'x' << (k + 1) << ';';
  os << "weight;sigma\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int k = 0; k < m.dimension(); ++k) os << num(m.coord(i, k)) << ';';
    os << num(m.weight(i)) << ';' << format_sigma(m.sigma(i)) << '\n';
  }
}

inline DiscreteMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DegenerateInput("measure CSV is empty");
  int dim = 0;
  {
    std::istringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ';')) {
      if (!tok.empty() && tok[0] == 'x') ++dim;
    }
  }
  if (dim == 0) throw DegenerateInput("measure CSV header has no coordinate columns");
  DiscreteMeasure m(dim);
  std::vector<double> pt(dim);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    try {
      for (int k = 0; k < dim; ++k) {
        std::getline(ls, tok, ';');
        pt[k] = std::stod(tok);
      }
      std::getline(ls, tok, ';');
      const double w = std::stod(tok);
      Sigma sigma;
      if (std::getline(ls, tok, ';') && !tok.empty()) sigma = parse_sigma(tok);
      m.add(pt, w, std::move(sigma));
    } catch (const std::logic_error&) {
      throw DegenerateInput("measure CSV line " + std::to_string(lineno) + " is malformed");
    }
  }
  return m;
}

}  // namespace fquant
