#pragma once

#include "fquant/error.hpp"
#include "fquant/geometry.hpp"
#include "fquant/rifs.hpp"
#include "fquant/word.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fquant {

/// sigma = (sigma_1, ..., sigma_n), sigma_j a zero-based map index of component omega_j.
using Sigma = std::vector<int>;

/// Geometry and mass of the cylinder E_sigma = S_sigma(X).
struct CylinderGeom {
  double ratio = 1.0;  // c_sigma
  double prob = 1.0;   // p_sigma
  double log_ratio = 0.0;
  double log_prob = 0.0;
  Box box;
  Vector anchor;  // S_sigma(x0)

  /// log(p_sigma c_sigma^r)
  double log_weight(double r) const { return log_prob + r * log_ratio; }
};

/// Running state for building S_sigma one letter at a time.
struct CylinderBuilder {
  Affine map;
  double log_ratio = 0.0;
  double log_prob = 0.0;

  static CylinderBuilder root(int d) { return {Affine::identity(d), 0.0, 0.0}; }

  CylinderBuilder child(const RifsSpec& spec, Letter letter, int symbol) const {
    const Similarity& s = spec.components[letter].maps[symbol];
    return {map.then_inner(s.affine()), log_ratio + std::log(s.ratio),
            log_prob + std::log(spec.components[letter].probs[symbol])};
  }

  CylinderGeom geometry(const RifsSpec& spec, const Vector& anchor) const {
    return {std::exp(log_ratio), std::exp(log_prob), log_ratio, log_prob, map.image(spec.ambient), map(anchor)};
  }
};

inline Vector default_anchor(const RifsSpec& spec) { return spec.ambient.center(); }

/// S_sigma = S_{omega_1, sigma_1} o ... o S_{omega_n, sigma_n} with its products.
inline CylinderGeom compose(const RifsSpec& spec, const Word& omega, const Sigma& sigma, const Vector& anchor) {
  auto b = CylinderBuilder::root(spec.dimension);
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const Letter letter = omega.at(j);
    if (letter < 0 || static_cast<std::size_t>(letter) >= spec.components.size())
      throw InvalidSymbol("word letter " + std::to_string(letter + 1) + " outside the alphabet");
    const int sym = sigma[j];
    if (sym < 0 || static_cast<std::size_t>(sym) >= spec.components[letter].size())
      throw InvalidSymbol("symbol " + std::to_string(sym + 1) + " at position " + std::to_string(j + 1) +
                          " is not a map of component " + std::to_string(letter + 1));
    b = b.child(spec, letter, sym);
  }
  return b.geometry(spec, anchor);
}

inline CylinderGeom compose(const RifsSpec& spec, const Word& omega, const Sigma& sigma) {
  return compose(spec, omega, sigma, default_anchor(spec));
}

/// sigma is a predecessor (prefix) of tau.
inline bool is_prefix(const Sigma& sigma, const Sigma& tau) {
  return sigma.size() <= tau.size() && std::equal(sigma.begin(), sigma.end(), tau.begin());
}

/// One-based dotted rendering "1.2.1"; empty sigma renders as "".
inline std::string format_sigma(const Sigma& sigma) {
  std::string s;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (j) s += '.';
    s += std::to_string(sigma[j] + 1);
  }
  return s;
}

inline Sigma parse_sigma(const std::string& text) {
  Sigma out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t dot = text.find('.', pos);
    const std::string tok = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    out.push_back(std::stoi(tok) - 1);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return out;
}

/// Number of level-n cylinders, prod_{j<=n} card(I_{omega_j}) (as a double, may be huge).
inline double level_count(const RifsSpec& spec, const Word& omega, std::size_t n) {
  double count = 1.0;
  for (std::size_t j = 0; j < n; ++j) count *= static_cast<double>(spec.components[omega.at(j)].size());
  return count;
}

}  // namespace fquant
