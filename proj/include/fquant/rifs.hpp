#pragma once

#include "fquant/error.hpp"
#include "fquant/geometry.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace fquant {

/// One deterministic IFS of the random system: maps with their probabilities.
struct Ifs {
  std::vector<Similarity> maps;
  std::vector<double> probs;

  std::size_t size() const { return maps.size(); }
};

/// Extremal ratios and probabilities over every map of every component.
struct Extrema {
  double p_min, p_max;
  double c_min, c_max;
  std::size_t card_min, card_max;
};

/// The random iterated function system: N component IFSs, chosen i.i.d. by zeta.
///
/// Coordinates are normalized so the ambient box has unit diameter. `scale` and
/// `origin` record the transform x_internal = (x_input - origin) / scale.
struct RifsSpec {
  int dimension = 1;
  Box ambient;
  std::vector<Ifs> components;
  std::vector<double> zeta;
  double r_default = 1.0;
  double scale = 1.0;
  Vector origin;

  std::size_t alphabet_size() const { return components.size(); }

  Extrema extrema() const {
    Extrema e{1.0, 0.0, 1.0, 0.0, static_cast<std::size_t>(-1), 0};
    for (const auto& ifs : components) {
      e.card_min = std::min(e.card_min, ifs.size());
      e.card_max = std::max(e.card_max, ifs.size());
      for (std::size_t j = 0; j < ifs.size(); ++j) {
        e.p_min = std::min(e.p_min, ifs.probs[j]);
        e.p_max = std::max(e.p_max, ifs.probs[j]);
        e.c_min = std::min(e.c_min, ifs.maps[j].ratio);
        e.c_max = std::max(e.c_max, ifs.maps[j].ratio);
      }
    }
    return e;
  }

  /// log(p_{i,j} c_{i,j}^r) for component i, map j.
  double log_weight(std::size_t i, std::size_t j, double r) const {
    return std::log(components[i].probs[j]) + r * std::log(components[i].maps[j].ratio);
  }
};

namespace detail {

inline std::string component_name(std::size_t i) {
  return "component " + std::to_string(i + 1);
}

inline std::string map_name(std::size_t i, std::size_t j) {
  return component_name(i) + " map " + std::to_string(j + 1);
}

}  // namespace detail

/// Checks every invariant of the data model; throws SpecError naming the offender
/// (with a JSON pointer to the field in SpecError::path()).
inline void validate(const RifsSpec& spec) {
  constexpr double tol = 1e-12;
  const int d = spec.dimension;
  auto fail = [](const std::string& what, const std::string& path) { throw SpecError(what, 0, path); };
  auto comp = [](std::size_t i) { return "/components/" + std::to_string(i); };
  if (d < 1) fail("dimension must be a positive integer", "/dimension");
  if (spec.ambient.lo.size() != d || spec.ambient.hi.size() != d)
    fail("ambient box must have " + std::to_string(d) + " coordinates", "/ambient");
  for (int k = 0; k < d; ++k) {
    if (!(spec.ambient.lo[k] < spec.ambient.hi[k]))
      fail("ambient box is empty along axis " + std::to_string(k + 1), "/ambient");
  }
  if (spec.components.empty()) fail("at least one component IFS is required", "/components");
  if (spec.zeta.size() != spec.components.size())
    fail("zeta has " + std::to_string(spec.zeta.size()) + " entries for " + std::to_string(spec.components.size()) +
             " components",
         "/zeta");
  if (!(spec.r_default > 0)) fail("r must be positive", "/r");

  double zsum = 0.0;
  for (std::size_t i = 0; i < spec.zeta.size(); ++i) {
    if (!(spec.zeta[i] > 0))
      fail("zeta entry for " + detail::component_name(i) + " must be positive", "/zeta/" + std::to_string(i));
    zsum += spec.zeta[i];
  }
  if (std::abs(zsum - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "zeta sums to " << zsum << " (expected 1)";
    fail(os.str(), "/zeta");
  }

  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const Ifs& ifs = spec.components[i];
    if (ifs.maps.size() < 2) fail(detail::component_name(i) + " needs more than one map", comp(i) + "/maps");
    if (ifs.probs.size() != ifs.maps.size())
      fail(detail::component_name(i) + " has " + std::to_string(ifs.probs.size()) + " probabilities for " +
               std::to_string(ifs.maps.size()) + " maps",
           comp(i) + "/probs");
    double psum = 0.0;
    for (std::size_t j = 0; j < ifs.size(); ++j) {
      if (!(ifs.probs[j] > 0))
        fail(detail::map_name(i, j) + " has a non-positive probability", comp(i) + "/probs/" + std::to_string(j));
      psum += ifs.probs[j];
    }
    if (std::abs(psum - 1.0) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << detail::component_name(i) << " probabilities sum to " << psum << " (expected 1)";
      fail(os.str(), comp(i) + "/probs");
    }
    for (std::size_t j = 0; j < ifs.size(); ++j) {
      const Similarity& s = ifs.maps[j];
      const std::string at = comp(i) + "/maps/" + std::to_string(j);
      if (!(s.ratio > 0 && s.ratio < 1)) fail(detail::map_name(i, j) + " ratio must lie in (0,1)", at + "/ratio");
      if (s.translation.size() != d) fail(detail::map_name(i, j) + " translation has wrong dimension", at + "/translation");
      if (s.orthogonal.rows() != d || s.orthogonal.cols() != d)
        fail(detail::map_name(i, j) + " orthogonal part has wrong shape", at + "/orthogonal");
      const Matrix gram = s.orthogonal.transpose() * s.orthogonal;
      if ((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        fail(detail::map_name(i, j) + " orthogonal part is not orthogonal", at + "/orthogonal");
      if (!spec.ambient.contains(s.affine().image(spec.ambient), tol))
        fail(detail::map_name(i, j) + " does not map the ambient box into itself", at);
    }
  }
}

/// Rescales coordinates so the ambient box has unit diameter; records the transform.
inline RifsSpec normalized(RifsSpec spec) {
  const double diam = spec.ambient.diameter();
  const Vector lo = spec.ambient.lo;
  if (std::abs(diam - 1.0) < 1e-15) {
    if (spec.origin.size() == 0) spec.origin = Vector::Zero(spec.dimension);
    return spec;
  }
  // S(x) = cQx + t in input coordinates; in u = (x - lo)/diam it becomes
  // u -> cQu + (cQ lo + t - lo)/diam.
  for (auto& ifs : spec.components) {
    for (auto& s : ifs.maps) {
      s.translation = (s.ratio * (s.orthogonal * lo) + s.translation - lo) / diam;
    }
  }
  spec.ambient.hi = (spec.ambient.hi - lo) / diam;
  spec.ambient.lo = Vector::Zero(spec.dimension);
  const Vector prev_origin = spec.origin.size() ? spec.origin : Vector::Zero(spec.dimension);
  spec.origin = prev_origin + spec.scale * lo;
  spec.scale *= diam;
  return spec;
}

/// Convenience builder for 1-D systems of pure scalings: maps x -> c x + t.
inline RifsSpec make_interval_spec(const std::vector<std::vector<std::pair<double, double>>>& maps,
                                   const std::vector<std::vector<double>>& probs,
                                   std::vector<double> zeta, double r = 1.0) {
  RifsSpec spec;
  spec.dimension = 1;
  spec.ambient = {Vector::Zero(1), Vector::Ones(1)};
  spec.origin = Vector::Zero(1);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    Ifs ifs;
    for (const auto& [c, t] : maps[i]) ifs.maps.push_back(Similarity::scaling(c, Vector::Constant(1, t)));
    ifs.probs = probs[i];
    spec.components.push_back(std::move(ifs));
  }
  spec.zeta = std::move(zeta);
  spec.r_default = r;
  return spec;
}

}  // namespace fquant
