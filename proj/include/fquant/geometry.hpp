#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fquant {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  Vector center() const { return 0.5 * (lo + hi); }

  bool contains(const Box& other, double tol = 1e-12) const {
    for (int i = 0; i < dimension(); ++i) {
      if (other.lo[i] < lo[i] - tol || other.hi[i] > hi[i] + tol) return false;
    }
    return true;
  }

  bool contains(const Vector& x, double tol = 1e-12) const {
    for (int i = 0; i < dimension(); ++i) {
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    }
    return true;
  }
};

/// Euclidean distance between two axis-aligned boxes (0 when they intersect).
inline double box_distance(const Box& a, const Box& b) {
  double sq = 0.0;
  for (int i = 0; i < a.dimension(); ++i) {
    const double gap = std::max({0.0, b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]});
    sq += gap * gap;
  }
  return std::sqrt(sq);
}

/// x -> linear * x + offset. Composites of similarities keep linear = c * Q.
struct Affine {
  Matrix linear;
  Vector offset;

  static Affine identity(int d) { return {Matrix::Identity(d, d), Vector::Zero(d)}; }

  Vector operator()(const Vector& x) const { return linear * x + offset; }

  /// (*this) o inner
  Affine then_inner(const Affine& inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
  }

  /// Circumscribed box of the image of `box` (exact for axis-aligned linear parts).
  Box image(const Box& box) const {
    const int d = box.dimension();
    Box out{offset, offset};
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        const double a = linear(i, k);
        if (a >= 0) {
          out.lo[i] += a * box.lo[k];
          out.hi[i] += a * box.hi[k];
        } else {
          out.lo[i] += a * box.hi[k];
          out.hi[i] += a * box.lo[k];
        }
      }
    }
    return out;
  }
};

/// Contracting similarity x -> ratio * Q x + translation.
struct Similarity {
  double ratio = 0.5;
  Vector translation;
  Matrix orthogonal;  // identity when the map has no rotation/reflection part

  int dimension() const { return static_cast<int>(translation.size()); }

  Vector operator()(const Vector& x) const { return ratio * (orthogonal * x) + translation; }

  Affine affine() const { return {ratio * orthogonal, translation}; }

  static Similarity scaling(double ratio, Vector translation) {
    const auto d = translation.size();
    return {ratio, std::move(translation), Matrix::Identity(d, d)};
  }
};

}  // namespace fquant
