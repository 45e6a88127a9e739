#pragma once

#include <cstdio>
#include <string>

#include <Eigen/Dense>

namespace fquant {

/// Shortest round-trippable decimal form of a double ("%.17g").
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Coordinates joined by commas.
inline std::string num(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += num(v[i]);
  }
  return s;
}

}  // namespace fquant
