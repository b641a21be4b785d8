#pragma once

#include <cstdio>
#include <string>

#include <Eigen/Dense>

namespace dilatation {

/// Shortest round-trip representation used in every report and CSV.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_vector(const Eigen::VectorXd& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ";";
    out += format_double(v[i]);
  }
  return out + ")";
}

}  // namespace dilatation
