#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace dilatation {

/// Defect-versus-scale record produced by every sweep in the library.
struct ConvergenceReport {
  std::string label;            // what was swept, e.g. "A4" or "inflin"
  std::vector<double> nu;       // valuations of the grid, strictly decreasing
  std::vector<double> defect;   // one nonnegative defect per grid point
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  bool verdict = false;
  double tolerance = 0.0;
  bool degenerate = false;

  std::string model;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> notes;

  double final_defect() const { return defect.empty() ? 0.0 : defect.back(); }
  double initial_defect() const { return defect.empty() ? 0.0 : defect.front(); }
  double max_defect() const {
    double m = 0.0;
    for (double d : defect) m = std::max(m, d);
    return m;
  }
};

/// Least-squares slope of log(defect) against log(nu) over strictly positive
/// defects. NaN when fewer than two usable points remain.
inline double fit_log_log_slope(const std::vector<double>& nu, const std::vector<double>& defect,
                                double floor = 0.0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < nu.size() && i < defect.size(); ++i) {
    if (!(defect[i] > floor) || !(nu[i] > 0.0)) continue;
    const double x = std::log(nu[i]);
    const double y = std::log(defect[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = static_cast<double>(n) * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(n) * sxy - sx * sy) / den;
}

/// True when each defect is at most `jitter` times its predecessor. Values at
/// or below `noise` are treated as zero.
inline bool non_increasing_within(const std::vector<double>& defect, double jitter, double noise) {
  for (std::size_t i = 1; i < defect.size(); ++i) {
    const double prev = std::max(defect[i - 1], noise);
    if (defect[i] > noise && defect[i] > jitter * prev) return false;
  }
  return true;
}

}  // namespace dilatation
