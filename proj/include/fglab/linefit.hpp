#pragma once

#include <cmath>
#include <vector>

namespace fglab {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;  // all-zero / single-point data, no meaningful fit
  int points = 0;
};

/// Least-squares slope of log(y) against log(x). Non-positive y values mark the
/// fit degenerate (they arise from identically-zero error curves).
inline SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                              double floor = 1e-300) {
  SlopeFit f;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0)) continue;
    if (!(y[i] > floor)) {
      f.degenerate = true;
      continue;
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  f.points = static_cast<int>(lx.size());
  if (f.points < 2) {
    f.degenerate = true;
    return f;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < f.points; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double n = f.points;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) {
    f.degenerate = true;
    return f;
  }
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace fglab
