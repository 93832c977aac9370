#pragma once

#include <numbers>

#include "capflow/errors.hpp"

namespace capflow {

/// Volume of the unit n-ball from the recursion w_n = w_{n-2} * 2pi / n.
inline double unit_ball_volume(int n) {
  if (n < 0) throw ValidationError("unit_ball_volume: n must be >= 0");
  double w = (n % 2 == 0) ? 1.0 : 2.0;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) w *= 2.0 * std::numbers::pi / k;
  return w;
}

struct DimensionConstants {
  int n = 2;
  double omega_n = std::numbers::pi;
  double sphere_measure = 2.0 * std::numbers::pi;  ///< |S^{n-1}| = n * omega_n

  static DimensionConstants of(int n) {
    if (n < 2) throw ValidationError("dimension n must satisfy n >= 2");
    const double w = unit_ball_volume(n);
    return {n, w, n * w};
  }

  /// The exponent (2-n)/n that normalizes the Willmore term.
  double scaling_exponent() const { return (2.0 - n) / n; }

  bool operator==(const DimensionConstants&) const = default;
};

}  // namespace capflow
