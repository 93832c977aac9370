#pragma once

// Local circle geometry on a polyline: every triple of consecutive nodes
// defines a circle (or a line) that the discrete operators treat as the
// local shape of the curve. Circles and lines are therefore represented
// exactly.

#include <algorithm>
#include <array>
#include <cmath>

namespace capflow {

struct Node {
  double r = 0.0;
  double z = 0.0;
  bool operator==(const Node&) const = default;
};

namespace detail {

inline double cross(double ax, double az, double bx, double bz) { return ax * bz - az * bx; }

/// Signed curvature of the circle through p0, p1, p2; positive for a left turn.
inline double menger_curvature(Node p0, Node p1, Node p2) {
  const double ax = p1.r - p0.r, az = p1.z - p0.z;
  const double bx = p2.r - p1.r, bz = p2.z - p1.z;
  const double cx = p2.r - p0.r, cz = p2.z - p0.z;
  const double den = std::hypot(ax, az) * std::hypot(bx, bz) * std::hypot(cx, cz);
  return 2.0 * cross(ax, az, bx, bz) / den;
}

/// Image of p under inversion in the unit sphere.
inline Node invert(Node p) {
  const double q = p.r * p.r + p.z * p.z;
  return {p.r / q, p.z / q};
}

/// Half of the central angle subtended by a chord of length c on a circle of curvature k.
inline double half_chord_angle(double kappa, double chord) {
  return std::asin(std::clamp(0.5 * kappa * chord, -1.0, 1.0));
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// A circular arc from `start` with curvature `kappa` whose chord ends at `end`.
struct Arc {
  Node start;
  double kappa = 0.0;
  double theta_start = 0.0;  ///< tangent angle at the start point
  double length = 0.0;

  static Arc through(Node a, Node b, double kappa) {
    const double cx = b.r - a.r, cz = b.z - a.z;
    const double chord = std::hypot(cx, cz);
    const double psi = half_chord_angle(kappa, chord);
    Arc arc;
    arc.start = a;
    arc.kappa = kappa;
    arc.theta_start = std::atan2(cz, cx) - psi;
    arc.length = (psi == 0.0) ? chord : chord * psi / std::sin(psi);
    return arc;
  }

  Node at(double sigma) const {
    const double half = 0.5 * kappa * sigma;
    const double len = sigma * sinc(half);
    const double ang = theta_start + half;
    return {start.r + len * std::cos(ang), start.z + len * std::sin(ang)};
  }

  double theta_at(double sigma) const { return theta_start + kappa * sigma; }
};

/// Five-point Gauss-Legendre rule on [0, 1].
inline constexpr std::array<double, 5> gl5_nodes = {
    0.046910077030668003601, 0.23076534494715845448, 0.5,
    0.76923465505284154552, 0.95308992296933199640};
inline constexpr std::array<double, 5> gl5_weights = {
    0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
    0.23931433524968323402, 0.11846344252809454376};

}  // namespace detail
}  // namespace capflow
