#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "capflow/profile.hpp"

namespace capflow {

/// Principal curvatures of a rotational hypersurface in diagonal form: the
/// profile direction and the rotational direction (multiplicity n - 1).
struct CurvatureData {
  std::vector<double> theta;  ///< tangent angle of the profile curve
  std::vector<double> kappa_profile;
  std::vector<double> kappa_rot;
  std::vector<double> H;
  std::vector<double> normA_sq;
  std::vector<double> traceless_sq;

  double min_principal() const {
    double m = kappa_profile.front();
    for (std::size_t i = 0; i < H.size(); ++i)
      m = std::min({m, kappa_profile[i], kappa_rot[i]});
    return m;
  }
  double min_H() const { return *std::min_element(H.begin(), H.end()); }
  double max_H() const { return *std::max_element(H.begin(), H.end()); }
};

/// Unit normal (r, z components) for tangent angle theta and orientation sign.
inline Node unit_normal(double theta, int orientation) {
  return {orientation * std::sin(theta), -orientation * std::cos(theta)};
}

namespace detail {

/// Unit tangent and principal curvatures at one node.
struct Frame {
  double tr = 1.0, tz = 0.0;
  double kp = 0.0, kr = 0.0, H = 0.0;
};

/// Rotates the unit vector (x, z) by the angle whose sine is s (|s| <= 1).
inline void rotate_by_sine(double& x, double& z, double s) {
  s = std::clamp(s, -1.0, 1.0);
  const double c = std::sqrt(1.0 - s * s);
  const double nx = c * x - s * z;
  z = s * x + c * z;
  x = nx;
}

/// Frames from the local circles: at interior nodes the circle through the
/// neighbours, on the axis the circle through the mirrored neighbour. At the
/// contact the tangent comes from the circle through the last three nodes
/// (so it measures the perpendicularity defect). That circle is centred on
/// the previous node, so the contact curvature is extrapolated linearly in
/// arc length from the two previous nodes.
inline void compute_frames(std::span<const Node> nodes, int orientation, double dim,
                           std::vector<Frame>& out) {
  const std::size_t n = nodes.size();
  out.resize(n);
  auto finish = [&](Frame& f, double kappa, double r, bool axis) {
    f.kp = orientation * kappa;
    f.kr = axis ? f.kp : orientation * f.tz / r;
    f.H = f.kp + (dim - 1.0) * f.kr;
  };
  {
    const double dr = nodes[1].r, dz = nodes[1].z - nodes[0].z;
    Frame& f = out[0];
    f.tr = 1.0;
    f.tz = 0.0;
    finish(f, 2.0 * dz / (dr * dr + dz * dz), 0.0, true);
  }
  double last_kappa = 0.0, prev_kappa = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ax = nodes[i].r - nodes[i - 1].r, az = nodes[i].z - nodes[i - 1].z;
    const double bx = nodes[i + 1].r - nodes[i].r, bz = nodes[i + 1].z - nodes[i].z;
    const double cx = nodes[i + 1].r - nodes[i - 1].r, cz = nodes[i + 1].z - nodes[i - 1].z;
    const double la = std::hypot(ax, az), lb = std::hypot(bx, bz), lc = std::hypot(cx, cz);
    const double kappa = 2.0 * (ax * bz - az * bx) / (la * lb * lc);
    Frame& f = out[i];
    f.tr = bx / lb;
    f.tz = bz / lb;
    rotate_by_sine(f.tr, f.tz, -0.5 * kappa * lb);
    finish(f, kappa, nodes[i].r, false);
    prev_kappa = last_kappa;
    last_kappa = kappa;
  }
  {
    const double cx = nodes[n - 1].r - nodes[n - 2].r, cz = nodes[n - 1].z - nodes[n - 2].z;
    const double lc = std::hypot(cx, cz);
    Frame& f = out[n - 1];
    f.tr = cx / lc;
    f.tz = cz / lc;
    rotate_by_sine(f.tr, f.tz, 0.5 * last_kappa * lc);
    double kappa = last_kappa;
    if (n >= 4) {
      const double lp = std::hypot(nodes[n - 2].r - nodes[n - 3].r, nodes[n - 2].z - nodes[n - 3].z);
      kappa += (last_kappa - prev_kappa) * lc / lp;
    }
    finish(f, kappa, nodes[n - 1].r, false);
  }
}

}  // namespace detail

inline CurvatureData curvatures(const AxisymmetricProfile& profile) {
  std::vector<detail::Frame> frames;
  detail::compute_frames(profile.nodes(), profile.orientation(), profile.dims().n, frames);
  const double dim = profile.dims().n;
  const std::size_t n = frames.size();

  CurvatureData c;
  c.theta.resize(n);
  c.kappa_profile.resize(n);
  c.kappa_rot.resize(n);
  c.H.resize(n);
  c.normA_sq.resize(n);
  c.traceless_sq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = frames[i];
    c.theta[i] = std::atan2(f.tz, f.tr);
    c.kappa_profile[i] = f.kp;
    c.kappa_rot[i] = f.kr;
    c.H[i] = f.H;
    c.normA_sq[i] = f.kp * f.kp + (dim - 1.0) * f.kr * f.kr;
    c.traceless_sq[i] = (dim - 1.0) / dim * (f.kp - f.kr) * (f.kp - f.kr);
  }
  return c;
}

}  // namespace capflow
