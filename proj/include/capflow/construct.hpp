#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "capflow/boundary.hpp"
#include "capflow/curvature.hpp"
#include "capflow/profile.hpp"

namespace capflow {

inline constexpr std::size_t min_nodes = 16;

inline void check_node_count(std::size_t num_nodes) {
  if (num_nodes < min_nodes) throw ValidationError("num_nodes must be >= 16");
}

/// Piece of the sphere of radius rho centred on the axis at distance
/// sqrt(1 + rho^2), cut off where it meets the unit sphere orthogonally.
/// Nodes are equally spaced in the angle at the cap centre.
inline AxisymmetricProfile make_cap(const DimensionConstants& dims, double rho,
                                    std::size_t num_nodes) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
  check_node_count(num_nodes);
  const double d = std::sqrt(1.0 + rho * rho);
  const double theta = std::asin(1.0 / d);
  const double bottom = 1.0 / (d + rho);  // d - rho without cancellation
  std::vector<Node> nodes(num_nodes);
  for (std::size_t i = 0; i + 1 < num_nodes; ++i) {
    const double phi = theta * static_cast<double>(i) / static_cast<double>(num_nodes - 1);
    const double half = std::sin(0.5 * phi);
    nodes[i] = {rho * std::sin(phi), bottom + 2.0 * rho * half * half};
  }
  nodes.back() = {rho / d, 1.0 / d};
  return AxisymmetricProfile(dims, std::move(nodes));
}

/// The equatorial disk z = 0.
inline AxisymmetricProfile make_flat_disk(const DimensionConstants& dims, std::size_t num_nodes) {
  check_node_count(num_nodes);
  std::vector<Node> nodes(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i)
    nodes[i] = {static_cast<double>(i) / static_cast<double>(num_nodes - 1), 0.0};
  return AxisymmetricProfile(dims, std::move(nodes));
}

namespace detail {

/// Profile curve with curvature 0 on [0, s_flat], a quintic blend on
/// [s_flat, s_flat + width] and curvature k beyond, started horizontally
/// at (0, 0). Positions are integrated exactly on the flat and circular
/// pieces and by composite Gauss-Legendre on the blend.
class BlendedCurve {
 public:
  BlendedCurve(double k, double s_flat, double width) : k_(k), s_flat_(s_flat), width_(width) {
    blend_end_ = integrate_blend(width_);
  }

  double theta(double s) const {
    if (s <= s_flat_) return 0.0;
    const double x = s - s_flat_;
    if (x <= width_) {
      const double u = x / width_;
      const double u4 = u * u * u * u;
      return k_ * width_ * (u4 * u * u - 3.0 * u4 * u + 2.5 * u4);
    }
    return k_ * (0.5 * width_ + (x - width_));
  }

  double kappa(double s) const {
    if (s <= s_flat_) return 0.0;
    const double x = s - s_flat_;
    if (x >= width_) return k_;
    const double u = x / width_;
    return k_ * u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
  }

  Node position(double s) const {
    if (s <= s_flat_) return {s, 0.0};
    const double x = s - s_flat_;
    if (x <= width_) {
      const Node b = integrate_blend(x);
      return {s_flat_ + b.r, b.z};
    }
    const double start = theta(s_flat_ + width_);
    const double len = x - width_;
    const double half = 0.5 * k_ * len;
    const double chord = len * sinc(half);
    return {s_flat_ + blend_end_.r + chord * std::cos(start + half),
            blend_end_.z + chord * std::sin(start + half)};
  }

 private:
  Node integrate_blend(double x) const {
    if (x <= 0.0) return {0.0, 0.0};
    constexpr int pieces = 32;
    const double h = x / pieces;
    Node acc{0.0, 0.0};
    for (int j = 0; j < pieces; ++j) {
      for (std::size_t q = 0; q < gl5_nodes.size(); ++q) {
        const double t = theta(s_flat_ + (j + gl5_nodes[q]) * h);
        acc.r += h * gl5_weights[q] * std::cos(t);
        acc.z += h * gl5_weights[q] * std::sin(t);
      }
    }
    return acc;
  }

  double k_;
  double s_flat_;
  double width_;
  Node blend_end_;
};

}  // namespace detail

/// Weakly convex variant of make_cap with the same contact circle. In
/// normalized arc length sigma in [0, 1] the profile curvature is 0 on
/// [0, flattening], blends (quintic) over a width min(2 flattening,
/// 1 - flattening) and is constant beyond; the constant is chosen so
/// the tangent turns exactly to the radial direction at the contact, and the
/// length so the curve spans the contact radius.
inline AxisymmetricProfile make_perturbed_cap(const DimensionConstants& dims, double rho,
                                              double flattening, std::size_t num_nodes) {
  if (!(flattening >= 0.0 && flattening < 1.0))
    throw ValidationError("flattening must lie in [0, 1)");
  if (flattening == 0.0) return make_cap(dims, rho, num_nodes);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
  check_node_count(num_nodes);

  const double d = std::sqrt(1.0 + rho * rho);
  const Node contact{rho / d, 1.0 / d};
  const double turn = std::asin(1.0 / d);
  const double width = std::min(2.0 * flattening, 1.0 - flattening);
  const double k = turn / (1.0 - flattening - 0.5 * width);
  const detail::BlendedCurve curve(k, flattening, width);
  const Node end = curve.position(1.0);
  const double scale = contact.r / end.r;
  const double z0 = contact.z - scale * end.z;

  std::vector<Node> nodes(num_nodes);
  for (std::size_t i = 0; i + 1 < num_nodes; ++i) {
    const Node p = curve.position(static_cast<double>(i) / static_cast<double>(num_nodes - 1));
    nodes[i] = {scale * p.r, z0 + scale * p.z};
  }
  nodes.back() = contact;

  auto profile = enforce_boundary(AxisymmetricProfile::unchecked(dims, std::move(nodes)));
  try {
    profile.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("perturbed cap is not a valid profile: ") + e.what());
  }
  if (curvatures(profile).min_principal() < -tol::num)
    throw ValidationError("blend loses convexity");
  return profile;
}

}  // namespace capflow
