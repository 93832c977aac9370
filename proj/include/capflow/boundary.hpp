#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "capflow/profile.hpp"

namespace capflow {

namespace detail {

/// sin(theta_end - phi) for the contact node placed at polar angle phi on the
/// sphere; theta_end is the tangent angle of the circle through the last
/// three nodes. Zero iff the profile meets the sphere perpendicularly.
inline double contact_defect(Node p2, Node p1, double phi) {
  const Node q{std::cos(phi), std::sin(phi)};
  const double k = menger_curvature(p2, p1, q);
  const double cx = q.r - p1.r, cz = q.z - p1.z;
  const double theta = std::atan2(cz, cx) + half_chord_angle(k, std::hypot(cx, cz));
  return std::sin(theta - phi);
}

}  // namespace detail

inline constexpr double max_contact_projection = 0.05;
inline constexpr int max_perp_iterations = 50;

namespace detail {

/// In-place version of enforce_boundary on a raw node sequence.
inline void enforce_boundary_nodes(std::vector<Node>& nodes) {
  const std::size_t n = nodes.size();
  Node& c = nodes.back();
  const double rad = std::hypot(c.r, c.z);
  if (!(std::abs(rad - 1.0) <= max_contact_projection))
    throw StepFailure("contact node is " + std::to_string(std::abs(rad - 1.0)) +
                      " away from the sphere");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Node& p = nodes[i];
    if (!(p.r * p.r + p.z * p.z < 1.0))
      throw StepFailure("node " + std::to_string(i) + " left the open unit ball");
  }

  const Node p2 = nodes[n - 3], p1 = nodes[n - 2];
  double phi = std::atan2(c.z, c.r);
  double g = contact_defect(p2, p1, phi);
  for (int it = 0; it < max_perp_iterations && std::abs(g) > 1e-15; ++it) {
    const double eps = 1e-7;
    const double dg =
        (contact_defect(p2, p1, phi + eps) - contact_defect(p2, p1, phi - eps)) / (2.0 * eps);
    if (!(std::abs(dg) > 0.0)) break;
    const double next = phi - g / dg;
    const double gn = contact_defect(p2, p1, next);
    if (!(std::abs(gn) < std::abs(g))) break;
    phi = next;
    g = gn;
  }
  if (!(std::abs(g) <= tol::perp))
    throw StepFailure("perpendicularity enforcement did not converge (defect " +
                      std::to_string(std::abs(g)) + ")");
  c = {std::cos(phi), std::sin(phi)};
  if (!(c.r > p1.r)) throw StepFailure("contact node overtook its neighbour");
}

}  // namespace detail

/// Restores the free boundary conditions: the contact node is projected
/// radially onto the sphere and then slid along it (Newton on its polar
/// angle) until the last segment meets the sphere at a right angle. All
/// other nodes must lie strictly inside the ball.
inline AxisymmetricProfile enforce_boundary(const AxisymmetricProfile& input) {
  std::vector<Node> nodes(input.nodes().begin(), input.nodes().end());
  detail::enforce_boundary_nodes(nodes);
  return AxisymmetricProfile::unchecked(input.dims(), std::move(nodes), input.orientation());
}

}  // namespace capflow
