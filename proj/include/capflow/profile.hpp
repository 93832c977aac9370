#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capflow/detail/arcs.hpp"
#include "capflow/dimension.hpp"
#include "capflow/errors.hpp"
#include "capflow/tolerances.hpp"

namespace capflow {

/// Profile curve of a rotationally symmetric disk-type hypersurface in the
/// closed unit ball, sampled from the axis point (r = 0) to the contact
/// point on the sphere. The height w = <X, e0> is the z coordinate.
///
/// `orientation` = +1 means the unit normal is (sin t, -cos t) for tangent
/// angle t, so caps bending towards +e0 have H > 0; -1 flips it.
class AxisymmetricProfile {
 public:
  AxisymmetricProfile(DimensionConstants dims, std::vector<Node> nodes, int orientation = 1)
      : dims_(dims), nodes_(std::move(nodes)), orientation_(orientation) {
    if (orientation_ != 1 && orientation_ != -1)
      throw ValidationError("orientation must be +1 or -1");
    compute_local_geometry();
    validate();
  }

  /// Builds a profile whose invariants are checked by the caller later.
  static AxisymmetricProfile unchecked(DimensionConstants dims, std::vector<Node> nodes,
                                       int orientation = 1) {
    AxisymmetricProfile p(dims, std::move(nodes), orientation, Unchecked{});
    return p;
  }

  const DimensionConstants& dims() const { return dims_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  int orientation() const { return orientation_; }
  const Node& axis_node() const { return nodes_.front(); }
  const Node& contact_node() const { return nodes_.back(); }

  /// Arc-length value of each node, starting at 0.
  std::span<const double> arc_length() const { return arc_length_; }
  /// Signed curvature of the circle through the triple centred at node i
  /// (axis: mirrored neighbour; contact: the last three nodes).
  std::span<const double> local_curvature() const { return menger_; }
  /// Arc lengths of the segments i -> i+1.
  std::span<const double> segment_lengths() const { return segment_length_; }

  double min_spacing() const;
  double max_spacing() const;

  /// Throws ValidationError / DegenerateGeometryError naming the first violated invariant.
  void validate() const;

 private:
  struct Unchecked {};
  AxisymmetricProfile(DimensionConstants dims, std::vector<Node> nodes, int orientation, Unchecked)
      : dims_(dims), nodes_(std::move(nodes)), orientation_(orientation) {
    compute_local_geometry();
  }

  void compute_local_geometry();

  DimensionConstants dims_;
  std::vector<Node> nodes_;
  int orientation_ = 1;
  std::vector<double> menger_;
  std::vector<double> segment_length_;
  std::vector<double> arc_length_;
};

namespace detail {

/// Arcs representing segment i -> i+1: the circles of the node triples that
/// contain both endpoints. One or two arcs per segment.
inline std::pair<Arc, Arc> segment_arcs(std::span<const Node> nodes, std::span<const double> menger,
                                        std::size_t i) {
  const std::size_t last = nodes.size() - 1;
  const Arc left = Arc::through(nodes[i], nodes[i + 1], menger[i]);
  const std::size_t right_owner = std::min(i + 1, last - 1);
  const Arc right = Arc::through(nodes[i], nodes[i + 1], menger[right_owner]);
  return {left, right};
}

}  // namespace detail

inline void AxisymmetricProfile::compute_local_geometry() {
  const std::size_t n = nodes_.size();
  if (n < 3) throw ValidationError("profile needs at least 3 nodes");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::hypot(nodes_[i + 1].r - nodes_[i].r, nodes_[i + 1].z - nodes_[i].z) <
        tol::coincident)
      throw DegenerateGeometryError("consecutive nodes " + std::to_string(i) + " and " +
                                    std::to_string(i + 1) + " coincide");
  }
  menger_.assign(n, 0.0);
  const Node mirror{-nodes_[1].r, nodes_[1].z};
  menger_[0] = detail::menger_curvature(mirror, nodes_[0], nodes_[1]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    menger_[i] = detail::menger_curvature(nodes_[i - 1], nodes_[i], nodes_[i + 1]);
  menger_[n - 1] = menger_[n - 2];

  segment_length_.assign(n - 1, 0.0);
  arc_length_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto [left, right] = detail::segment_arcs(nodes_, menger_, i);
    segment_length_[i] = 0.5 * (left.length + right.length);
    arc_length_[i + 1] = arc_length_[i] + segment_length_[i];
  }
}

inline double AxisymmetricProfile::min_spacing() const {
  double m = segment_length_.front();
  for (double l : segment_length_) m = std::min(m, l);
  return m;
}

inline double AxisymmetricProfile::max_spacing() const {
  double m = 0.0;
  for (double l : segment_length_) m = std::max(m, l);
  return m;
}

inline void AxisymmetricProfile::validate() const {
  const std::size_t n = nodes_.size();
  if (nodes_.front().r != 0.0) throw ValidationError("first node must lie on the axis (r = 0)");
  const Node& c = nodes_.back();
  if (std::abs(c.r * c.r + c.z * c.z - 1.0) > tol::sphere)
    throw ValidationError("contact node must lie on the unit sphere");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(nodes_[i + 1].r > nodes_[i].r))
      throw DegenerateGeometryError("radius must be strictly increasing (node " +
                                    std::to_string(i + 1) + ")");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Node& p = nodes_[i];
    if (!(p.r * p.r + p.z * p.z < 1.0))
      throw ValidationError("interior node " + std::to_string(i) + " is not inside the unit ball");
  }
  if (max_spacing() > tol::spacing_ratio * min_spacing())
    throw ValidationError("node spacing is not quasi-uniform");
}

}  // namespace capflow
