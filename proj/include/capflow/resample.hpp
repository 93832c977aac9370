#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <cmath>
#include <memory>
#include <vector>

#include "capflow/profile.hpp"

namespace capflow {

namespace detail {

class CubicSpline {
 public:
  CubicSpline(const std::vector<double>& x, const std::vector<double>& y)
      : accel_(gsl_interp_accel_alloc(), gsl_interp_accel_free),
        spline_(gsl_spline_alloc(gsl_interp_cspline, x.size()), gsl_spline_free) {
    if (gsl_spline_init(spline_.get(), x.data(), y.data(), x.size()) != GSL_SUCCESS)
      throw DegenerateGeometryError("spline construction failed");
  }
  double operator()(double t) const { return gsl_spline_eval(spline_.get(), t, accel_.get()); }

 private:
  std::unique_ptr<gsl_interp_accel, void (*)(gsl_interp_accel*)> accel_;
  std::unique_ptr<gsl_spline, void (*)(gsl_spline*)> spline_;
};

inline std::vector<Node> resample_nodes(std::span<const Node> nodes, std::size_t num_nodes) {
  if (num_nodes < 3) throw ValidationError("resample: num_nodes must be >= 3");
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(nodes[i + 1].r > nodes[i].r))
      throw DegenerateGeometryError("resample: profile is not a graph over the radius");

  static const bool gsl_quiet = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)gsl_quiet;

  const std::size_t ghosts = std::min<std::size_t>(3, n - 2);
  std::vector<Node> ext;
  ext.reserve(n + 2 * ghosts);
  for (std::size_t k = ghosts; k >= 1; --k) ext.push_back({-nodes[k].r, nodes[k].z});
  ext.insert(ext.end(), nodes.begin(), nodes.end());
  for (std::size_t k = 1; k <= ghosts; ++k) ext.push_back(invert(nodes[n - 1 - k]));

  std::vector<double> t(ext.size(), 0.0), r(ext.size()), z(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (i > 0) t[i] = t[i - 1] + std::hypot(ext[i].r - ext[i - 1].r, ext[i].z - ext[i - 1].z);
    r[i] = ext[i].r;
    z[i] = ext[i].z;
  }
  const CubicSpline sr(t, r), sz(t, z);
  const double t0 = t[ghosts], t1 = t[ghosts + n - 1];

  std::vector<Node> out(num_nodes);
  out.front() = nodes.front();
  out.back() = nodes.back();
  for (std::size_t j = 1; j + 1 < num_nodes; ++j) {
    const double tj = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(num_nodes - 1);
    out[j] = {sr(tj), sz(tj)};
  }
  for (std::size_t j = 0; j + 1 < num_nodes; ++j)
    if (!(out[j + 1].r > out[j].r))
      throw DegenerateGeometryError("resample: interpolated profile is not a graph");
  return out;
}

}  // namespace detail

/// Re-parametrizes the profile with `num_nodes` nodes equally spaced in
/// chord length. The curve is continued past the axis by reflection and
/// past the sphere by inversion in the sphere (which maps a perpendicular
/// contact smoothly onto itself), then interpolated by cubic splines in
/// r and z. Both endpoints are kept exactly.
inline AxisymmetricProfile resample(const AxisymmetricProfile& profile, std::size_t num_nodes) {
  return AxisymmetricProfile::unchecked(profile.dims(),
                                        detail::resample_nodes(profile.nodes(), num_nodes),
                                        profile.orientation());
}

}  // namespace capflow
