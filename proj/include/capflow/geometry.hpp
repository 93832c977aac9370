#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "capflow/curvature.hpp"
#include "capflow/profile.hpp"

namespace capflow {

/// Integrates nodal data against the hypersurface measure
/// |S^{n-1}| r^{n-1} ds. Each segment is integrated along the arcs of the
/// adjacent local circles with 5-point Gauss-Legendre; nodal values are
/// interpolated linearly in arc length.
class SurfaceQuadrature {
 public:
  explicit SurfaceQuadrature(const AxisymmetricProfile& profile) {
    const auto nodes = profile.nodes();
    const auto k = profile.local_curvature();
    const double m = profile.dims().n - 1.0;
    const double sphere = profile.dims().sphere_measure;
    const std::size_t segs = nodes.size() - 1;
    left_.assign(segs, 0.0);
    right_.assign(segs, 0.0);
    for (std::size_t i = 0; i < segs; ++i) {
      const auto [a, b] = detail::segment_arcs(nodes, k, i);
      for (const auto& arc : {a, b}) {
        for (std::size_t q = 0; q < detail::gl5_nodes.size(); ++q) {
          const double u = detail::gl5_nodes[q];
          const double rr = arc.at(u * arc.length).r;
          const double w = 0.5 * sphere * detail::gl5_weights[q] * arc.length * std::pow(rr, m);
          left_[i] += w * (1.0 - u);
          right_[i] += w * u;
        }
      }
    }
  }

  double integrate(std::span<const double> values) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < left_.size(); ++i)
      sum += left_[i] * values[i] + right_[i] * values[i + 1];
    return sum;
  }

  double measure() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < left_.size(); ++i) sum += left_[i] + right_[i];
    return sum;
  }

 private:
  std::vector<double> left_;
  std::vector<double> right_;
};

/// |M| = |S^{n-1}| * integral of r^{n-1} ds.
inline double area(const AxisymmetricProfile& profile) {
  return SurfaceQuadrature(profile).measure();
}

inline double willmore_energy(const AxisymmetricProfile& profile, const CurvatureData& curv) {
  std::vector<double> h2(curv.H.size());
  for (std::size_t i = 0; i < h2.size(); ++i) h2[i] = curv.H[i] * curv.H[i];
  return SurfaceQuadrature(profile).integrate(h2);
}

inline double willmore_energy(const AxisymmetricProfile& profile) {
  return willmore_energy(profile, curvatures(profile));
}

/// Integral of H^p. Real exponents require H >= 0; integer exponents accept
/// either sign.
inline double hp_integral(const AxisymmetricProfile& profile, const CurvatureData& curv, double p) {
  if (!(p >= 1.0)) throw ValidationError("hp_integral: p must be >= 1");
  const bool integer_p = (std::floor(p) == p);
  std::vector<double> hp(curv.H.size());
  for (std::size_t i = 0; i < hp.size(); ++i) {
    double h = curv.H[i];
    if (!integer_p) {
      if (h < -tol::num)
        throw InvalidIntegrandError("hp_integral: H changes sign and p is not an integer");
      h = std::max(h, 0.0);
    }
    hp[i] = std::pow(h, p);
  }
  return SurfaceQuadrature(profile).integrate(hp);
}

inline double hp_integral(const AxisymmetricProfile& profile, double p) {
  return hp_integral(profile, curvatures(profile), p);
}

struct BoundaryState {
  double contact_radius = 0.0;  ///< a
  double contact_height = 0.0;  ///< z_b
  double boundary_measure = 0.0;
  double perp_defect = 0.0;  ///< |<N, N_sphere>| at the contact node
};

inline BoundaryState boundary_state(const AxisymmetricProfile& profile, const CurvatureData& curv) {
  const Node& c = profile.contact_node();
  BoundaryState b;
  b.contact_radius = c.r;
  b.contact_height = c.z;
  b.boundary_measure = profile.dims().sphere_measure * std::pow(c.r, profile.dims().n - 1);
  const Node normal = unit_normal(curv.theta.back(), profile.orientation());
  b.perp_defect = std::abs(normal.r * c.r + normal.z * c.z) / std::hypot(c.r, c.z);
  return b;
}

inline BoundaryState boundary_state(const AxisymmetricProfile& profile) {
  return boundary_state(profile, curvatures(profile));
}

/// Q = 1/2 |M|^{(2-n)/n} int H^2 + omega_n^{(2-n)/n} |dM|.
inline double q_functional(double area_value, double willmore, double boundary_measure,
                           const DimensionConstants& dims) {
  const double e = dims.scaling_exponent();
  return 0.5 * std::pow(area_value, e) * willmore + std::pow(dims.omega_n, e) * boundary_measure;
}

inline double q_functional(const AxisymmetricProfile& profile) {
  const auto curv = curvatures(profile);
  return q_functional(area(profile), willmore_energy(profile, curv),
                      boundary_state(profile, curv).boundary_measure, profile.dims());
}

/// Measure of the radial cone over the boundary, |dM| / n = omega_n a^{n-1}.
inline double cone_volume(const AxisymmetricProfile& profile) {
  const double a = profile.contact_node().r;
  return profile.dims().omega_n * std::pow(a, profile.dims().n - 1);
}

/// Residuals of the two boundary identities at the contact node:
/// <grad w, N_sphere> = w for the height, and <grad H, N_sphere> = -H, which
/// holds along inverse mean curvature flow solutions only.
struct BoundaryIdentityResiduals {
  double height = 0.0;
  double mean_curvature = 0.0;
  double dH_ds = 0.0;  ///< the measured conormal derivative of H
};

inline BoundaryIdentityResiduals boundary_identity_checks(const AxisymmetricProfile& profile,
                                                          const CurvatureData& curv) {
  const std::size_t n = profile.size();
  const Node& c = profile.contact_node();
  const auto s = profile.arc_length();
  BoundaryIdentityResiduals res;
  // The sphere normal at the contact equals the profile tangent there, so
  // the conormal derivative of w is dz/ds.
  res.height = std::abs(std::sin(curv.theta.back()) - c.z);

  // One-sided second order derivative on the last three (nonuniform) nodes.
  const double h1 = s[n - 1] - s[n - 2];
  const double h2 = s[n - 2] - s[n - 3];
  const double f0 = curv.H[n - 1], f1 = curv.H[n - 2], f2 = curv.H[n - 3];
  const double d = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1 +
                   h1 / (h2 * (h1 + h2)) * f2;
  res.dH_ds = d;
  res.mean_curvature = std::abs(d + f0);
  return res;
}

inline BoundaryIdentityResiduals boundary_identity_checks(const AxisymmetricProfile& profile) {
  return boundary_identity_checks(profile, curvatures(profile));
}

/// Axisymmetric Laplace-Beltrami operator (1/r^{n-1}) d/ds (r^{n-1} df/ds)
/// at interior nodes; the endpoints are left at zero.
inline std::vector<double> laplace_beltrami(const AxisymmetricProfile& profile,
                                            std::span<const double> f) {
  const auto nodes = profile.nodes();
  const auto s = profile.arc_length();
  const double m = profile.dims().n - 1.0;
  const std::size_t n = nodes.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = s[i] - s[i - 1], hp = s[i + 1] - s[i];
    const double rm = std::pow(0.5 * (nodes[i].r + nodes[i - 1].r), m);
    const double rp = std::pow(0.5 * (nodes[i].r + nodes[i + 1].r), m);
    const double flux_p = rp * (f[i + 1] - f[i]) / hp;
    const double flux_m = rm * (f[i] - f[i - 1]) / hm;
    out[i] = (flux_p - flux_m) / (0.5 * (hm + hp)) / std::pow(nodes[i].r, m);
  }
  return out;
}

}  // namespace capflow
