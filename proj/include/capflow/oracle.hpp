#pragma once

// Closed-form and quadrature references: orthogonal caps, the flat disk,
// the exponential area law and the existence time.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <span>

#include "capflow/dimension.hpp"
#include "capflow/flow.hpp"
#include "capflow/profile.hpp"

namespace capflow::oracle {

struct CapSpec {
  DimensionConstants dims;
  double rho = 1.0;
  double d = 0.0;      ///< distance of the cap centre from the origin
  double a = 0.0;      ///< contact radius
  double theta = 0.0;  ///< half-angle at the cap centre, sin(theta) = 1/d

  static CapSpec of(const DimensionConstants& dims, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
    const double d = std::sqrt(1.0 + rho * rho);
    return {dims, rho, d, rho / d, std::asin(1.0 / d)};
  }
};

/// |cap| = |S^{n-1}| rho^n * integral_0^theta sin^{n-1}(phi) dphi.
inline double cap_area_exact(const CapSpec& spec) {
  const int m = spec.dims.n - 1;
  auto f = [m](double phi) { return std::pow(std::sin(phi), m); };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, spec.theta, 15, 1e-14, &err);
  return spec.dims.sphere_measure * std::pow(spec.rho, spec.dims.n) * integral;
}

inline double disk_q_value(const DimensionConstants& dims) {
  return std::pow(dims.omega_n, dims.scaling_exponent()) * dims.sphere_measure;
}

inline double cap_q_exact(const CapSpec& spec) {
  const auto& dims = spec.dims;
  const double area = cap_area_exact(spec);
  const double h = dims.n / spec.rho;
  return 0.5 * std::pow(area, dims.scaling_exponent()) * h * h * area +
         std::pow(dims.omega_n, dims.scaling_exponent()) * dims.sphere_measure *
             std::pow(spec.a, dims.n - 1);
}

/// T* = log(omega_n / |M_0|); requires 0 < |M_0| < omega_n.
inline double predicted_existence_time(double initial_area, const DimensionConstants& dims) {
  if (!(initial_area > 0.0)) throw ValidationError("initial area must be > 0");
  if (!(initial_area < dims.omega_n))
    throw ValidationError("initial area must be below omega_n (volume estimate violated)");
  return std::log(dims.omega_n / initial_area);
}

/// max_k |area(t_k) / (e^{t_k} area(t_0)) - 1| over a recorded series.
inline double area_law_residual(std::span<const FlowDiagnostics> series) {
  if (series.size() < 2) throw ValidationError("area_law_residual needs at least 2 records");
  const double a0 = series.front().area, t0 = series.front().t;
  double worst = 0.0;
  for (const auto& d : series)
    worst = std::max(worst, std::abs(d.area / (std::exp(d.t - t0) * a0) - 1.0));
  return worst;
}

inline double area_law_residual(const FlowRun& run) {
  if (run.config.mode != FlowMode::IMCF)
    throw ValidationError("area_law_residual applies to IMCF runs only");
  return area_law_residual(run.series);
}

/// Signed distance from p to the orthogonal cap sphere of radius rho
/// (positive outside), written to avoid cancellation for large rho.
inline double signed_distance_to_orthogonal_sphere(Node p, double rho) {
  const double d = std::sqrt(1.0 + rho * rho);
  const double dist = std::hypot(p.r, p.z - d);
  return (p.r * p.r + p.z * p.z + 1.0 - 2.0 * p.z * d) / (dist + rho);
}

/// Least-squares fit of an orthogonal cap (one parameter, rho) to the nodes;
/// returns the largest node distance to the fitted sphere. The rho -> inf
/// branch (the equatorial plane) is also considered.
inline double cap_fit_residual(const AxisymmetricProfile& profile) {
  const auto nodes = profile.nodes();
  auto sum_sq = [&](double log_rho) {
    const double rho = std::exp(log_rho);
    double s = 0.0;
    for (const Node& p : nodes) {
      const double e = signed_distance_to_orthogonal_sphere(p, rho);
      s += e * e;
    }
    return s;
  };
  double best = -7.0, best_val = sum_sq(best);
  for (double x = -7.0; x <= 18.0; x += 0.25) {
    const double v = sum_sq(x);
    if (v < best_val) best = x, best_val = v;
  }
  double x = boost::math::tools::brent_find_minima(sum_sq, best - 0.25, best + 0.25, 60).first;
  // Brent stalls at sqrt(eps) on the flat minimum; polish with Gauss-Newton.
  for (int it = 0; it < 8; ++it) {
    const double h = 1e-6;
    double num = 0.0, den = 0.0;
    for (const Node& p : nodes) {
      const double e = signed_distance_to_orthogonal_sphere(p, std::exp(x));
      const double de = (signed_distance_to_orthogonal_sphere(p, std::exp(x + h)) -
                         signed_distance_to_orthogonal_sphere(p, std::exp(x - h))) /
                        (2.0 * h);
      num += e * de;
      den += de * de;
    }
    if (!(den > 0.0)) break;
    const double next = x - num / den;
    if (!(sum_sq(next) <= sum_sq(x))) break;
    x = next;
  }
  double fitted = 0.0;
  for (const Node& p : nodes)
    fitted = std::max(fitted, std::abs(signed_distance_to_orthogonal_sphere(p, std::exp(x))));
  double plane = 0.0;
  for (const Node& p : nodes) plane = std::max(plane, std::abs(p.z));
  return std::min(fitted, plane);
}

}  // namespace capflow::oracle
