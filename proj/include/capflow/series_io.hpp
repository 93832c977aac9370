#pragma once

#include <cstdio>
#include <span>
#include <string>

#include "capflow/flow.hpp"
#include "capflow/profile_io.hpp"

namespace capflow {

inline constexpr const char* series_csv_header =
    "t,area,boundary_measure,willmore,h1,q,min_kappa,min_H,max_H,perp_defect,area_law_residual,"
    "sup_z,sup_slope";

/// One row per record, 17 significant digits.
inline std::string series_to_csv(std::span<const FlowDiagnostics> series) {
  std::string out = series_csv_header;
  out += '\n';
  for (const auto& d : series) {
    const double row[] = {d.t,
                          d.area,
                          d.boundary_measure,
                          d.willmore,
                          d.h1_integral,
                          d.q_value,
                          d.min_principal_curvature,
                          d.min_H,
                          d.max_H,
                          d.perp_defect,
                          d.area_law_residual,
                          d.sup_z,
                          d.sup_profile_slope};
    for (std::size_t k = 0; k < std::size(row); ++k) {
      if (k) out += ',';
      out += format_float(row[k]);
    }
    out += '\n';
  }
  return out;
}

/// `snap_<t>.csv` with t in fixed-point, six decimals.
inline std::string snapshot_file_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%.6f.csv", t);
  return buf;
}

}  // namespace capflow
