#pragma once

namespace capflow::tol {

inline constexpr double sphere = 1e-10;
inline constexpr double perp = 1e-8;
inline constexpr double num = 1e-9;
inline constexpr double umbilic = 1e-6;
/// Two consecutive nodes closer than this are considered coincident.
inline constexpr double coincident = 1e-14;
/// Largest allowed ratio of the longest to the shortest arc segment.
inline constexpr double spacing_ratio = 3.0;

}  // namespace capflow::tol
