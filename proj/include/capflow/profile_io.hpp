#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capflow/profile.hpp"

namespace capflow {

/// 17 significant digits; round-trips every double.
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Snapshot format: a `# n=<n> orientation=<+-1>` line, the header `s,r,z`,
/// then one node per row.
inline std::string profile_to_csv(const AxisymmetricProfile& profile) {
  std::string out = "# n=" + std::to_string(profile.dims().n) +
                    " orientation=" + std::to_string(profile.orientation()) + "\ns,r,z\n";
  const auto s = profile.arc_length();
  const auto nodes = profile.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out += format_float(s[i]) + "," + format_float(nodes[i].r) + "," + format_float(nodes[i].z) +
           "\n";
  return out;
}

inline AxisymmetricProfile profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1, orientation = 1;
  bool header = false;
  std::vector<Node> nodes;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string item;
      while (meta >> item) {
        if (item.rfind("n=", 0) == 0) n = std::stoi(item.substr(2));
        else if (item.rfind("orientation=", 0) == 0) orientation = std::stoi(item.substr(12));
      }
      continue;
    }
    if (!header) {
      if (line != "s,r,z") throw ValidationError("profile csv: expected header 's,r,z'");
      header = true;
      continue;
    }
    double s = 0, r = 0, z = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &r, &z) != 3)
      throw ValidationError("profile csv: malformed row at line " + std::to_string(lineno));
    nodes.push_back({r, z});
  }
  if (n < 0) throw ValidationError("profile csv: missing '# n=' metadata");
  return AxisymmetricProfile(DimensionConstants::of(n), std::move(nodes), orientation);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace capflow
