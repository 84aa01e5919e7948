#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "locrec/geometry.hpp"

namespace locrec {

/// Contents of a point file: coordinates and, when every line carries a
/// (d+1)-th field, the function values.
struct PointData {
  PointSet points;
  std::vector<double> values;

  [[nodiscard]] bool has_values() const noexcept { return !values.empty(); }
};

/// Parses the plain-text point format: one point per line, d numeric fields
/// separated by commas and/or whitespace, an optional (d+1)-th value field.
/// Blank lines and lines starting with '#' are skipped. Mixing lines with and
/// without a value is an error. Throws std::runtime_error naming the line.
[[nodiscard]] PointData read_points(std::istream& in, int dim);
[[nodiscard]] PointData read_point_file(const std::filesystem::path& path, int dim);

}  // namespace locrec
