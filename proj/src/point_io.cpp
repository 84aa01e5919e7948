#include "locrec/point_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace locrec {

namespace {

std::vector<double> split_fields(const std::string& line, std::size_t line_no) {
  std::vector<double> fields;
  std::size_t pos = 0;
  auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\r'; };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_sep(line[end])) ++end;
    const std::string token = line.substr(pos, end - pos);
    char* stop = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size() || errno == ERANGE)
      throw std::runtime_error("point file line " + std::to_string(line_no) + ": bad number '" + token + "'");
    fields.push_back(v);
    pos = end;
  }
  return fields;
}

}  // namespace

PointData read_points(std::istream& in, int dim) {
  PointData data{PointSet(dim), {}};
  std::string line;
  std::size_t line_no = 0;
  int with_value = -1;  // unknown until the first data line
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_fields(line, line_no);
    const auto d = static_cast<std::size_t>(dim);
    if (fields.size() != d && fields.size() != d + 1)
      throw std::runtime_error("point file line " + std::to_string(line_no) + ": expected " +
                               std::to_string(d) + " or " + std::to_string(d + 1) + " fields, got " +
                               std::to_string(fields.size()));
    const int has = fields.size() == d + 1 ? 1 : 0;
    if (with_value < 0) with_value = has;
    if (has != with_value)
      throw std::runtime_error("point file line " + std::to_string(line_no) +
                               ": value column present on some lines only");
    data.points.push_back(std::span<const double>(fields.data(), d));
    if (has) data.values.push_back(fields[d]);
  }
  data.points.require_finite();
  return data;
}

PointData read_point_file(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point file '" + path.string() + "'");
  return read_points(in, dim);
}

}  // namespace locrec
