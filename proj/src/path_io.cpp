#include "midline/path_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "midline/error.hpp"

namespace midline {

namespace {

double parse_real(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                      std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string path_to_csv(const MidlinePath& path) {
  std::string out = "row,col\n";
  for (std::size_t k = 0; k < path.cols.size(); ++k) {
    out += std::to_string(path.row_start + k);
    out += ',';
    out += std::to_string(path.cols[k]);
    out += '\n';
  }
  return out;
}

std::string polyline_to_csv(const Polyline& polyline) {
  std::string out = "row,col\n";
  for (const Point& p : polyline) {
    out += format_real(p.row);
    out += ',';
    out += format_real(p.col);
    out += '\n';
  }
  return out;
}

Polyline polyline_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty path CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "row,col") {
    throw FormatError("path CSV header must be \"row,col\", got \"" + line +
                      "\"");
  }
  Polyline out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected two comma-separated fields");
    }
    const std::string_view view(line);
    out.push_back({parse_real(view.substr(0, comma), line_no),
                   parse_real(view.substr(comma + 1), line_no)});
  }
  if (out.empty()) throw FormatError("path CSV has no points");
  return out;
}

MidlinePath path_from_csv(const std::string& text) {
  const Polyline points = polyline_from_csv(text);
  MidlinePath path;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& p = points[k];
    if (p.row != std::floor(p.row) || p.col != std::floor(p.col) || p.row < 0) {
      throw FormatError("standard-space path needs non-negative integer rows "
                        "and integer columns");
    }
    if (k == 0) {
      path.row_start = static_cast<std::size_t>(p.row);
    } else if (p.row != static_cast<double>(path.row_start + k)) {
      throw FormatError("path rows must be contiguous and ascending");
    }
    path.cols.push_back(static_cast<int>(p.col));
  }
  return path;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::invalid_argument, "cannot open " + path.string());
  }
  out << text;
  if (!out) {
    throw Error(ErrorKind::invalid_argument, "write failed: " + path.string());
  }
}

}  // namespace midline
