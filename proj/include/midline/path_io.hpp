#pragma once

#include <filesystem>
#include <string>

#include "midline/metrics.hpp"
#include "midline/pathfinding.hpp"

namespace midline {

// CSV with header "row,col". Standard-space paths carry integer columns;
// original-space polylines carry real coordinates in shortest round-trip
// decimal form.
std::string path_to_csv(const MidlinePath& path);
std::string polyline_to_csv(const Polyline& polyline);

// Accepts either flavour. Throws FormatError on malformed input.
Polyline polyline_from_csv(const std::string& text);

// Requires integer rows forming a contiguous ascending run.
MidlinePath path_from_csv(const std::string& text);

std::string format_real(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

}  // namespace midline
