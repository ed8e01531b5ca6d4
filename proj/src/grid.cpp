#include "midline/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "midline/error.hpp"

namespace midline {

namespace {

constexpr char kMagic[4] = {'M', 'D', 'G', '1'};
constexpr double kProbabilityTolerance = 1e-6;

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::byte>((v >> shift) & 0xFFu));
  }
}

std::uint32_t get_u32(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  }
  return v;
}

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw InvalidArgument("grid dimensions must be positive, got " +
                          std::to_string(height) + "x" +
                          std::to_string(width));
  }
}

}  // namespace

std::string_view to_string(GridKind kind) {
  switch (kind) {
    case GridKind::intensity: return "intensity";
    case GridKind::probability: return "probability";
    case GridKind::mask: return "mask";
  }
  return "unknown";
}

void check_value(GridKind kind, double value) {
  switch (kind) {
    case GridKind::intensity:
      if (!std::isfinite(value)) {
        throw InvalidArgument("intensity value is not finite");
      }
      return;
    case GridKind::probability:
      if (!(value >= 0.0 && value <= 1.0)) {
        throw InvalidArgument("probability value " + std::to_string(value) +
                              " outside [0, 1]");
      }
      return;
    case GridKind::mask:
      if (value != 0.0 && value != 1.0) {
        throw InvalidArgument("mask value " + std::to_string(value) +
                              " is not 0 or 1");
      }
      return;
  }
}

Grid::Grid(std::size_t height, std::size_t width, double fill, GridKind kind)
    : height_(height), width_(width), kind_(kind) {
  check_dims(height, width);
  check_value(kind, fill);
  values_.assign(height * width, fill);
}

Grid::Grid(std::size_t height, std::size_t width, std::vector<double> values,
           GridKind kind)
    : height_(height), width_(width), values_(std::move(values)), kind_(kind) {
  check_dims(height, width);
  if (values_.size() != height * width) {
    throw InvalidArgument("grid value count " + std::to_string(values_.size()) +
                          " does not match " + std::to_string(height) + "x" +
                          std::to_string(width));
  }
  for (double v : values_) check_value(kind, v);
}

double Grid::at(std::size_t row, std::size_t col) const {
  if (row >= height_ || col >= width_) {
    throw InvalidArgument("grid index (" + std::to_string(row) + ", " +
                          std::to_string(col) + ") out of range");
  }
  return (*this)(row, col);
}

void Grid::set(std::size_t row, std::size_t col, double value) {
  if (row >= height_ || col >= width_) {
    throw InvalidArgument("grid index (" + std::to_string(row) + ", " +
                          std::to_string(col) + ") out of range");
  }
  check_value(kind_, value);
  values_[row * width_ + col] = value;
}

std::size_t encoded_size(std::size_t height, std::size_t width) {
  return kMdgHeaderBytes + 4 * height * width;
}

std::vector<std::byte> write_grid(const Grid& grid) {
  if (grid.height() > std::numeric_limits<std::uint32_t>::max() ||
      grid.width() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("grid too large for MDG1");
  }
  std::vector<std::byte> out;
  out.reserve(encoded_size(grid.height(), grid.width()));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, static_cast<std::uint32_t>(grid.height()));
  put_u32(out, static_cast<std::uint32_t>(grid.width()));
  for (double v : grid.values()) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

Grid read_grid(std::span<const std::byte> bytes, GridKind kind) {
  if (bytes.size() < kMdgHeaderBytes) {
    throw FormatError("MDG1 stream shorter than its 12-byte header");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::byte>(kMagic[i])) {
      throw FormatError("bad magic, expected \"MDG1\"");
    }
  }
  const std::uint64_t height = get_u32(bytes, 4);
  const std::uint64_t width = get_u32(bytes, 8);
  if (height == 0 || width == 0) {
    throw FormatError("MDG1 header has a zero dimension");
  }
  // Both factors are < 2^32, so the product fits in 64 bits; guard the byte
  // count against size_t overflow on narrower platforms.
  const std::uint64_t cells = height * width;
  if (cells > (std::numeric_limits<std::size_t>::max() - kMdgHeaderBytes) / 4) {
    throw FormatError("MDG1 dimensions overflow");
  }
  const std::size_t expected = kMdgHeaderBytes + 4 * cells;
  if (bytes.size() < expected) {
    throw FormatError("truncated MDG1 payload: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw FormatError("trailing bytes after MDG1 payload");
  }

  std::vector<double> values(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    double v = std::bit_cast<float>(get_u32(bytes, kMdgHeaderBytes + 4 * i));
    if (!std::isfinite(v)) {
      throw FormatError("non-finite value at cell " + std::to_string(i));
    }
    switch (kind) {
      case GridKind::intensity:
        break;
      case GridKind::probability:
        if (v < -kProbabilityTolerance || v > 1.0 + kProbabilityTolerance) {
          throw FormatError("probability " + std::to_string(v) + " at cell " +
                            std::to_string(i) + " outside [0, 1]");
        }
        v = std::clamp(v, 0.0, 1.0);
        break;
      case GridKind::mask:
        if (v != 0.0 && v != 1.0) {
          throw FormatError("mask value " + std::to_string(v) + " at cell " +
                            std::to_string(i) + " is not 0 or 1");
        }
        break;
    }
    values[i] = v;
  }
  return Grid(height, width, std::move(values), kind);
}

void save_grid(const std::filesystem::path& path, const Grid& grid) {
  const auto bytes = write_grid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::invalid_argument, "write failed: " + path.string());
}

Grid load_grid(const std::filesystem::path& path, GridKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  try {
    return read_grid(std::as_bytes(std::span<const char>(raw)), kind);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace midline
