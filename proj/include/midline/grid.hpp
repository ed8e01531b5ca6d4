#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace midline {

enum class GridKind { intensity, probability, mask };

std::string_view to_string(GridKind kind);

// Dense 2D field of doubles, row-major, row index increasing downward.
// The value range is checked against `kind` on construction.
class Grid {
 public:
  Grid(std::size_t height, std::size_t width, double fill, GridKind kind);
  Grid(std::size_t height, std::size_t width, std::vector<double> values,
       GridKind kind);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  GridKind kind() const noexcept { return kind_; }

  double operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }
  double at(std::size_t row, std::size_t col) const;

  // Writes are range-checked against the grid kind.
  void set(std::size_t row, std::size_t col, double value);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * width_, width_);
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
  GridKind kind_;
};

// Throws InvalidArgument when `value` is outside the range allowed by `kind`.
void check_value(GridKind kind, double value);

// MDG1 on-disk format: "MDG1", u32 LE height, u32 LE width, then
// height*width float32 LE values, row-major.
inline constexpr std::size_t kMdgHeaderBytes = 12;

std::size_t encoded_size(std::size_t height, std::size_t width);

std::vector<std::byte> write_grid(const Grid& grid);

// Probability grids tolerate float32 round-off: values within 1e-6 of
// [0, 1] are clamped, anything further out is a FormatError.
Grid read_grid(std::span<const std::byte> bytes,
               GridKind kind = GridKind::intensity);

void save_grid(const std::filesystem::path& path, const Grid& grid);
Grid load_grid(const std::filesystem::path& path,
               GridKind kind = GridKind::intensity);

}  // namespace midline
