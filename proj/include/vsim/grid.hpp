#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace vsim {

// Dense 2-D grid with optional cells, row-major storage (index = y * width + x).
// Coordinates: x in [0, width), y in [0, height); y = 0 is the bottom row when
// the grid describes physical layout.
template <typename V>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("Grid2D: dimensions must be positive");
    }
    cells_.resize(static_cast<size_t>(width) * static_cast<size_t>(height));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

  std::optional<V>& at(int x, int y) { return cells_[index(x, y)]; }
  const std::optional<V>& at(int x, int y) const { return cells_[index(x, y)]; }

  bool occupied(int x, int y) const { return at(x, y).has_value(); }

  int count_occupied() const {
    int n = 0;
    for (const auto& c : cells_) n += c.has_value() ? 1 : 0;
    return n;
  }

  bool operator==(const Grid2D& o) const {
    return width_ == o.width_ && height_ == o.height_ && cells_ == o.cells_;
  }

 private:
  size_t index(int x, int y) const {
    if (!in_bounds(x, y)) throw std::out_of_range("Grid2D: cell out of bounds");
    return static_cast<size_t>(y) * static_cast<size_t>(width_) + static_cast<size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::optional<V>> cells_;
};

// Occupancy restricted to the largest 4-connected region. A cell counts as
// occupied iff present and true. Ties between equal-sized regions go to the
// region whose minimal cell (compared by y, then x) is lowest. Result cells
// are true inside the winning region and absent elsewhere.
Grid2D<bool> largest_connected_region(const Grid2D<bool>& occupancy);

}  // namespace vsim
