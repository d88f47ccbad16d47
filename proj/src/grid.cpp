#include "vsim/grid.hpp"

#include <utility>

namespace vsim {

namespace {

bool cell_on(const Grid2D<bool>& g, int x, int y) {
  return g.in_bounds(x, y) && g.at(x, y).has_value() && *g.at(x, y);
}

}  // namespace

Grid2D<bool> largest_connected_region(const Grid2D<bool>& occupancy) {
  const int w = occupancy.width();
  const int h = occupancy.height();
  Grid2D<int> label(w, h);

  struct Region {
    int size = 0;
    std::pair<int, int> min_cell{0, 0};  // (y, x)
    std::vector<std::pair<int, int>> cells;
  };
  std::vector<Region> regions;

  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!cell_on(occupancy, x, y) || label.at(x, y).has_value()) continue;
      Region r;
      r.min_cell = {y, x};
      stack.push_back({x, y});
      label.at(x, y) = static_cast<int>(regions.size());
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        r.size += 1;
        r.cells.push_back({cx, cy});
        r.min_cell = std::min(r.min_cell, {cy, cx});
        const int nx[4] = {cx + 1, cx - 1, cx, cx};
        const int ny[4] = {cy, cy, cy + 1, cy - 1};
        for (int k = 0; k < 4; ++k) {
          if (cell_on(occupancy, nx[k], ny[k]) && !label.at(nx[k], ny[k]).has_value()) {
            label.at(nx[k], ny[k]) = static_cast<int>(regions.size());
            stack.push_back({nx[k], ny[k]});
          }
        }
      }
      regions.push_back(std::move(r));
    }
  }

  Grid2D<bool> out(w, h);
  if (regions.empty()) return out;

  int best = 0;
  for (int i = 1; i < static_cast<int>(regions.size()); ++i) {
    if (regions[i].size > regions[best].size ||
        (regions[i].size == regions[best].size && regions[i].min_cell < regions[best].min_cell)) {
      best = i;
    }
  }
  for (auto [x, y] : regions[best].cells) out.at(x, y) = true;
  return out;
}

}  // namespace vsim
