#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "vsim/grid.hpp"

using namespace vsim;

namespace {

// Brute-force region finder: enumerates all 4-connected components by repeated
// scan-order seeding, then applies the same tie rule (largest size, then the
// component containing the lowest (y, x) cell). Written against the documented
// contract only; shares no code with the library implementation.
Grid2D<bool> oracle_largest_region(const Grid2D<bool>& occ) {
  int w = occ.width(), h = occ.height();
  std::vector<int> label(static_cast<size_t>(w) * h, -1);
  auto idx = [w](int x, int y) { return static_cast<size_t>(y) * w + x; };
  auto filled = [&](int x, int y) { return occ.occupied(x, y) && *occ.at(x, y); };
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!filled(x, y) || label[idx(x, y)] != -1) continue;
      std::vector<std::pair<int, int>> stack{{x, y}};
      label[idx(x, y)] = next;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          if (!filled(nx, ny) || label[idx(nx, ny)] != -1) continue;
          label[idx(nx, ny)] = next;
          stack.push_back({nx, ny});
        }
      }
      ++next;
    }
  }
  std::map<int, int> size;
  for (int v : label)
    if (v >= 0) ++size[v];
  int max_size = 0;
  for (const auto& kv : size) max_size = std::max(max_size, kv.second);
  int best = -1;
  // scan bottom row first so the winner among tied components is the one
  // holding the minimal (y, x) cell
  for (int y = 0; y < h && best == -1; ++y)
    for (int x = 0; x < w && best == -1; ++x) {
      int v = label[idx(x, y)];
      if (v >= 0 && size[v] == max_size) best = v;
    }
  Grid2D<bool> out(w, h);
  if (best >= 0)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (label[idx(x, y)] == best) out.at(x, y) = true;
  return out;
}

Grid2D<bool> from_mask(int w, int h, uint32_t bits) {
  Grid2D<bool> g(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (bits >> (y * w + x) & 1u) g.at(x, y) = true;
  return g;
}

}  // namespace

TEST_CASE("grid basics") {
  Grid2D<int> g(3, 2);
  CHECK(g.width() == 3);
  CHECK(g.height() == 2);
  CHECK(g.count_occupied() == 0);
  CHECK_FALSE(g.occupied(0, 0));
  g.at(2, 1) = 7;
  CHECK(g.occupied(2, 1));
  CHECK(*g.at(2, 1) == 7);
  CHECK(g.count_occupied() == 1);
  CHECK(g.in_bounds(0, 0));
  CHECK_FALSE(g.in_bounds(3, 0));
  CHECK_FALSE(g.in_bounds(0, -1));
  CHECK_THROWS_AS((void)g.at(3, 0), std::out_of_range);
  CHECK_THROWS_AS(Grid2D<int>(0, 4), std::invalid_argument);
  Grid2D<int> h(3, 2);
  h.at(2, 1) = 7;
  CHECK(g == h);
  h.at(0, 0) = 1;
  CHECK_FALSE(g == h);
}

TEST_CASE("largest region matches brute force on every 4x3 occupancy") {
  for (uint32_t bits = 0; bits < (1u << 12); ++bits) {
    Grid2D<bool> g = from_mask(4, 3, bits);
    Grid2D<bool> got = largest_connected_region(g);
    Grid2D<bool> want = oracle_largest_region(g);
    if (!(got == want)) {
      CAPTURE(bits);
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("largest region matches brute force on every 2x2 and 3x3 occupancy") {
  for (uint32_t bits = 0; bits < (1u << 4); ++bits) {
    Grid2D<bool> g = from_mask(2, 2, bits);
    REQUIRE(largest_connected_region(g) == oracle_largest_region(g));
  }
  for (uint32_t bits = 0; bits < (1u << 9); ++bits) {
    Grid2D<bool> g = from_mask(3, 3, bits);
    REQUIRE(largest_connected_region(g) == oracle_largest_region(g));
  }
}

TEST_CASE("largest region tie goes to the lowest scan-order cell") {
  // two separate dominoes of equal size; the bottom one must win
  Grid2D<bool> g(3, 3);
  g.at(0, 0) = true;
  g.at(1, 0) = true;
  g.at(1, 2) = true;
  g.at(2, 2) = true;
  Grid2D<bool> r = largest_connected_region(g);
  CHECK(r.occupied(0, 0));
  CHECK(r.occupied(1, 0));
  CHECK_FALSE(r.occupied(1, 2));
  CHECK_FALSE(r.occupied(2, 2));

  // same size, same row: leftmost wins
  Grid2D<bool> g2(3, 1);
  g2.at(0, 0) = true;
  g2.at(2, 0) = true;
  Grid2D<bool> r2 = largest_connected_region(g2);
  CHECK(r2.occupied(0, 0));
  CHECK_FALSE(r2.occupied(2, 0));
}

TEST_CASE("largest region treats explicit false as empty") {
  Grid2D<bool> g(2, 1);
  g.at(0, 0) = false;
  g.at(1, 0) = true;
  Grid2D<bool> r = largest_connected_region(g);
  CHECK_FALSE(r.occupied(0, 0));
  CHECK(r.occupied(1, 0));
}

TEST_CASE("largest region of an empty grid is empty") {
  Grid2D<bool> g(4, 4);
  CHECK(largest_connected_region(g).count_occupied() == 0);
}

TEST_CASE("diagonal cells are not connected") {
  Grid2D<bool> g(2, 2);
  g.at(0, 0) = true;
  g.at(1, 1) = true;
  Grid2D<bool> r = largest_connected_region(g);
  CHECK(r.count_occupied() == 1);
  CHECK(r.occupied(0, 0));
}
