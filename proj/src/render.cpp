#include "vsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace vsim {

namespace {

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void include(const Vec2& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
};

Box snapshot_box(const Snapshot& snap) {
  Box box;
  for (const VoxelSnapshot& v : snap.voxels)
    for (const Vec2& p : v.corners) box.include(p);
  return box;
}

int lerp_channel(int a, int b, double t) {
  return static_cast<int>(std::lround(a + (b - a) * t));
}

}  // namespace

std::string area_ratio_color(double ratio, double max_area_change) {
  constexpr int kRed[3] = {214, 39, 40};
  constexpr int kGreen[3] = {44, 160, 44};
  constexpr int kYellow[3] = {255, 221, 35};
  double span = max_area_change > 0.0 ? max_area_change : 0.2;
  double t = std::clamp((ratio - 1.0) / span, -1.0, 1.0);
  const int* from = t < 0.0 ? kRed : kYellow;
  double u = 1.0 - std::abs(t);  // 1 at rest, 0 at either extreme
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", lerp_channel(from[0], kGreen[0], u),
                lerp_channel(from[1], kGreen[1], u), lerp_channel(from[2], kGreen[2], u));
  return buf;
}

int render_frames(const std::vector<Snapshot>& snapshots, const std::string& out_dir,
                  const FrameSpec& spec) {
  if (spec.every < 1) throw std::invalid_argument("frame stride must be >= 1");
  if (!(spec.pixels_per_meter > 0.0)) throw std::invalid_argument("pixels_per_meter must be > 0");
  std::filesystem::create_directories(out_dir);

  std::vector<const Snapshot*> kept;
  for (size_t i = 0; i < snapshots.size(); ++i)
    if (i % static_cast<size_t>(spec.every) == 0) kept.push_back(&snapshots[i]);
  if (kept.empty()) return 0;

  Box shared;
  if (spec.fixed_viewport)
    for (const Snapshot* snap : kept) {
      Box b = snapshot_box(*snap);
      shared.include({b.min_x, b.min_y});
      shared.include({b.max_x, b.max_y});
    }

  int written = 0;
  for (const Snapshot* snap : kept) {
    Box box = spec.fixed_viewport ? shared : snapshot_box(*snap);
    if (!(box.max_x >= box.min_x)) continue;  // snapshot with no voxels
    double ppm = spec.pixels_per_meter;
    double w = (box.max_x - box.min_x + 2.0 * spec.margin) * ppm;
    double h = (box.max_y - box.min_y + 2.0 * spec.margin) * ppm;
    auto px = [&](const Vec2& p) {
      return Vec2{(p.x - box.min_x + spec.margin) * ppm, (box.max_y + spec.margin - p.y) * ppm};
    };

    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06d.svg", written);
    std::ofstream out(std::filesystem::path(out_dir) / name);
    if (!out) throw std::runtime_error(std::string("cannot write frame ") + name);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";
    char buf[64];
    for (const VoxelSnapshot& v : snap->voxels) {
      std::string color = area_ratio_color(v.area_ratio, spec.max_area_change);
      for (int m = 0; m < 4; ++m) {
        out << "  <polygon points=\"";
        for (int c = 0; c < 4; ++c) {
          Vec2 p = px(v.corners[m * 4 + c]);
          std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", c == 0 ? "" : " ", p.x, p.y);
          out << buf;
        }
        out << "\" fill=\"" << color << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
      }
    }
    Vec2 c = px(snap->center);
    std::snprintf(buf, sizeof(buf), "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"#1f5fbf\"/>\n",
                  c.x, c.y);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  <text x=\"4\" y=\"14\" font-size=\"12\">t = %.3f s</text>\n",
                  snap->t);
    out << buf;
    out << "</svg>\n";
    written += 1;
  }
  return written;
}

}  // namespace vsim
