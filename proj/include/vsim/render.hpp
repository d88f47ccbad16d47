#pragma once

#include <string>
#include <vector>

#include "vsim/tasks.hpp"

namespace vsim {

struct FrameSpec {
  double pixels_per_meter = 40.0;
  int every = 1;                 // keep every n-th snapshot
  double max_area_change = 0.2;  // half-width of the color scale around ratio 1
  double margin = 1.0;           // meters of padding around the robot
  bool fixed_viewport = true;    // one shared viewport so frames align
};

// Interpolates red (contracted) through green (rest) to yellow (expanded).
// Returns "#rrggbb".
std::string area_ratio_color(double ratio, double max_area_change);

// Writes frame_000000.svg, frame_000001.svg, ... into out_dir (created when
// missing) and returns the number of frames written. Every mass is drawn as
// its quad, filled by the voxel's area ratio color.
int render_frames(const std::vector<Snapshot>& snapshots, const std::string& out_dir,
                  const FrameSpec& spec);

}  // namespace vsim
