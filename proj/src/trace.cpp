#include "vsim/trace.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace vsim {

namespace {

std::string build_header() {
  std::string h = "t,voxel_x,voxel_y";
  for (int m = 1; m <= 4; ++m)
    for (int c = 1; c <= 4; ++c) {
      h += ",m" + std::to_string(m) + "c" + std::to_string(c) + "x";
      h += ",m" + std::to_string(m) + "c" + std::to_string(c) + "y";
    }
  h += ",area_ratio,control,touching,center_x,center_y";
  return h;
}

const std::string kHeaderString = build_header();

[[noreturn]] void trace_fail(size_t byte_offset, const std::string& what) {
  throw TraceError("trace error at byte " + std::to_string(byte_offset) + ": " + what);
}

}  // namespace

const char* const kTraceHeader = kHeaderString.c_str();

TraceWriter::TraceWriter(const std::string& path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw std::runtime_error("cannot open trace file " + path + ": " + std::strerror(errno));
  std::fputs(kHeaderString.c_str(), file_);
  std::fputc('\n', file_);
}

TraceWriter::~TraceWriter() { close(); }

void TraceWriter::close() {
  if (file_) {
    std::fclose(file_);
    file_ = nullptr;
  }
}

void TraceWriter::append(const Snapshot& snapshot) {
  if (!file_) throw std::logic_error("trace writer is closed");
  for (const VoxelSnapshot& v : snapshot.voxels) {
    std::fprintf(file_, "%.9g,%d,%d", snapshot.t, v.x, v.y);
    for (const Vec2& p : v.corners) std::fprintf(file_, ",%.9g,%.9g", p.x, p.y);
    std::fprintf(file_, ",%.9g,%.9g,%d,%.9g,%.9g\n", v.area_ratio, v.control, v.touching ? 1 : 0,
                 snapshot.center.x, snapshot.center.y);
    rows_ += 1;
  }
}

std::vector<Snapshot> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("trace error at byte 0: cannot open " + path);

  std::vector<Snapshot> snapshots;
  std::string line;
  size_t offset = 0;
  bool first = true;
  constexpr int kColumns = 3 + 32 + 5;

  while (std::getline(in, line)) {
    size_t line_start = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line != kHeaderString) trace_fail(line_start, "unrecognized header");
      first = false;
      continue;
    }
    if (line.empty()) continue;

    double fields[kColumns];
    size_t pos = 0;
    for (int f = 0; f < kColumns; ++f) {
      size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (f < kColumns - 1 && comma == std::string::npos)
        trace_fail(line_start + pos, "row has too few columns");
      if (f == kColumns - 1 && comma != std::string::npos)
        trace_fail(line_start + comma, "row has too many columns");
      char* end = nullptr;
      fields[f] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || !std::isfinite(fields[f]))
        trace_fail(line_start + pos, "malformed number '" + cell + "'");
      pos = comma + 1;
    }

    VoxelSnapshot v;
    v.x = static_cast<int>(fields[1]);
    v.y = static_cast<int>(fields[2]);
    for (int i = 0; i < 16; ++i) v.corners[i] = {fields[3 + 2 * i], fields[4 + 2 * i]};
    v.area_ratio = fields[35];
    v.control = fields[36];
    v.touching = fields[37] != 0.0;

    double t = fields[0];
    if (snapshots.empty() || snapshots.back().t != t) {
      Snapshot snap;
      snap.t = t;
      snap.center = {fields[38], fields[39]};
      snapshots.push_back(std::move(snap));
    }
    snapshots.back().voxels.push_back(v);
  }
  if (first) trace_fail(0, "empty file");
  return snapshots;
}

}  // namespace vsim
