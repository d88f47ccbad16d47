#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsim/tasks.hpp"

namespace vsim {

// Raised on malformed trace input; the message carries the byte offset.
struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Column list of the per-control-step CSV: one row per voxel per snapshot.
// m{i}c{j}{x,y} are the four corners of mass i, counterclockwise.
extern const char* const kTraceHeader;

// Streams snapshots to a CSV file. Values are printed with 9 significant
// digits, so two runs producing bitwise-equal states write identical files.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void append(const Snapshot& snapshot);
  void close();

  long rows_written() const { return rows_; }

 private:
  std::FILE* file_ = nullptr;
  long rows_ = 0;
};

// Reads a whole trace back, grouping consecutive rows that share a timestamp
// into one snapshot.
std::vector<Snapshot> read_trace(const std::string& path);

}  // namespace vsim
