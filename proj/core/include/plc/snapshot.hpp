#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plc/configuration.hpp"
#include "plc/start.hpp"

namespace plc {

/// Persisted, resumable form of a configuration. Line-oriented text:
///
///   PLC 1
///   K <stage>
///   POLICY <error|skip|projective>
///   START <x> <y> <x> <y> <x> <y> <x> <y>     (rationals n/d)
///   P <a> <b> <c>                             (one per point, sorted)
///   L <a> <b> <c>                             (one per line, sorted)
///   SUM <16 hex digits>                       (FNV-1a 64 over all prior bytes)
///
/// Incidence lists are not stored; they are rebuilt on load by exhaustive
/// scan, which doubles as an integrity check.
struct Snapshot {
  int version = 1;
  int stage = 1;
  ParallelPolicy policy = ParallelPolicy::skip;
  StartConfig start = canonical_start();
  std::vector<Point> points;
  std::vector<Line> lines;
};

bool operator==(const Snapshot& a, const Snapshot& b);

std::uint64_t fnv1a64(std::string_view bytes);

std::string render_snapshot(const Snapshot& s);
Snapshot parse_snapshot(std::string_view text);

void save_snapshot(const Snapshot& s, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Sorted copy of the configuration's elements plus run metadata.
Snapshot make_snapshot(const Configuration& c, const StartConfig& start,
                       ParallelPolicy policy);

/// Rebuilds the full configuration (incidence by exhaustive scan) and
/// validates that every point lies on at least two lines and every line
/// carries at least two points.
Configuration to_configuration(const Snapshot& s);

}  // namespace plc
