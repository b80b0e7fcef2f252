#pragma once

#include <string>
#include <string_view>

#include "plc/bigint.hpp"
#include "plc/snapshot.hpp"

namespace plc {

/// Axis-aligned window with exact rational corners.
struct Viewport {
  Rational xmin, xmax, ymin, ymax;
};

/// Parses "xmin:xmax,ymin:ymax" with rational bounds.
Viewport parse_viewport(std::string_view text);

/// Renders the configuration as a standalone SVG document: one circle per
/// finite point inside the viewport, one segment per line clipped to the
/// viewport, and a legend entry per element visible only at infinity.
/// Output is byte-deterministic for fixed input and viewport.
std::string render_svg(const Snapshot& snap, const Viewport& vp);

}  // namespace plc
