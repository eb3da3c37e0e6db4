#pragma once

#include <string>

#include "ql/records.hpp"

namespace ql {

/// Deterministic SVG figure for one record: fixed 800x800 canvas, fixed
/// palette, fixed numeric formatting, no timestamps, so identical records
/// produce bit-identical documents. Renderable payload kinds:
/// "trajectories", "slice_profile", "zone_map". Anything else throws
/// UnrenderableRecordKind.
std::string render_svg(const ResultRecord& record);

}  // namespace ql
