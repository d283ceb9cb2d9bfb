#pragma once

#include <string>

#include "qnd_cli/csv.hpp"

namespace qnd::cli {

/// Polyline of the second column against the first, with a frame, five ticks
/// per axis and labels taken from the column names. Output depends only on the table.
std::string render_svg(const CsvTable& table);

}  // namespace qnd::cli
