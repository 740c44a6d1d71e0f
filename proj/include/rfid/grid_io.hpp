#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rfid/grid.hpp"

namespace rfid {

// RFGRID 1 text format:
//   RFGRID 1 <nx> <ny> <dx> <dy> <origin_x> <origin_y>
// followed by ny lines of nx whitespace-separated values (one line per y).
// Values are written in shortest round-trip form, so save/load is exact.

GridField load_grid(const std::filesystem::path& path);
void save_grid(const GridField& field, const std::filesystem::path& path);

/// Parses RFGRID text already in memory; `origin` labels error messages.
GridField parse_grid(std::string_view text, const std::string& origin = "<memory>");
std::string format_grid(const GridField& field);

/// CSV with header `x,y,value`.
ScatteredField load_scattered(const std::filesystem::path& path);
void save_scattered(const ScatteredField& data, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_number(double v);

/// Strict decimal parse of a whole token; rejects nan/inf and trailing junk.
/// Returns false on failure.
bool parse_number(std::string_view token, double& out);

}  // namespace rfid
