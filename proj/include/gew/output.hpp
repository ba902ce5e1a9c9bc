#pragma once

#include <string>

#include "gew/solver.hpp"

namespace gew {

// Header x,z,re,im; z-outer row order; 17 significant digits.
void write_field_csv(const std::string& path, const FieldGrid& g);
// Real part as 8-bit P5, z increasing downwards row by row; writes
// <path>.json with the min/max used for the linear map.
void write_field_pgm(const std::string& path, const FieldGrid& g);
// Writes text to path via a temporary file and rename.
void write_text_file(const std::string& path, const std::string& text);
// Round-trip formatting of doubles (17 significant digits).
std::string format_double(double v);

}  // namespace gew
