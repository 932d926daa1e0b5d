#pragma once

// MPS reader. Sections NAME, OBJSENSE, ROWS, COLUMNS (with integer markers),
// RHS, BOUNDS and ENDATA. RANGES and free columns are rejected.

#include "mirlab/model.hpp"

#include <istream>
#include <string>

namespace mirlab {

enum class MpsFormat {
    Free,   // whitespace-separated tokens; names may not contain spaces
    Fixed,  // fields at columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61
};

/// Throws ParseError with the offending line, or UnsupportedFeature.
GeneralMip parse_mps(std::istream& in, MpsFormat format = MpsFormat::Free);

/// Throws Error when the file cannot be opened.
GeneralMip read_mps(const std::string& path, MpsFormat format = MpsFormat::Free);

/// Writes `mip` in free format. Throws UnsupportedFeature for empty names or
/// names containing whitespace.
std::string write_mps(const GeneralMip& mip);

} // namespace mirlab
