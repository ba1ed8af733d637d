#pragma once

#include <string>

#include "raspen/types.hpp"

namespace raspen {

/// Plain-text cell field: one "index value" pair per line (0-based index,
/// whitespace or comma separated). Lines starting with '#' are comments.
/// Every index in [0, n) must appear exactly once.
Vector load_cell_field(const std::string& path);
void save_cell_field(const std::string& path, const Vector& field, const std::string& comment = {});

}  // namespace raspen
