#pragma once

#include <string>

#include "dipolesim/scenarios.hpp"

namespace dipolesim {

// Shortest decimal string that parses back to exactly the same double
// ('.' separator, "nan"/"inf" for non-finite values).
std::string format_double(double value);

// Header row plus data rows, comma separated, '\n' line ends, UTF-8.
std::string table_to_csv(const Table& table);

void write_csv(const Table& table, const std::string& path);

}  // namespace dipolesim
