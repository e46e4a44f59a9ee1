#pragma once

// Flat-file plumbing: observation ingestion (plain lines or single-column CSV
// with an optional header) and RFC 4180 CSV output.

#include <string>
#include <vector>

#include "nvmix/models.hpp"

namespace nvmix {

// Reads one numeric value per line; a non-numeric first line is treated as a
// header and skipped, any later unparsable line is an error naming the line.
// With log_transform set, values must be positive and are log-transformed.
Sample ingest_observations(const std::string& path, bool log_transform);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// RFC 4180: CRLF line endings, fields quoted when they contain a comma, a
// quote, or a newline. path "-" writes to stdout.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace nvmix
