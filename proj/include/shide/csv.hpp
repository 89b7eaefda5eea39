#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shide::io {

//! One numeric value per line; a single non-numeric first line is
//! treated as a header and skipped; whitespace-only lines are ignored.
//! Errors name the offending line; requires at least 2 values.
std::vector<double> read_data(std::istream& in, const std::string& source_name);
std::vector<double> read_data_file(const std::string& path);

//! Serializes with 17 significant digits (round-trip exact for doubles).
std::string format_g17(double v);

//! Writes to <path>.tmp and renames into place, so no partial output
//! file survives a failure.
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace shide::io
