#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nvdnp {

// Fixed 6 significant digits, "%.6g" style; -0 prints as 0.
std::string format_number(double v);

// FNV-1a 64-bit hash, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a(std::string_view text);
std::string hash_hex(std::string_view text);

// "# config_hash=<hex>" comment line followed by the header row.
void write_csv_preamble(std::ostream& os, std::string_view config, const std::vector<std::string>& header);

}  // namespace nvdnp
