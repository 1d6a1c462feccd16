#include "nvdnp/report.hpp"

#include <cstdio>
#include <ostream>

namespace nvdnp {

std::string format_number(double v) {
  if (v == 0) v = 0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

void write_csv_preamble(std::ostream& os, std::string_view config, const std::vector<std::string>& header) {
  os << "# config_hash=" << hash_hex(config) << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
}

}  // namespace nvdnp
