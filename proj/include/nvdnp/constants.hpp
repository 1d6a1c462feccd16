#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace nvdnp {

// Couplings of the NV- ground-state Hamiltonian, ordinary-frequency units.
struct PhysicalConstants {
  double D_mhz = 2870.0;
  double gamma_e_mhz_per_g = 2.8025;
  double gamma_n_mhz_per_g = 3.077e-4;
  double Q_mhz = -4.945;
  double A_par_mhz = -2.16;
  double A_perp_mhz = -2.7;
  double B0_g = 10.0;
};

// Throws InvalidInput unless D > 0, gamma_e > 0, |A_par| > 0 and all finite.
void validate(const PhysicalConstants& c);

// Plain-text key/value pairs: one "key = value" per line, '#' starts a
// comment. Keys not present keep their defaults; unknown keys are rejected.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

// Consumes the recognised constant keys from `kv` (removing them).
PhysicalConstants constants_from(KeyValues& kv, PhysicalConstants base = {});

PhysicalConstants load_constants(const std::filesystem::path& path);

// Same "key = value" lines that parse_key_values reads.
std::string to_config_string(const PhysicalConstants& c);

}  // namespace nvdnp
