#include "nvdnp/constants.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nvdnp/types.hpp"

namespace nvdnp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidInput("config key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

void validate(const PhysicalConstants& c) {
  for (double v : {c.D_mhz, c.gamma_e_mhz_per_g, c.gamma_n_mhz_per_g, c.Q_mhz,
                   c.A_par_mhz, c.A_perp_mhz, c.B0_g}) {
    if (!std::isfinite(v)) throw InvalidInput("physical constants must be finite");
  }
  if (c.D_mhz <= 0) throw InvalidInput("D_mhz must be positive");
  if (c.gamma_e_mhz_per_g <= 0) throw InvalidInput("gamma_e_mhz_per_g must be positive");
  if (c.A_par_mhz == 0) throw InvalidInput("A_par_mhz must be non-zero");
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw InvalidInput("config line " + std::to_string(lineno) + ": empty key or value");
    }
    kv[key] = value;
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path.string());
  return parse_key_values(in);
}

PhysicalConstants constants_from(KeyValues& kv, PhysicalConstants c) {
  const std::pair<const char*, double*> fields[] = {
      {"D_mhz", &c.D_mhz},
      {"gamma_e_mhz_per_g", &c.gamma_e_mhz_per_g},
      {"gamma_n_mhz_per_g", &c.gamma_n_mhz_per_g},
      {"Q_mhz", &c.Q_mhz},
      {"A_par_mhz", &c.A_par_mhz},
      {"A_perp_mhz", &c.A_perp_mhz},
      {"B0_g", &c.B0_g},
  };
  for (const auto& [key, target] : fields) {
    if (auto it = kv.find(key); it != kv.end()) {
      *target = to_double(key, it->second);
      kv.erase(it);
    }
  }
  validate(c);
  return c;
}

PhysicalConstants load_constants(const std::filesystem::path& path) {
  KeyValues kv = read_key_values(path);
  PhysicalConstants c = constants_from(kv);
  if (!kv.empty()) throw InvalidInput("unknown constants key: " + kv.begin()->first);
  return c;
}

std::string to_config_string(const PhysicalConstants& c) {
  std::ostringstream os;
  os.precision(17);
  os << "D_mhz = " << c.D_mhz << "\ngamma_e_mhz_per_g = " << c.gamma_e_mhz_per_g
     << "\ngamma_n_mhz_per_g = " << c.gamma_n_mhz_per_g << "\nQ_mhz = " << c.Q_mhz
     << "\nA_par_mhz = " << c.A_par_mhz << "\nA_perp_mhz = " << c.A_perp_mhz << "\nB0_g = " << c.B0_g << '\n';
  return os.str();
}

}  // namespace nvdnp
