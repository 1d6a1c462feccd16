#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nvdnp/cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nvdnp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = nvdnp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "nvdnp_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dnp prints the ensemble average and a hashed CSV") {
  const Run r = run_cli({"dnp", "--family", "square", "--linewidth", "0.15", "--param", "rabi_m1=1.14",
                         "--param", "rabi_p1=1.27", "--param", "detuning_m1=0.01", "--param", "detuning_p1=-0.03",
                         "--param", "dT_m1_pct=1.4", "--param", "dT_p1_pct=0.0"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# config_hash=", 0) == 0);
  CHECK(r.out.find("offset_mhz,weight,p_mI0\n") != std::string::npos);
  const auto pos = r.out.find("P_avg=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 6)) == doctest::Approx(0.97).epsilon(0.01 / 0.97));
}

TEST_CASE("idle pulses through the CLI give one third") {
  const auto out = scratch("idle.csv");
  const Run r = run_cli({"dnp", "--linewidth", "0.64", "--param", "rabi_m1=0", "--param", "rabi_p1=0", "--out",
                         out.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "P_avg=0.333333\n");
  CHECK(slurp(out).find("offset_mhz,weight,p_mI0") != std::string::npos);
}

TEST_CASE("invalid input exits with 2") {
  CHECK(run_cli({"dnp", "--linewidth", "0.64", "--param", "bogus=1"}).code == 2);
  CHECK(run_cli({"dnp", "--linewidth", "0.64", "--param", "rabi_m1"}).code == 2);
  CHECK(run_cli({"dnp", "--linewidth", "-1"}).code == 2);
  CHECK(run_cli({"dnp", "--linewidth", "0.64", "--family", "triangle"}).code == 2);
  CHECK(run_cli({"profile", "--family", "square", "--param", "rabi=-1"}).code == 2);
  CHECK(run_cli({"optimize", "--family", "square"}).code == 2);  // missing linewidths
  CHECK(run_cli({"optimize", "--family", "square", "--linewidth", ""}).code == 2);
  CHECK(run_cli({"limit", "--linewidth", "0.5", "--members", "200"}).code == 2);
  CHECK(run_cli({"limit", "--linewidth", "0.5", "--dt", "-1"}).code == 2);
  CHECK(run_cli({"nonsense"}).code == 2);
  CHECK(run_cli({}).code == 2);
  const Run r = run_cli({"slr-design", "--param", "slr_samples=16"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(run_cli({"limit", "--linewidth", "0.5", "--constants", "/nonexistent/file"}).code == 2);
}

TEST_CASE("limit command reproduces the band-edge row") {
  const Run r = run_cli({"limit", "--linewidth", "0.01,0.95,2.0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("linewidth_mhz,p_limit\n0.01,1\n") != std::string::npos);
  CHECK(r.out.find("\n0.95,0.851") != std::string::npos);
  CHECK(r.out.find("\n2,0.702") != std::string::npos);
}

TEST_CASE("config file values apply and flags override them") {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# custom run\nA_par_mhz = -2.16\nmembers = 51\nspan_factor = 4\n";
  }
  const Run from_file = run_cli({"limit", "--linewidth", "0.64", "--constants", cfg.string()});
  const Run flag = run_cli({"limit", "--linewidth", "0.64", "--constants", cfg.string(), "--members", "51"});
  const Run defaults = run_cli({"limit", "--linewidth", "0.64"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == flag.out);
  CHECK(from_file.out != defaults.out);
  const Run overridden = run_cli({"limit", "--linewidth", "0.64", "--constants", cfg.string(), "--members", "201",
                                  "--span", "6"});
  // Same physics and grid as the defaults; only the hash line may differ.
  CHECK(overridden.out.substr(overridden.out.find('\n')) == defaults.out.substr(defaults.out.find('\n')));

  {
    std::ofstream f(cfg);
    f << "unknown_key = 3\n";
  }
  CHECK(run_cli({"limit", "--linewidth", "0.64", "--constants", cfg.string()}).code == 2);
}

TEST_CASE("profile of a cross-talk-free square pulse nulls at the hyperfine splitting") {
  const Run r = run_cli({"profile", "--family", "square", "--param", "rabi=1.247077", "--grid-span", "6",
                         "--grid-points", "601"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "detuning_mhz,inversion");
  double at_null = 1, at_centre = 0;
  while (std::getline(in, line)) {
    const double d = std::stod(line.substr(0, line.find(',')));
    const double p = std::stod(line.substr(line.find(',') + 1));
    if (std::abs(d - 2.16) < 1e-9) at_null = p;
    if (std::abs(d) < 1e-12) at_centre = p;
  }
  CHECK(at_centre == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(at_null < 1e-6);
}

TEST_CASE("slr-design dumps a readable waveform") {
  const Run r = run_cli({"slr-design", "--param", "detuning=-0.9"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# config_hash=", 0) == 0);
  CHECK(r.out.find("# detuning_mhz=-0.9\ntime_us,rabi_mhz\n") != std::string::npos);
  // 256 samples plus three header lines.
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 259);
}

TEST_CASE("optimize is deterministic and writes the table layout") {
  const std::vector<std::string> args{"optimize", "--family", "slr", "--linewidth", "0.32,1.48", "--members", "51"};
  const Run a = run_cli(args), b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("family,parameter,0.32,1.48\n") != std::string::npos);
  CHECK(a.out.find("slr,detuning,") != std::string::npos);
  CHECK(a.out.find("slr,converged,1,1\n") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const Run r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("table1") != std::string::npos);
}
