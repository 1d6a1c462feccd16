#include "nvdnp/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nvdnp/constants.hpp"
#include "nvdnp/ensemble.hpp"
#include "nvdnp/optimizer.hpp"
#include "nvdnp/pulses.hpp"
#include "nvdnp/report.hpp"
#include "nvdnp/slr.hpp"
#include "nvdnp/types.hpp"

namespace nvdnp::cli {

namespace {

struct RunConfig {
  PhysicalConstants constants{};
  int members = 201;
  double span_factor = 6.0;
  double dt = 1e-3;
  PulseSettings pulses{};
};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw InvalidInput("'" + key + "' expects a finite number, got '" + text + "'");
  }
  return v;
}

int parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidInput("'" + key + "' expects an integer");
  return static_cast<int>(v);
}

// Pulse-shape settings accepted both in the config file and via --param.
bool apply_pulse_setting(PulseSettings& s, const std::string& key, const std::string& value) {
  if (key == "truncation") s.gaussian_truncation = parse_number(key, value);
  else if (key == "slr_length") s.slr.length = parse_number(key, value);
  else if (key == "slr_bandwidth") s.slr.bandwidth = parse_number(key, value);
  else if (key == "slr_samples") s.slr.n_samples = parse_count(key, value);
  else if (key == "slr_in_ripple") s.slr.in_band_ripple = parse_number(key, value);
  else if (key == "slr_out_ripple") s.slr.out_band_ripple = parse_number(key, value);
  else return false;
  return true;
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  KeyValues kv = read_key_values(path);
  cfg.constants = constants_from(kv);
  for (const auto& [key, value] : kv) {
    if (key == "dt_us") cfg.dt = parse_number(key, value);
    else if (key == "members") cfg.members = parse_count(key, value);
    else if (key == "span_factor") cfg.span_factor = parse_number(key, value);
    else if (!apply_pulse_setting(cfg.pulses, key, value)) throw InvalidInput("unknown config key '" + key + "'");
  }
  return cfg;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("--param expects name=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

// Canonical text hashed into every CSV preamble.
class ConfigText {
 public:
  ConfigText(const std::string& command, const RunConfig& cfg) {
    text_ = to_config_string(cfg.constants);
    add("command", command);
    add("dt_us", format_number(cfg.dt));
    add("members", std::to_string(cfg.members));
    add("span_factor", format_number(cfg.span_factor));
    add("truncation", format_number(cfg.pulses.gaussian_truncation));
    add("slr_length", format_number(cfg.pulses.slr.length));
    add("slr_bandwidth", format_number(cfg.pulses.slr.bandwidth));
    add("slr_samples", std::to_string(cfg.pulses.slr.n_samples));
    add("slr_in_ripple", format_number(cfg.pulses.slr.in_band_ripple));
    add("slr_out_ripple", format_number(cfg.pulses.slr.out_band_ripple));
  }
  void add(const std::string& key, const std::string& value) { text_ += key + " = " + value + "\n"; }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

// Writes to --out when given, otherwise to the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw InvalidInput("cannot open output file '" + path + "'");
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::vector<PulseFamily> families_of(const std::string& name) {
  if (name == "all") return {PulseFamily::Square, PulseFamily::Gaussian, PulseFamily::Slr};
  return {parse_family(name)};
}

// Family parameters from --param; unspecified ones take defaults.
Eigen::VectorXd family_params(PulseFamily f, std::map<std::string, std::string>& params, const RunConfig& cfg) {
  const auto specs = parameter_space(f);
  const double rabi0 = std::abs(cfg.constants.A_par_mhz) / std::sqrt(3.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(specs.size()));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string& name = specs[i].name;
    double v = name.rfind("rabi", 0) == 0 ? rabi0 : 0.0;
    if (auto it = params.find(name); it != params.end()) {
      v = parse_number(name, it->second);
      params.erase(it);
    }
    x(static_cast<Eigen::Index>(i)) = v;
  }
  return x;
}

void apply_pulse_params(std::map<std::string, std::string>& params, RunConfig& cfg) {
  for (auto it = params.begin(); it != params.end();) {
    it = apply_pulse_setting(cfg.pulses, it->first, it->second) ? params.erase(it) : std::next(it);
  }
}

void reject_leftovers(const std::map<std::string, std::string>& params) {
  if (!params.empty()) throw InvalidInput("unknown parameter '" + params.begin()->first + "'");
}

std::vector<double> require_linewidths(const std::vector<double>& lw) {
  if (lw.empty()) throw InvalidInput("--linewidth needs at least one value");
  for (double v : lw) {
    if (!(v > 0) || !std::isfinite(v)) throw InvalidInput("linewidths must be positive");
  }
  return lw;
}

OptimizationProblem problem_for(PulseFamily f, double lw, const RunConfig& cfg) {
  OptimizationProblem p;
  p.family = f;
  p.linewidth = lw;
  p.constants = cfg.constants;
  p.n_members = cfg.members;
  p.span_factor = cfg.span_factor;
  p.propagation.dt = cfg.dt;
  p.pulses = cfg.pulses;
  return p;
}

double limit_average(const RunConfig& cfg, double lw) {
  return ensemble_limit(cfg.constants, ensemble_for(lw, cfg.constants, cfg.members, cfg.span_factor)).average;
}

std::string join_params(const std::vector<std::string>& items) {
  std::set<std::string> sorted(items.begin(), items.end());
  std::string s;
  for (const auto& i : sorted) s += (s.empty() ? "" : ";") + i;
  return s;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ";") + format_number(x);
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse optimization for 14N nuclear polarization in NV ensembles", "nvdnp"};
  app.require_subcommand(1);

  std::string constants_path, out_path, family = "square";
  std::vector<double> linewidths;
  std::vector<std::string> param_items;
  double dt = 0, span = 0, grid_span = 6.0;
  int members = 0, grid_points = 241;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--constants", constants_path, "Config file of key = value lines")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Output CSV path (default: stdout)");
    sub->add_option("--dt", dt, "Propagation and sampling step, us");
    sub->add_option("--members", members, "Ensemble size (odd)");
    sub->add_option("--span", span, "Ensemble half-width in linewidths");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--param", param_items, "Pulse parameter name=value (repeatable)");
  };
  auto add_linewidths = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--linewidth", linewidths, "Linewidth(s), MHz, comma separated")->delimiter(',');
    if (required) opt->required();
  };

  CLI::App* profile = app.add_subcommand("profile", "Excitation profile of one pulse");
  add_common(profile);
  add_params(profile);
  profile->add_option("--family", family, "square | gaussian | slr");
  profile->add_option("--grid-span", grid_span, "Profile half-width, MHz");
  profile->add_option("--grid-points", grid_points, "Number of profile points");

  CLI::App* dnp = app.add_subcommand("dnp", "Ensemble-averaged polarization for given pulse parameters");
  add_common(dnp);
  add_params(dnp);
  add_linewidths(dnp, true);
  dnp->add_option("--family", family, "square | gaussian | slr");

  CLI::App* opt = app.add_subcommand("optimize", "Optimize pulse parameters per linewidth");
  add_common(opt);
  add_linewidths(opt, true);
  opt->add_option("--family", family, "square | gaussian | slr | all");

  CLI::App* limit = app.add_subcommand("limit", "Band-edge polarization limit per linewidth");
  add_common(limit);
  add_linewidths(limit, true);

  CLI::App* table = app.add_subcommand("table1", "All families plus the limit over the reference linewidths");
  add_common(table);
  add_linewidths(table, false);

  CLI::App* slr_cmd = app.add_subcommand("slr-design", "Dump the designed SLR waveform");
  add_common(slr_cmd);
  add_params(slr_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    RunConfig cfg = load_config(constants_path);
    if (dt != 0) cfg.dt = dt;
    if (members != 0) cfg.members = members;
    if (span != 0) cfg.span_factor = span;
    validate(cfg.constants);
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw InvalidInput("dt must be positive");
    validate(ensemble_for(1.0, cfg.constants, cfg.members, cfg.span_factor));
    auto params = parse_params(param_items);
    apply_pulse_params(params, cfg);

    if (profile->parsed()) {
      if (grid_points < 2 || !(grid_span > 0)) throw InvalidInput("profile grid needs >= 2 points and a positive span");
      const PulseFamily f = parse_family(family);
      PulseEnvelope env;
      if (f == PulseFamily::Slr) {
        double detuning = 0;
        if (auto it = params.find("detuning"); it != params.end()) {
          detuning = parse_number("detuning", it->second);
          params.erase(it);
        }
        reject_leftovers(params);
        env = slr_design(cfg.pulses.slr);
        env.detuning = detuning;
      } else {
        const double rabi0 = std::abs(cfg.constants.A_par_mhz) / std::sqrt(3.0);
        double rabi = rabi0, detuning = 0, shortening = 0;
        for (auto& [key, target] : std::map<std::string, double*>{{"rabi", &rabi}, {"detuning", &detuning}, {"dT_pct", &shortening}}) {
          if (auto it = params.find(key); it != params.end()) {
            if (key == "dT_pct" && f != PulseFamily::Square) continue;
            *target = parse_number(key, it->second);
            params.erase(it);
          }
        }
        reject_leftovers(params);
        env = f == PulseFamily::Square
                  ? square_envelope({rabi, 1.0 - shortening / 100.0, detuning}, cfg.dt)
                  : gaussian_envelope({rabi, detuning, cfg.pulses.gaussian_truncation}, cfg.dt);
      }
      std::vector<double> grid(grid_points);
      for (int k = 0; k < grid_points; ++k) grid[k] = -grid_span + 2.0 * grid_span * k / (grid_points - 1);
      const auto inv = excitation_profile(env, grid);
      ConfigText ct("profile", cfg);
      ct.add("family", family);
      ct.add("params", join_params(param_items));
      ct.add("grid", format_number(grid_span) + ";" + std::to_string(grid_points));
      Output o(out_path, out);
      write_csv_preamble(o.stream(), ct.str(), {"detuning_mhz", "inversion"});
      for (int k = 0; k < grid_points; ++k) o.stream() << format_number(grid[k]) << ',' << format_number(inv[k]) << '\n';
      return kExitOk;
    }

    if (dnp->parsed()) {
      if (linewidths.size() != 1) throw InvalidInput("dnp takes exactly one linewidth");
      const double lw = require_linewidths(linewidths).front();
      const PulseFamily f = parse_family(family);
      const Eigen::VectorXd x = family_params(f, params, cfg);
      reject_leftovers(params);
      const PulsePair pair = make_pulse_pair(f, x, cfg.dt, cfg.pulses);
      PropagationConfig prop;
      prop.dt = cfg.dt;
      const EnsembleResult r =
          ensemble_dnp(cfg.constants, ensemble_for(lw, cfg.constants, cfg.members, cfg.span_factor), pair, prop);
      ConfigText ct("dnp", cfg);
      ct.add("family", family);
      ct.add("linewidth", format_number(lw));
      ct.add("params", join_params(param_items));
      Output o(out_path, out);
      write_csv_preamble(o.stream(), ct.str(), {"offset_mhz", "weight", "p_mI0"});
      for (Eigen::Index i = 0; i < r.values.size(); ++i) {
        o.stream() << format_number(r.offsets(i)) << ',' << format_number(r.weights(i)) << ','
                   << format_number(r.values(i)) << '\n';
      }
      out << "P_avg=" << format_number(r.average) << '\n';
      return kExitOk;
    }

    if (opt->parsed() || table->parsed()) {
      reject_leftovers(params);
      const bool full = table->parsed();
      const std::vector<double> lws = full && linewidths.empty() ? reference_linewidths() : require_linewidths(linewidths);
      const auto fams = families_of(full ? "all" : family);
      // Validate everything before the long run starts.
      for (PulseFamily f : fams) validate(problem_for(f, lws.front(), cfg));

      bool all_converged = true;
      std::vector<TableColumn> columns;
      for (double lw : lws) {
        TableColumn col;
        col.linewidth = lw;
        for (PulseFamily f : fams) {
          OptimizationResult r = optimize(problem_for(f, lw, cfg));
          all_converged = all_converged && r.converged;
          err << family_name(f) << " linewidth=" << format_number(lw) << " p_avg=" << format_number(r.p_avg)
              << (r.converged ? "" : " (not converged)") << '\n';
          if (f == PulseFamily::Square) col.square = std::move(r);
          else if (f == PulseFamily::Gaussian) col.gaussian = std::move(r);
          else col.slr = std::move(r);
        }
        if (full) col.limit = limit_average(cfg, lw);
        columns.push_back(std::move(col));
      }
      ConfigText ct(full ? "table1" : "optimize", cfg);
      ct.add("family", full ? "all" : family);
      ct.add("linewidths", join_numbers(lws));
      Output o(out_path, out);
      write_table_csv(o.stream(), ct.str(), columns);
      if (!all_converged) {
        err << "warning: at least one optimization hit the iteration cap\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (limit->parsed()) {
      const auto lws = require_linewidths(linewidths);
      ConfigText ct("limit", cfg);
      ct.add("linewidths", join_numbers(lws));
      Output o(out_path, out);
      write_csv_preamble(o.stream(), ct.str(), {"linewidth_mhz", "p_limit"});
      for (double lw : lws) o.stream() << format_number(lw) << ',' << format_number(limit_average(cfg, lw)) << '\n';
      return kExitOk;
    }

    if (slr_cmd->parsed()) {
      double detuning = 0;
      if (auto it = params.find("detuning"); it != params.end()) {
        detuning = parse_number("detuning", it->second);
        params.erase(it);
      }
      reject_leftovers(params);
      PulseEnvelope env = slr_design(cfg.pulses.slr);
      env.detuning = detuning;
      ConfigText ct("slr-design", cfg);
      ct.add("detuning", format_number(detuning));
      Output o(out_path, out);
      o.stream() << "# config_hash=" << hash_hex(ct.str()) << '\n';
      write_envelope_csv(o.stream(), env);
      return kExitOk;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const InfeasibleDesign& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace nvdnp::cli
