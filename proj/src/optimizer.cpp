#include "nvdnp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nvdnp/report.hpp"
#include "nvdnp/types.hpp"

namespace nvdnp {

std::string_view family_name(PulseFamily f) {
  switch (f) {
    case PulseFamily::Square: return "square";
    case PulseFamily::Gaussian: return "gaussian";
    case PulseFamily::Slr: return "slr";
  }
  return "unknown";
}

PulseFamily parse_family(std::string_view name) {
  if (name == "square") return PulseFamily::Square;
  if (name == "gaussian") return PulseFamily::Gaussian;
  if (name == "slr") return PulseFamily::Slr;
  throw InvalidInput("unknown pulse family '" + std::string(name) + "'");
}

std::vector<ParameterSpec> parameter_space(PulseFamily f) {
  const ParameterSpec rabi{"", 0.2, 4.0, 1.0};
  const ParameterSpec detuning{"", -1.5, 0.5, 1.0};
  const ParameterSpec shortening{"", -20.0, 20.0, 10.0};
  auto named = [](ParameterSpec s, const char* name) {
    s.name = name;
    return s;
  };
  switch (f) {
    case PulseFamily::Square:
      return {named(rabi, "rabi_m1"),          named(rabi, "rabi_p1"),
              named(detuning, "detuning_m1"),  named(detuning, "detuning_p1"),
              named(shortening, "dT_m1_pct"),  named(shortening, "dT_p1_pct")};
    case PulseFamily::Gaussian:
      return {named(rabi, "rabi"), named(detuning, "detuning")};
    case PulseFamily::Slr:
      return {named(detuning, "detuning")};
  }
  return {};
}

namespace {

PulseEnvelope square_or_idle(double rabi, double detuning, double shortening_pct, double dt) {
  if (rabi == 0.0) return idle_envelope();
  return square_envelope({rabi, 1.0 - shortening_pct / 100.0, detuning}, dt);
}

PulseEnvelope gaussian_or_idle(double rabi, double detuning, double truncation, double dt) {
  if (rabi == 0.0) return idle_envelope();
  return gaussian_envelope({rabi, detuning, truncation}, dt);
}

std::size_t expected_size(PulseFamily f) { return parameter_space(f).size(); }

const std::vector<ParameterSpec>& bounds_of(const OptimizationProblem& p, std::vector<ParameterSpec>& storage) {
  if (!p.bounds.empty()) return p.bounds;
  storage = parameter_space(p.family);
  return storage;
}

double evaluate(const OptimizationProblem& p, const Eigen::VectorXd& params, const PulseEnvelope* slr) {
  const PulsePair pair = make_pulse_pair(p.family, params, p.propagation.dt, p.pulses, slr);
  return ensemble_dnp(p.constants, ensemble_of(p), pair, p.propagation).average;
}

}  // namespace

PulsePair make_pulse_pair(PulseFamily f, const Eigen::VectorXd& params, double sample_dt,
                          const PulseSettings& settings, const PulseEnvelope* slr_waveform) {
  if (static_cast<std::size_t>(params.size()) != expected_size(f)) {
    throw InvalidInput("wrong number of parameters for the " + std::string(family_name(f)) + " family");
  }
  switch (f) {
    case PulseFamily::Square:
      return {square_or_idle(params(0), params(2), params(4), sample_dt),
              square_or_idle(params(1), params(3), params(5), sample_dt)};
    case PulseFamily::Gaussian: {
      const PulseEnvelope env = gaussian_or_idle(params(0), params(1), settings.gaussian_truncation, sample_dt);
      return {env, env};
    }
    case PulseFamily::Slr: {
      PulseEnvelope env = slr_waveform ? *slr_waveform : slr_design(settings.slr);
      env.detuning = params(0);
      return {env, env};
    }
  }
  throw InvalidInput("unknown pulse family");
}

void validate(const OptimizationProblem& p) {
  validate(p.constants);
  validate(ensemble_of(p));
  validate(p.propagation);
  std::vector<ParameterSpec> storage;
  const auto& b = bounds_of(p, storage);
  if (b.size() != expected_size(p.family)) throw InvalidInput("bounds do not match the pulse family");
  for (const ParameterSpec& s : b) {
    if (!std::isfinite(s.lower) || !std::isfinite(s.upper) || s.lower > s.upper) {
      throw InvalidInput("bounds for '" + s.name + "' are empty or not finite");
    }
    if (!(s.scale > 0) || !std::isfinite(s.scale)) throw InvalidInput("scale for '" + s.name + "' must be positive");
  }
  if (p.restarts < 1) throw InvalidInput("at least one restart is required");
  if (p.simplex.max_iterations < 1) throw InvalidInput("iteration cap must be positive");
}

EnsembleConfig ensemble_of(const OptimizationProblem& p) {
  return ensemble_for(p.linewidth, p.constants, p.n_members, p.span_factor);
}

double objective(const OptimizationProblem& problem, const Eigen::VectorXd& params) {
  return evaluate(problem, params, nullptr);
}

std::vector<Eigen::VectorXd> seed_points(const OptimizationProblem& problem) {
  const double a = std::abs(problem.constants.A_par_mhz);
  const double half_lw = 0.5 * problem.linewidth;
  std::vector<Eigen::VectorXd> seeds;
  switch (problem.family) {
    case PulseFamily::Square:
    case PulseFamily::Gaussian: {
      const double rabi0 = a / std::sqrt(3.0);
      const double rows[5][2] = {
          {rabi0, 0.0}, {1.2 * rabi0, 0.0}, {0.8 * rabi0, 0.0}, {rabi0, -half_lw}, {rabi0, half_lw}};
      for (const auto& r : rows) {
        Eigen::VectorXd x;
        if (problem.family == PulseFamily::Square) {
          x.resize(6);
          x << r[0], r[0], r[1], r[1], 0.0, 0.0;
        } else {
          x.resize(2);
          x << r[0], r[1];
        }
        seeds.push_back(x);
      }
      break;
    }
    case PulseFamily::Slr: {
      // Upper band edge of the inverted window placed at +|A|/2.
      const double d0 = 0.5 * a - 0.5 * problem.pulses.slr.bandwidth;
      for (double d : {d0, d0 - half_lw, d0 + half_lw, d0 - 0.2, d0 + 0.2}) seeds.push_back(Eigen::VectorXd::Constant(1, d));
      break;
    }
  }
  std::vector<ParameterSpec> storage;
  const auto& b = bounds_of(problem, storage);
  for (Eigen::VectorXd& x : seeds) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), b[i].lower, b[i].upper);
  }
  seeds.resize(std::min<std::size_t>(seeds.size(), static_cast<std::size_t>(problem.restarts)));
  return seeds;
}

OptimizationResult optimize(const OptimizationProblem& problem) {
  validate(problem);
  std::vector<ParameterSpec> storage;
  const auto& b = bounds_of(problem, storage);
  const Eigen::Index n = static_cast<Eigen::Index>(b.size());
  Eigen::VectorXd scale(n), lower(n), upper(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    scale(i) = b[i].scale;
    lower(i) = b[i].lower / b[i].scale;
    upper(i) = b[i].upper / b[i].scale;
  }

  std::optional<PulseEnvelope> slr;
  if (problem.family == PulseFamily::Slr) slr = slr_design(problem.pulses.slr);
  const PulseEnvelope* slr_ptr = slr ? &*slr : nullptr;

  OptimizationResult best;
  best.family = problem.family;
  best.linewidth = problem.linewidth;
  for (const ParameterSpec& s : b) best.names.push_back(s.name);
  best.p_avg = -1.0;

  const auto seeds = seed_points(problem);
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    auto negative_p = [&](const Eigen::VectorXd& z) {
      return -evaluate(problem, z.cwiseProduct(scale), slr_ptr);
    };
    const Eigen::VectorXd z0 = seeds[r].cwiseQuotient(scale);
    const SimplexResult<double> run = nelder_mead_minimize<double>(negative_p, z0, lower, upper, problem.simplex);
    best.evaluations += run.evaluations;
    if (-run.f > best.p_avg) {
      best.p_avg = -run.f;
      best.params = run.x.cwiseProduct(scale);
      best.converged = run.converged;
      best.best_restart = static_cast<int>(r);
    }
  }
  return best;
}

double improvement_ratio(const OptimizationResult& slr, const OptimizationResult& square) {
  if (!(square.p_avg > 0)) throw InvalidInput("improvement_ratio: square p_avg must be positive");
  return slr.p_avg / square.p_avg;
}

void write_table_csv(std::ostream& os, std::string_view config, const std::vector<TableColumn>& columns) {
  std::vector<std::string> header{"family", "parameter"};
  for (const TableColumn& c : columns) header.push_back(format_number(c.linewidth));
  write_csv_preamble(os, config, header);

  auto emit_family = [&](PulseFamily f, std::optional<OptimizationResult> TableColumn::*member) {
    bool present = false;
    for (const TableColumn& c : columns) present = present || (c.*member).has_value();
    if (!present) return;
    const auto specs = parameter_space(f);
    auto row = [&](const std::string& label, auto&& cell) {
      os << family_name(f) << ',' << label;
      for (const TableColumn& c : columns) {
        os << ',';
        if (c.*member) os << cell(*(c.*member));
      }
      os << '\n';
    };
    for (std::size_t i = 0; i < specs.size(); ++i) {
      row(specs[i].name, [&](const OptimizationResult& r) { return format_number(r.params(static_cast<Eigen::Index>(i))); });
    }
    row("p_avg", [](const OptimizationResult& r) { return format_number(r.p_avg); });
    row("converged", [](const OptimizationResult& r) { return std::string(r.converged ? "1" : "0"); });
  };
  emit_family(PulseFamily::Square, &TableColumn::square);
  emit_family(PulseFamily::Gaussian, &TableColumn::gaussian);
  emit_family(PulseFamily::Slr, &TableColumn::slr);

  bool any_limit = false;
  for (const TableColumn& c : columns) any_limit = any_limit || c.limit.has_value();
  if (any_limit) {
    os << "limit,p_avg";
    for (const TableColumn& c : columns) {
      os << ',';
      if (c.limit) os << format_number(*c.limit);
    }
    os << '\n';
  }
}

const std::vector<double>& reference_linewidths() {
  static const std::vector<double> lw{0.01, 0.15, 0.32, 0.43, 0.64, 0.95, 1.27, 1.48, 1.79, 2.00};
  return lw;
}

}  // namespace nvdnp
