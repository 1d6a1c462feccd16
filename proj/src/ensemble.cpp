#include "nvdnp/ensemble.hpp"

#include <cmath>

#include "nvdnp/types.hpp"

namespace nvdnp {

void validate(const EnsembleConfig& cfg) {
  if (!(cfg.fwhm > 0) || !std::isfinite(cfg.fwhm)) throw InvalidInput("linewidth must be positive");
  if (cfg.n_members < 3 || cfg.n_members % 2 == 0) throw InvalidInput("ensemble member count must be odd and >= 3");
  if (!(cfg.span_factor > 0) || !std::isfinite(cfg.span_factor)) throw InvalidInput("span factor must be positive");
  if (!std::isfinite(cfg.B0)) throw InvalidInput("B0 must be finite");
}

EnsembleConfig ensemble_for(double fwhm, const PhysicalConstants& c, int n_members, double span_factor) {
  return {fwhm, n_members, span_factor, c.B0_g};
}

Eigen::VectorXd ensemble_grid(const EnsembleConfig& cfg, const PhysicalConstants& c) {
  validate(cfg);
  const double half_span = cfg.span_factor * cfg.fwhm / c.gamma_e_mhz_per_g;
  const int centre = (cfg.n_members - 1) / 2;
  const double spacing = half_span / centre;
  Eigen::VectorXd grid(cfg.n_members);
  for (int i = 0; i < cfg.n_members; ++i) grid(i) = cfg.B0 + (i - centre) * spacing;
  return grid;
}

Eigen::VectorXd cauchy_weights(const Eigen::VectorXd& grid, const EnsembleConfig& cfg, const PhysicalConstants& c) {
  const double gamma_b = cfg.fwhm / c.gamma_e_mhz_per_g;
  return (1.0 / ((grid.array() - cfg.B0).square() + 0.25 * gamma_b * gamma_b)).matrix();
}

double ensemble_average(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw InvalidInput("ensemble_average: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] >= 0)) throw InvalidInput("ensemble_average: negative weight");
    num += values[i] * weights[i];
    den += weights[i];
  }
  if (!(den > 0)) throw InvalidInput("ensemble_average: all weights are zero");
  return num / den;
}

EnsembleResult evaluate_ensemble(const PhysicalConstants& c, const EnsembleConfig& cfg,
                                 const std::function<double(double)>& member) {
  EnsembleResult r;
  r.fields = ensemble_grid(cfg, c);
  r.weights = cauchy_weights(r.fields, cfg, c);
  r.offsets = (c.gamma_e_mhz_per_g * (r.fields.array() - cfg.B0)).matrix();
  r.values.resize(r.fields.size());
  const int n = static_cast<int>(r.fields.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) r.values(i) = member(r.offsets(i));
  r.average = ensemble_average({r.values.data(), static_cast<std::size_t>(n)},
                               {r.weights.data(), static_cast<std::size_t>(n)});
  return r;
}

EnsembleResult ensemble_dnp(const PhysicalConstants& c, const EnsembleConfig& cfg, const PulsePair& pulses,
                            const PropagationConfig& prop) {
  validate(pulses.env_m1);
  validate(pulses.env_p1);
  validate(prop);
  return evaluate_ensemble(c, cfg, [&](double o) { return run_dnp_member(c, pulses, o, prop); });
}

EnsembleResult ensemble_limit(const PhysicalConstants& c, const EnsembleConfig& cfg) {
  const double cell = 2.0 * cfg.span_factor * cfg.fwhm / (cfg.n_members - 1);
  return evaluate_ensemble(c, cfg, [&](double o) { return limit_cell_average(c, o, cell); });
}

}  // namespace nvdnp
