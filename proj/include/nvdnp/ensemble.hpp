#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "nvdnp/constants.hpp"
#include "nvdnp/dnp.hpp"

namespace nvdnp {

// Inhomogeneously broadened ensemble: n_members equally spaced fields on
// B0 +- span_factor * fwhm / gamma_e, weighted by a Cauchy line of the
// given FWHM.
struct EnsembleConfig {
  double fwhm = 0.64;  // ODMR linewidth, MHz
  int n_members = 201;
  double span_factor = 6.0;
  double B0 = 10.0;  // G
};

void validate(const EnsembleConfig& cfg);

// Ensemble centred on the constants' bias field.
EnsembleConfig ensemble_for(double fwhm, const PhysicalConstants& c, int n_members = 201, double span_factor = 6.0);

Eigen::VectorXd ensemble_grid(const EnsembleConfig& cfg, const PhysicalConstants& c);

// w_i = 1 / ((B_i - B0)^2 + gamma_B^2 / 4), gamma_B = fwhm / gamma_e.
Eigen::VectorXd cauchy_weights(const Eigen::VectorXd& grid, const EnsembleConfig& cfg, const PhysicalConstants& c);

double ensemble_average(std::span<const double> values, std::span<const double> weights);

struct EnsembleResult {
  Eigen::VectorXd fields;   // G
  Eigen::VectorXd offsets;  // gamma_e (B - B0), MHz
  Eigen::VectorXd weights;
  Eigen::VectorXd values;
  double average = 0;
};

// Evaluates member(offset_mhz) on every grid point (in parallel when
// available) and reduces in index order.
EnsembleResult evaluate_ensemble(const PhysicalConstants& c, const EnsembleConfig& cfg,
                                 const std::function<double(double)>& member);

EnsembleResult ensemble_dnp(const PhysicalConstants& c, const EnsembleConfig& cfg, const PulsePair& pulses,
                            const PropagationConfig& prop = {});

// Limit evaluated on the same grid and weights; each member contributes the
// rule averaged over its own grid cell.
EnsembleResult ensemble_limit(const PhysicalConstants& c, const EnsembleConfig& cfg);

}  // namespace nvdnp
