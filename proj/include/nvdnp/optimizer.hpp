#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nvdnp/constants.hpp"
#include "nvdnp/dnp.hpp"
#include "nvdnp/dynamics.hpp"
#include "nvdnp/ensemble.hpp"
#include "nvdnp/nelder_mead.hpp"
#include "nvdnp/slr.hpp"

namespace nvdnp {

enum class PulseFamily { Square, Gaussian, Slr };

std::string_view family_name(PulseFamily f);
// Accepts "square", "gaussian", "slr"; throws InvalidInput otherwise.
PulseFamily parse_family(std::string_view name);

struct ParameterSpec {
  std::string name;
  double lower = 0;
  double upper = 0;
  double scale = 1;  // internal coordinate = value / scale
};

// Square: rabi_m1, rabi_p1 (MHz), detuning_m1, detuning_p1 (MHz),
//         dT_m1_pct, dT_p1_pct (% shortening of the nominal pi duration).
// Gaussian: rabi (peak, MHz), detuning (MHz), shared by both pulses.
// SLR: detuning (MHz), shared by both pulses.
std::vector<ParameterSpec> parameter_space(PulseFamily f);

// Everything besides the parameters that fixes a pulse pair. Synthesized
// shapes are sampled at the propagation step.
struct PulseSettings {
  double gaussian_truncation = 4.0;
  SlrSpec slr{};
};

// Builds the pair for one parameter vector (order as parameter_space).
// A zero Rabi frequency gives an idle pulse. `slr_waveform` reuses a
// previously designed SLR envelope; otherwise one is designed from settings.
PulsePair make_pulse_pair(PulseFamily f, const Eigen::VectorXd& params, double sample_dt,
                          const PulseSettings& settings = {},
                          const PulseEnvelope* slr_waveform = nullptr);

struct OptimizationProblem {
  PulseFamily family = PulseFamily::Square;
  double linewidth = 0.64;  // MHz
  PhysicalConstants constants{};
  int n_members = 201;
  double span_factor = 6.0;
  PropagationConfig propagation{};
  PulseSettings pulses{};
  std::vector<ParameterSpec> bounds;  // empty: parameter_space(family)
  SimplexOptions<double> simplex{};
  int restarts = 5;
};

// Throws InvalidInput on empty or non-finite bounds, or sizes not matching
// the family.
void validate(const OptimizationProblem& p);

EnsembleConfig ensemble_of(const OptimizationProblem& p);

// Ensemble-averaged P(m_I = 0) for one parameter vector.
double objective(const OptimizationProblem& problem, const Eigen::VectorXd& params);

// Deterministic restart seeds, clamped to the bounds.
std::vector<Eigen::VectorXd> seed_points(const OptimizationProblem& problem);

struct OptimizationResult {
  PulseFamily family = PulseFamily::Square;
  double linewidth = 0;
  std::vector<std::string> names;
  Eigen::VectorXd params;
  double p_avg = 0;
  int evaluations = 0;
  bool converged = false;
  int best_restart = 0;
};

OptimizationResult optimize(const OptimizationProblem& problem);

double improvement_ratio(const OptimizationResult& slr, const OptimizationResult& square);

// One column of the reference table layout. Families that were not run stay empty.
struct TableColumn {
  double linewidth = 0;
  std::optional<OptimizationResult> square;
  std::optional<OptimizationResult> gaussian;
  std::optional<OptimizationResult> slr;
  std::optional<double> limit;
};

// Rows "family,parameter" with one value column per linewidth; missing
// cells are left blank.
void write_table_csv(std::ostream& os, std::string_view config, const std::vector<TableColumn>& columns);

// The ten linewidths of the reference table, MHz.
const std::vector<double>& reference_linewidths();

}  // namespace nvdnp
