// Experiments behind the rimwalk command line: simulation traces, error
// convergence tables, (alpha, phi) period sweeps, nonlinear vs linearized
// comparison and the stability report.
#pragma once

#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rimwalk/nonlinear_dynamics.hpp"
#include "rimwalk/stability_analysis.hpp"
#include "rimwalk/wheel_model.hpp"

namespace rimwalk::harness {

enum class ExperimentKind { Simulate, Converge, Sweep, Compare, Report };
enum class Model { Nonlinear, Linear };

const char* to_string(Model m);

/// Invalid experiment description (bad grid, bad scale, bad parameters).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepGrid {
  double alpha_min = 0.01;
  double alpha_max = std::numbers::pi / 2.0 - 0.01;
  int alpha_res = 100;
  /// Each alpha row runs phi over [phi_min(alpha) + phi_offset, phi_max].
  double phi_offset = 1e-4;
  double phi_max = 1.0;
  int phi_res = 100;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Report;
  RawParams params;
  /// Initial pre-impact velocity as a multiple of the steady value.
  double scale = 1.0;
  int steps = 10;
  SweepGrid grid;
  IntegratorConfig integrator;
  /// Sampling interval of the linearized trace (s).
  double sample_dt = 5e-3;
  std::string output_path;
};

/// Throws SpecError when the spec cannot be run.
void validate(const ExperimentSpec& spec);

/// Steady pre-impact state of the given model.
StanceState steady_pre_impact(const WheelParams& p, Model model);

/// One step of the return map on the pre-impact section: collision, then
/// stance, for a pre-impact angular velocity. nullopt if the stance fails.
std::optional<double> return_map(const WheelParams& p, const IntegratorConfig& cfg, Model model,
                                 double theta_dot_pre);

/// Central-difference slope of the return map at the model's fixed point,
/// using perturbations of +-delta_rel times the steady velocity.
double return_map_slope(const WheelParams& p, const IntegratorConfig& cfg, Model model,
                        double delta_rel);

// --- simulate ---------------------------------------------------------------

struct SimulationResult {
  WalkResult nonlinear;
  WalkResult linear;
  bool ok() const {
    return nonlinear.termination == Termination::Impact &&
           linear.termination == Termination::Impact;
  }
};

/// Both models start on the impact section at `scale` times their own
/// steady pre-impact velocity, pass through a collision and walk `steps`
/// steps with traces enabled.
SimulationResult run_simulation(const ExperimentSpec& spec);

// --- converge ---------------------------------------------------------------

struct ConvergenceRow {
  int step = 0;
  double err_pre = 0.0;   // |theta_dot-_i - theta_dot_eq-|
  double err_post = 0.0;  // |theta_dot+_i - theta_dot_eq+|
  std::optional<double> ratio_collision;  // err_post_i / err_pre_i
  std::optional<double> ratio_stance;     // err_pre_{i+1} / err_post_i
  std::optional<double> ratio_step;       // err_pre_{i+1} / err_pre_i
};

struct ConvergenceFit {
  double rate_collision = 0.0;
  double rate_stance = 0.0;
  double rate_step = 0.0;
};

struct ConvergenceTable {
  Model model = Model::Linear;
  std::vector<ConvergenceRow> rows;
  ConvergenceFit fit;
  Termination termination = Termination::Impact;
};

/// Relative error below which ratios are treated as noise, per model.
double convergence_noise_floor(Model model);

/// Error evolution from a start at `spec.scale` times the steady pre-impact
/// velocity. Ratios are left empty where either error is under the noise
/// floor. The fitted rates are geometric means of the last three usable
/// ratios, i.e. those with the smallest perturbations.
ConvergenceTable run_convergence(const ExperimentSpec& spec, Model model);

// --- sweep ------------------------------------------------------------------

struct SweepCell {
  double alpha = 0.0;
  double phi = 0.0;
  double phi_min = 0.0;
  double f_value = 0.0;
  PeriodStatus status = PeriodStatus::Finite;
  std::optional<double> t_star;
  double eigenvalue = 0.0;
};

/// alpha_res * phi_res cells ordered by alpha, then phi. Rows are evaluated
/// on up to `threads` worker threads.
std::vector<SweepCell> run_sweep(const ExperimentSpec& spec, unsigned threads = 1);

// --- compare ----------------------------------------------------------------

struct CompareRow {
  std::string quantity;
  double nonlinear = 0.0;
  double linear = 0.0;
  double rel_diff = 0.0;  // (linear - nonlinear) / |nonlinear|
};

struct CompareResult {
  std::vector<CompareRow> rows;
  bool linearization_in_range = true;
  Termination termination = Termination::Impact;
};

/// Steady period, steady velocities and measured contraction of both
/// models after `spec.steps` steps from their fixed points. Requires
/// phi > phi_min.
CompareResult run_compare(const ExperimentSpec& spec);

// --- CSV writers ------------------------------------------------------------

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceTable>& tables);
void write_convergence_fit_csv(std::ostream& os, const WheelParams& p,
                               const std::vector<ConvergenceTable>& tables);
void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);
void write_compare_csv(std::ostream& os, const CompareResult& result);

/// Opens `path` for writing and runs `body`; throws IoError on failure.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace rimwalk::harness
