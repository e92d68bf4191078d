#include "rimwalk/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "rimwalk/gait_trace.hpp"
#include "rimwalk/harness.hpp"
#include "rimwalk/stability_analysis.hpp"

namespace rimwalk::cli {

using harness::ExperimentKind;
using harness::ExperimentSpec;
using harness::Model;

unsigned sweep_threads() {
  if (const char* env = std::getenv("RIMWALK_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

int default_steps(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Converge:
      return 40;
    case ExperimentKind::Compare:
      return 20;
    default:
      return 10;
  }
}

int cmd_simulate(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const harness::SimulationResult r = harness::run_simulation(spec);
  const WheelParams p = make_params(spec.params);

  if (!spec.output_path.empty()) {
    harness::write_file(spec.output_path + "_nonlinear.csv", [&](std::ostream& os) {
      write_nonlinear_trace_csv(os, r.nonlinear.trace);
    });
    harness::write_file(spec.output_path + "_linear.csv", [&](std::ostream& os) {
      write_linear_trace_csv(os, p, r.linear.trace);
    });
  }

  out.precision(10);
  for (const auto& [name, w] : {std::pair{"nonlinear", &r.nonlinear}, std::pair{"linear", &r.linear}}) {
    out << name << ": " << w->steps.size() << " steps, " << to_string(w->termination);
    if (!w->steps.empty()) {
      out << ", last period " << w->steps.back().period << " s, last theta_dot- "
          << w->steps.back().pre_impact.theta_dot << " rad/s";
    }
    out << '\n';
  }
  if (!spec.output_path.empty()) {
    out << "wrote " << spec.output_path << "_nonlinear.csv and " << spec.output_path
        << "_linear.csv\n";
  }
  if (!r.ok()) {
    err << "gait failure: "
        << to_string(r.nonlinear.termination != Termination::Impact ? r.nonlinear.termination
                                                                     : r.linear.termination)
        << '\n';
    return kGaitFailure;
  }
  return kSuccess;
}

int cmd_converge(const ExperimentSpec& spec, const std::string& model_name, std::ostream& out,
                 std::ostream& err) {
  std::vector<harness::ConvergenceTable> tables;
  if (model_name != "nonlinear") tables.push_back(harness::run_convergence(spec, Model::Linear));
  if (model_name != "linear") tables.push_back(harness::run_convergence(spec, Model::Nonlinear));
  const WheelParams p = make_params(spec.params);

  std::ostream& summary = spec.output_path.empty() ? err : out;
  if (spec.output_path.empty()) {
    harness::write_convergence_csv(out, tables);
  } else {
    harness::write_file(spec.output_path + ".csv",
                        [&](std::ostream& os) { harness::write_convergence_csv(os, tables); });
    harness::write_file(spec.output_path + "_fit.csv", [&](std::ostream& os) {
      harness::write_convergence_fit_csv(os, p, tables);
    });
  }

  const double c = std::cos(p.alpha());
  summary.precision(10);
  summary << "expected: cos(alpha) = " << c << ", cos^2(alpha) = " << c * c << '\n';
  int code = kSuccess;
  for (const auto& t : tables) {
    summary << to_string(t.model) << " fitted rates: collision " << t.fit.rate_collision
            << ", stance " << t.fit.rate_stance << ", step " << t.fit.rate_step << '\n';
    if (t.termination != Termination::Impact) {
      err << to_string(t.model) << " gait failure: " << to_string(t.termination) << '\n';
      code = kGaitFailure;
    }
  }
  return code;
}

int cmd_sweep(const ExperimentSpec& spec, std::ostream& out) {
  const auto cells = harness::run_sweep(spec, sweep_threads());
  if (spec.output_path.empty()) {
    harness::write_sweep_csv(out, cells);
  } else {
    harness::write_file(spec.output_path, [&](std::ostream& os) { harness::write_sweep_csv(os, cells); });
    out << "wrote " << cells.size() << " cells to " << spec.output_path << '\n';
  }
  return kSuccess;
}

int cmd_compare(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const harness::CompareResult r = harness::run_compare(spec);
  if (r.termination != Termination::Impact) {
    err << "gait failure: " << to_string(r.termination) << '\n';
    return kGaitFailure;
  }
  if (spec.output_path.empty()) {
    harness::write_compare_csv(out, r);
  } else {
    harness::write_file(spec.output_path, [&](std::ostream& os) { harness::write_compare_csv(os, r); });
    out << "wrote " << spec.output_path << '\n';
  }
  if (!r.linearization_in_range) {
    err << "warning: alpha/2 + phi > 1, outside the effective range of the linearized model\n";
  }
  return kSuccess;
}

int cmd_report(const ExperimentSpec& spec, std::ostream& out) {
  const StabilityReport r = stability_report(make_params(spec.params));
  out << report_text(r);
  if (!spec.output_path.empty()) {
    harness::write_file(spec.output_path, [&](std::ostream& os) {
      os << report_csv_header() << '\n' << report_csv_row(r) << '\n';
    });
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passive rimless wheel simulator and stability analysis", "rimwalk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value parameter file; flags override it");
  app.allow_config_extras(false);

  ExperimentSpec spec;
  std::string model_name = "both";
  app.add_option("--m", spec.params.m, "Mass (kg)")->capture_default_str();
  app.add_option("--l", spec.params.l, "Leg length (m)")->capture_default_str();
  app.add_option("--g", spec.params.g, "Gravity (m/s^2)")->capture_default_str();
  app.add_option("--alpha", spec.params.alpha, "Inter-spoke angle (rad)")->capture_default_str();
  app.add_option("--phi", spec.params.phi, "Slope angle (rad)")->capture_default_str();
  auto* steps_opt = app.add_option("--steps", spec.steps, "Number of steps");
  app.add_option("--scale", spec.scale, "Initial pre-impact velocity / steady value")
      ->capture_default_str();
  app.add_option("--out", spec.output_path, "Output file (or prefix for simulate/converge)");
  app.add_option("--dt", spec.integrator.dt, "RK4 step (s)")->capture_default_str();
  app.add_option("--event-tol", spec.integrator.event_tol, "Impact localization tolerance (rad)")
      ->capture_default_str();
  app.add_option("--max-step-time", spec.integrator.max_step_time, "Stance timeout (s)")
      ->capture_default_str();
  app.add_option("--stride", spec.integrator.trace_stride, "Nonlinear trace: keep every n-th RK4 step");
  app.add_option("--sample-dt", spec.sample_dt, "Linearized trace sampling interval (s)")
      ->capture_default_str();
  app.add_option("--alpha-min", spec.grid.alpha_min, "Sweep: smallest alpha")->capture_default_str();
  app.add_option("--alpha-max", spec.grid.alpha_max, "Sweep: largest alpha")->capture_default_str();
  app.add_option("--alpha-res", spec.grid.alpha_res, "Sweep: alpha grid points")->capture_default_str();
  app.add_option("--phi-offset", spec.grid.phi_offset, "Sweep starts at phi_min + offset")
      ->capture_default_str();
  app.add_option("--phi-max", spec.grid.phi_max, "Sweep: largest phi")->capture_default_str();
  app.add_option("--phi-res", spec.grid.phi_res, "Sweep: phi grid points per alpha")->capture_default_str();
  app.add_option("--model", model_name, "converge: linear, nonlinear or both")
      ->check(CLI::IsMember({"linear", "nonlinear", "both"}))
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Nonlinear and linearized gait traces");
  auto* converge = app.add_subcommand("converge", "Per-step error evolution and fitted rates");
  auto* sweep = app.add_subcommand("sweep", "Steady period over an (alpha, phi) grid");
  auto* compare = app.add_subcommand("compare", "Nonlinear vs linearized steady gait");
  auto* report = app.add_subcommand("report", "Closed-form stability report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidSpec;
  }

  if (*simulate) spec.kind = ExperimentKind::Simulate;
  if (*converge) spec.kind = ExperimentKind::Converge;
  if (*sweep) spec.kind = ExperimentKind::Sweep;
  if (*compare) spec.kind = ExperimentKind::Compare;
  if (*report) spec.kind = ExperimentKind::Report;
  if (steps_opt->count() == 0) spec.steps = default_steps(spec.kind);

  try {
    const ParamValidation v = validate_params(spec.params);
    if (v.warning) err << "warning: " << *v.warning << '\n';
    harness::validate(spec);
    switch (spec.kind) {
      case ExperimentKind::Simulate:
        return cmd_simulate(spec, out, err);
      case ExperimentKind::Converge:
        return cmd_converge(spec, model_name, out, err);
      case ExperimentKind::Sweep:
        return cmd_sweep(spec, out);
      case ExperimentKind::Compare:
        return cmd_compare(spec, out, err);
      case ExperimentKind::Report:
        return cmd_report(spec, out);
    }
  } catch (const harness::IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kGaitFailure;
  }
  return kSuccess;
}

}  // namespace rimwalk::cli
