#include "rimwalk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "rimwalk/gait_trace.hpp"
#include "rimwalk/linear_dynamics.hpp"

namespace rimwalk::harness {

const char* to_string(Model m) { return m == Model::Nonlinear ? "nonlinear" : "linear"; }

namespace {

WheelParams checked_params(const RawParams& raw) {
  try {
    return make_params(raw);
  } catch (const ParamError& e) {
    throw SpecError(e.what());
  }
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  checked_params(spec.params);
  try {
    validate(spec.integrator);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  if (!(spec.scale > 0.0)) throw SpecError("scale factor must be positive");
  if (spec.steps < 1) throw SpecError("steps must be at least 1");
  if (!(spec.sample_dt > 0.0)) throw SpecError("sample interval must be positive");
  if (spec.kind == ExperimentKind::Sweep) {
    const SweepGrid& g = spec.grid;
    if (g.alpha_res < 2 || g.phi_res < 2) throw SpecError("grid resolutions must be at least 2");
    if (!(g.alpha_min >= kAlphaFloor && g.alpha_max < std::numbers::pi / 2.0 &&
          g.alpha_min < g.alpha_max)) {
      throw SpecError("alpha range must satisfy 1e-3 <= alpha_min < alpha_max < pi/2");
    }
    if (!(g.phi_offset > 0.0)) throw SpecError("phi offset must be positive");
    if (!(g.phi_max > phi_min(g.alpha_max) + g.phi_offset)) {
      throw SpecError("phi_max must exceed phi_min(alpha_max) + offset");
    }
  }
}

StanceState steady_pre_impact(const WheelParams& p, Model model) {
  return model == Model::Nonlinear ? steady_pre_impact_state(p)
                                   : linear_steady_pre_impact_state(p);
}

std::optional<double> return_map(const WheelParams& p, const IntegratorConfig& cfg, Model model,
                                 double theta_dot_pre) {
  const StanceState post = collision_map(p, {p.theta_pre(), theta_dot_pre});
  if (model == Model::Linear) {
    const auto t = linear_time_to_section(p, post);
    if (!t) return std::nullopt;
    return linear_flow(p, *t).apply(post).theta_dot;
  }
  IntegratorConfig quiet = cfg;
  quiet.trace_stride = 0;
  const StancePhaseResult r = integrate_stance(p, quiet, post);
  if (r.termination != Termination::Impact) return std::nullopt;
  return r.end_state.theta_dot;
}

double return_map_slope(const WheelParams& p, const IntegratorConfig& cfg, Model model,
                        double delta_rel) {
  const double v = steady_pre_impact(p, model).theta_dot;
  const double d = delta_rel * v;
  const auto up = return_map(p, cfg, model, v + d);
  const auto down = return_map(p, cfg, model, v - d);
  if (!up || !down) return std::nan("");
  return (*up - *down) / (2.0 * d);
}

SimulationResult run_simulation(const ExperimentSpec& spec) {
  validate(spec);
  const WheelParams p = checked_params(spec.params);

  SimulationResult out;
  IntegratorConfig cfg = spec.integrator;
  if (cfg.trace_stride == 0) cfg.trace_stride = 50;

  StanceState pre = steady_pre_impact(p, Model::Nonlinear);
  pre.theta_dot *= spec.scale;
  out.nonlinear = walk(p, cfg, collision_map(p, pre), spec.steps);

  StanceState pre_lin = steady_pre_impact(p, Model::Linear);
  pre_lin.theta_dot *= spec.scale;
  out.linear = linear_walk(p, collision_map(p, pre_lin), spec.steps, spec.sample_dt);
  return out;
}

double convergence_noise_floor(Model model) { return model == Model::Linear ? 1e-8 : 1e-6; }

ConvergenceTable run_convergence(const ExperimentSpec& spec, Model model) {
  validate(spec);
  if (spec.scale == 1.0) throw SpecError("converge needs a perturbed start (scale != 1)");
  const WheelParams p = checked_params(spec.params);

  const StanceState eq_pre = steady_pre_impact(p, model);
  const double eq_post = std::cos(p.alpha()) * eq_pre.theta_dot;
  const StanceState pre0{p.theta_pre(), spec.scale * eq_pre.theta_dot};
  const StanceState post0 = collision_map(p, pre0);

  IntegratorConfig cfg = spec.integrator;
  cfg.trace_stride = 0;
  const WalkResult w = model == Model::Linear ? linear_walk(p, post0, spec.steps)
                                              : walk(p, cfg, post0, spec.steps);

  ConvergenceTable table;
  table.model = model;
  table.termination = w.termination;
  table.rows.push_back({0, std::abs(pre0.theta_dot - eq_pre.theta_dot),
                        std::abs(post0.theta_dot - eq_post), {}, {}, {}});
  for (const StepRecord& s : w.steps) {
    table.rows.push_back({s.index, std::abs(s.pre_impact.theta_dot - eq_pre.theta_dot),
                          std::abs(s.post_impact.theta_dot - eq_post), {}, {}, {}});
  }

  const double floor = convergence_noise_floor(model) * eq_pre.theta_dot;
  auto usable = [floor](double a, double b) { return a >= floor && b >= floor; };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ConvergenceRow& r = table.rows[i];
    if (usable(r.err_pre, r.err_post)) r.ratio_collision = r.err_post / r.err_pre;
    if (i + 1 < table.rows.size()) {
      const ConvergenceRow& n = table.rows[i + 1];
      if (usable(r.err_post, n.err_pre)) r.ratio_stance = n.err_pre / r.err_post;
      if (usable(r.err_pre, n.err_pre)) r.ratio_step = n.err_pre / r.err_pre;
    }
  }

  auto fit = [&table](std::optional<double> ConvergenceRow::*field) {
    double log_sum = 0.0;
    int n = 0;
    for (auto it = table.rows.rbegin(); it != table.rows.rend() && n < 3; ++it) {
      if (const auto& v = (*it).*field) {
        log_sum += std::log(*v);
        ++n;
      }
    }
    return n > 0 ? std::exp(log_sum / n) : std::nan("");
  };
  table.fit = {fit(&ConvergenceRow::ratio_collision), fit(&ConvergenceRow::ratio_stance),
               fit(&ConvergenceRow::ratio_step)};
  return table;
}

std::vector<SweepCell> run_sweep(const ExperimentSpec& spec, unsigned threads) {
  validate(spec);
  const SweepGrid& g = spec.grid;
  const RawParams base = spec.params;
  const auto na = static_cast<std::size_t>(g.alpha_res);
  const auto nphi = static_cast<std::size_t>(g.phi_res);
  std::vector<SweepCell> cells(na * nphi);

  auto fill_row = [&](std::size_t i) {
    const double alpha =
        g.alpha_min + (g.alpha_max - g.alpha_min) * static_cast<double>(i) / (na - 1);
    const double lo = phi_min(alpha) + g.phi_offset;
    for (std::size_t j = 0; j < nphi; ++j) {
      const double phi = j + 1 == nphi ? g.phi_max
                                       : lo + (g.phi_max - lo) * static_cast<double>(j) / (nphi - 1);
      RawParams raw = base;
      raw.alpha = alpha;
      raw.phi = phi;
      const WheelParams p = make_params(raw);
      const PeriodFunction pf = period_function(p);
      cells[i * nphi + j] = {alpha, phi, pf.phi_min, pf.f_value, pf.status, pf.t_star,
                             poincare_eigenvalue(p)};
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(na)));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < na; ++i) fill_row(i);
    return cells;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < na; i += n_workers) fill_row(i);
    });
  }
  pool.clear();  // joins
  return cells;
}

CompareResult run_compare(const ExperimentSpec& spec) {
  validate(spec);
  const WheelParams p = checked_params(spec.params);
  if (!(p.phi() > phi_min(p.alpha()))) {
    throw SpecError("compare needs phi > phi_min so the linearized gait exists");
  }

  IntegratorConfig cfg = spec.integrator;
  cfg.trace_stride = 0;
  const StanceState nl_pre = steady_pre_impact(p, Model::Nonlinear);
  const StanceState li_pre = steady_pre_impact(p, Model::Linear);
  const WalkResult nl = walk(p, cfg, collision_map(p, nl_pre), spec.steps);
  const WalkResult li = linear_walk(p, collision_map(p, li_pre), spec.steps);

  CompareResult out;
  out.linearization_in_range = p.linearization_in_range();
  if (nl.termination != Termination::Impact) {
    out.termination = nl.termination;
    return out;
  }
  if (li.termination != Termination::Impact) {
    out.termination = li.termination;
    return out;
  }

  auto row = [](std::string name, double a, double b) {
    return CompareRow{std::move(name), a, b, (b - a) / std::abs(a)};
  };
  const StepRecord& a = nl.steps.back();
  const StepRecord& b = li.steps.back();
  out.rows.push_back(row("period", a.period, b.period));
  out.rows.push_back(row("theta_dot_pre", a.pre_impact.theta_dot, b.pre_impact.theta_dot));
  out.rows.push_back(row("theta_dot_post", a.post_impact.theta_dot, b.post_impact.theta_dot));
  out.rows.push_back(row("contraction", return_map_slope(p, cfg, Model::Nonlinear, 1e-3),
                         return_map_slope(p, cfg, Model::Linear, 1e-3)));
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceTable>& tables) {
  os << "model,step,err_pre,err_post,ratio_collision,ratio_stance,ratio_step\n";
  for (const ConvergenceTable& t : tables) {
    for (const ConvergenceRow& r : t.rows) {
      os << to_string(t.model) << ',' << r.step << ',' << format_number(r.err_pre) << ','
         << format_number(r.err_post) << ',' << opt(r.ratio_collision) << ','
         << opt(r.ratio_stance) << ',' << opt(r.ratio_step) << '\n';
    }
  }
}

void write_convergence_fit_csv(std::ostream& os, const WheelParams& p,
                               const std::vector<ConvergenceTable>& tables) {
  const double c = std::cos(p.alpha());
  os << "model,rate_collision,rate_stance,rate_step,cos_alpha,cos2_alpha\n";
  for (const ConvergenceTable& t : tables) {
    os << to_string(t.model) << ',' << format_number(t.fit.rate_collision) << ','
       << format_number(t.fit.rate_stance) << ',' << format_number(t.fit.rate_step) << ','
       << format_number(c) << ',' << format_number(c * c) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  os << "alpha,phi,phi_min,F,t_star,eigenvalue\n";
  for (const SweepCell& c : cells) {
    os << format_number(c.alpha) << ',' << format_number(c.phi) << ','
       << format_number(c.phi_min) << ',' << format_number(c.f_value) << ','
       << (c.t_star ? format_number(*c.t_star) : std::string(to_string(c.status))) << ','
       << format_number(c.eigenvalue) << '\n';
  }
}

void write_compare_csv(std::ostream& os, const CompareResult& result) {
  os << "quantity,nonlinear,linear,rel_diff\n";
  for (const CompareRow& r : result.rows) {
    os << r.quantity << ',' << format_number(r.nonlinear) << ',' << format_number(r.linear)
       << ',' << format_number(r.rel_diff) << '\n';
  }
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace rimwalk::harness
