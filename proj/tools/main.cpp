/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

// Command-line front end: analyze, design, simulate, complexity.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "psmrac/complexity.hpp"
#include "psmrac/error.hpp"
#include "psmrac/simulate.hpp"
#include "scenario_file.hpp"
#include "svg_plot.hpp"

namespace {

using namespace psmrac;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kAssumption = 3;
constexpr int kDivergence = 4;
constexpr double kDeg = 180.0 / std::numbers::pi;

std::string matrix_text(const Eigen::MatrixXd& m, const std::string& indent = "  ") {
  std::ostringstream os;
  os.precision(8);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]\n";
  }
  return os.str();
}

std::string complex_text(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string preset;
  std::string plant_file;
  std::string scenario;
  std::vector<int> states;
  double interactor_pole = 2.0;
  double gamma = 1.0;
};

int cmd_analyze(const AnalyzeOptions& o) {
  StateSpace sys;
  std::optional<PartialStateSelector> sel;
  double pole = o.interactor_pole;
  const int sources = !o.preset.empty() + !o.plant_file.empty() + !o.scenario.empty();
  if (sources != 1) throw ConfigError("analyze: give exactly one of --preset, --plant, --scenario");
  if (!o.scenario.empty()) {
    const auto f = cli::read_scenario_file(o.scenario);
    sys = f.scenario.plant;
    sel = f.scenario.sel;
  } else if (!o.preset.empty()) {
    if (o.preset != "gtm") throw ConfigError("analyze: unknown preset '" + o.preset + "'");
    sys = gtm_model();
  } else {
    sys = read_plant_file(o.plant_file);
  }
  if (!o.states.empty()) {
    std::vector<int> idx;
    for (int s : o.states) {
      if (s < 1 || s > sys.n()) throw ConfigError("analyze: --states entries must be in 1..n");
      idx.push_back(s - 1);
    }
    sel = PartialStateSelector::from_states(sys.n(), idx);
  }
  sys.validate();
  std::cout << "n = " << sys.n() << "\nM = " << sys.m() << '\n';
  bool a1 = true, a2 = true, a3 = true, a4 = true;

  const RationalMatrix g = transfer_matrix(sys);
  const bool strictly = g.strictly_proper();
  const Eigen::MatrixXcd g0 = transfer_at(sys.A, sys.B, sys.C, Complex(0.37, 1.3));
  const Eigen::JacobiSVD<Eigen::MatrixXcd> gsvd(g0);
  const auto& gsv = gsvd.singularValues();
  const bool full_rank = gsv(gsv.size() - 1) > 1e-9 * gsv(0);
  std::cout << "strictly_proper = " << (strictly ? "true" : "false") << '\n';
  std::cout << "full_rank = " << (full_rank ? "true" : "false") << '\n';
  a2 = strictly && full_rank;

  if (full_rank) {
    const auto z = transmission_zeros(sys);
    std::cout << "transmission_zeros =";
    if (z.empty()) std::cout << " (none)";
    for (const auto& v : z) std::cout << ' ' << '[' << complex_text(v) << ']';
    std::cout << '\n';
    for (const auto& v : z) a1 = a1 && v.real() < 0.0;
  } else {
    a1 = false;
  }
  std::cout << "minimum_phase = " << (a1 ? "true" : "false") << '\n';

  if (sel) {
    const int r0 = numerical_rank(sel->C0);
    std::cout << "n0 = " << sel->n0() << "\nC0_rank = " << r0 << '\n';
    if (r0 != sel->n0()) {
      a3 = false;
    } else {
      const auto obs = check_observable(sys.A, sel->C0);
      std::cout << "observability_rank = " << obs.rank << '\n';
      std::cout << "observability_ratio_normalized = " << obs.normalized_ratio << '\n';
      std::cout << "observability_ratio_raw = " << obs.raw_ratio << '\n';
      a3 = obs.observable;
    }
  }

  if (a2) {
    try {
      const InteractorBundle xi = find_diagonal_interactor(g, pole);
      std::cout << "interactor = diag{(s+" << pole << ")^l_i}, l =";
      for (int d : xi.diag_degrees) std::cout << ' ' << d;
      std::cout << "\nd_m = " << xi.d_m << '\n';
      const HighFrequencyGain h = high_freq_gain(g, xi);
      std::cout << "K_p =\n" << matrix_text(h.Kp);
      std::cout << "leading_minors =";
      for (size_t i = 0; i < h.minors.size(); ++i) {
        std::cout << ' ' << h.minors[i] << (h.signs[i] > 0 ? " (+)" : h.signs[i] < 0 ? " (-)" : " (0)");
      }
      std::cout << '\n';
      a4 = h.minors_nonzero(1e-10);
      if (a4) {
        const auto lds =
            lds_decompose(h, std::vector<double>(static_cast<size_t>(sys.m()), o.gamma));
        std::cout << "L_s =\n" << matrix_text(lds.L_s) << "D_s =\n" << matrix_text(lds.D_s)
                  << "S =\n" << matrix_text(lds.S)
                  << "lds_reconstruction_error = " << lds.reconstruction_error << '\n';
      }
    } catch (const AssumptionError& e) {
      std::cout << "interactor_error = " << e.what() << '\n';
      a2 = false;
      a4 = false;
    }
  } else {
    a4 = false;
  }
  auto verdict = [](bool b) { return b ? "PASS" : "FAIL"; };
  std::cout << "A1 minimum phase: " << verdict(a1) << '\n';
  std::cout << "A2 strictly proper, full rank, diagonal interactor: " << verdict(a2) << '\n';
  if (sel) {
    std::cout << "A3 (A, C0) observable, C0 full row rank: " << verdict(a3) << '\n';
  } else {
    std::cout << "A3 not evaluated (no selector given)\n";
  }
  std::cout << "A4 leading principal minors nonzero: " << verdict(a4) << '\n';
  return a1 && a2 && a3 && a4 ? kOk : kAssumption;
}

// ---------------------------------------------------------------- design

cli::ScenarioFile load(const std::string& scenario, int case_index) {
  if (scenario.empty() == (case_index == 0)) {
    throw ConfigError("give exactly one of --scenario or --case");
  }
  return scenario.empty() ? cli::preset_scenario(case_index) : cli::read_scenario_file(scenario);
}

void require_minimum_phase(const Scenario& sc) {
  for (const auto& z : transmission_zeros(sc.plant)) {
    if (!(z.real() < 0.0)) {
      throw AssumptionError("plant is not minimum phase (zero at " + complex_text(z) + ")");
    }
  }
}

int cmd_design(const std::string& scenario, int case_index, std::string out) {
  const auto f = load(scenario, case_index);
  const Scenario& sc = f.scenario;
  require_minimum_phase(sc);
  const MatchSolution sol = solve_matching(sc.plant, sc.sel, sc.xi, sc.fspec);
  if (out.empty()) out = f.params_path.empty() ? sc.name + ".params" : f.params_path;
  write_params_file(out, sol.params);
  std::cout << "scenario = " << sc.name << "\nn0 = " << sc.sel.n0() << "\nk = " << sc.fspec.k()
            << "\nomega_dim = " << sol.params.omega_dim() << "\nresidual = " << sol.residual
            << "\nsigma_ratio = " << sol.sigma_ratio << "\nnullity = " << sol.nullity
            << "\nparams_file = " << out << '\n';
  std::cout << "Theta3 =\n" << matrix_text(sol.params.Theta3);
  std::cout << "Theta20 =\n" << matrix_text(sol.params.Theta20);
  if (!sol.matched()) {
    std::cout << "matching: FAIL (residual >= 1e-6)\n";
    return kAssumption;
  }
  std::cout << "matching: PASS\n";
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string scenario;
  int case_index = 0;
  bool all_cases = false;
  bool frozen_truth = false;
  double dt = 0.0;
  double t_end = 0.0;
  std::string out_dir;
  double window = 0.1;
  double tol = 0.05;
};

void write_theta_csv(const std::string& path, const Trajectory& tr) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "t";
  if (!tr.theta.empty()) {
    for (Eigen::Index c = 0; c < tr.theta.front().cols(); ++c)
      for (Eigen::Index r = 0; r < tr.theta.front().rows(); ++r)
        out << ",theta_" << r + 1 << '_' << c + 1;
  }
  out << '\n';
  char buf[32];
  for (size_t k = 0; k < tr.theta.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.theta_t[k]);
    out << buf;
    const auto& th = tr.theta[k];
    for (Eigen::Index i = 0; i < th.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", th.data()[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_plots(const fs::path& dir, const Scenario& sc, const Trajectory& tr) {
  const int m = tr.m;
  for (int i = 0; i < m; ++i) {
    cli::LinePlot p;
    p.title = sc.name + ": output " + std::to_string(i + 1) + " vs reference model";
    p.x_label = "time (s)";
    p.y_label = "angle (deg, CSV in rad)";
    p.x = tr.t;
    cli::Series y{"y" + std::to_string(i + 1), {}, false};
    cli::Series ym{"ym" + std::to_string(i + 1), {}, true};
    for (size_t k = 0; k < tr.size(); ++k) {
      y.y.push_back(kDeg * tr.y[k](i));
      ym.y.push_back(kDeg * tr.ym[k](i));
    }
    p.series = {y, ym};
    cli::write_svg((dir / ("output_" + std::to_string(i + 1) + ".svg")).string(), p);
  }
  cli::LinePlot u;
  u.title = sc.name + ": control inputs";
  u.x_label = "time (s)";
  u.y_label = "deflection (deg, CSV in rad)";
  u.x = tr.t;
  for (int i = 0; i < m; ++i) {
    cli::Series s{"u" + std::to_string(i + 1), {}, false};
    for (size_t k = 0; k < tr.size(); ++k) s.y.push_back(kDeg * tr.u[k](i));
    u.series.push_back(s);
  }
  cli::write_svg((dir / "inputs.svg").string(), u);
  cli::LinePlot e;
  e.title = sc.name + ": tracking error norm";
  e.x_label = "time (s)";
  e.y_label = "|e| (deg, CSV in rad)";
  e.x = tr.t;
  cli::Series es{"|e|", {}, false};
  for (size_t k = 0; k < tr.size(); ++k) es.y.push_back(kDeg * tr.e[k].norm());
  e.series = {es};
  cli::write_svg((dir / "error_norm.svg").string(), e);
  if (!tr.V.empty() && !std::isnan(tr.V.front())) {
    cli::LinePlot v;
    v.title = sc.name + ": Lyapunov function";
    v.x_label = "time (s)";
    v.y_label = "V";
    v.x = tr.t;
    v.series = {{"V", tr.V, false}};
    v.log_y = true;
    cli::write_svg((dir / "lyapunov.svg").string(), v);
  }
}

struct RunResult {
  int code = kOk;
  std::string text;
};

RunResult run_one(cli::ScenarioFile f, const SimulateOptions& o, const fs::path& dir) {
  Scenario& sc = f.scenario;
  if (o.dt > 0.0) {
    sc.decimation = std::max(1, static_cast<int>(std::lround(sc.decimation * sc.dt / o.dt)));
    sc.dt = o.dt;
  }
  if (o.t_end > 0.0) sc.t_end = o.t_end;
  if (!sc.truth) attach_truth(sc);
  const RunMode mode = o.frozen_truth ? RunMode::frozen_at(*sc.theta_star) : RunMode::adaptive();
  const Trajectory tr = run_closed_loop(sc, mode);
  fs::create_directories(dir);
  write_trajectory_csv((dir / "trajectory.csv").string(), tr);
  write_theta_csv((dir / "theta.csv").string(), tr);
  write_plots(dir, sc, tr);
  const Metrics m = compute_metrics(tr, o.window, sc.reference.amplitude());
  std::ostringstream os;
  os << "scenario = " << sc.name << "\nmode = " << (o.frozen_truth ? "frozen-truth" : "adaptive")
     << "\ndt = " << sc.dt << "\nt_end = " << sc.t_end << "\noutput_dir = " << dir.string()
     << '\n'
     << format_metrics(m);
  const bool bounded = !tr.diverged;
  const bool tracking = tracking_ok(m, o.tol);
  if (!bounded) os << "diagnostics = " << tr.message << '\n';
  os << "bounded = " << (bounded ? "PASS" : "FAIL") << '\n';
  os << "tracking (final " << o.window * 100 << "% window < " << o.tol * 100
     << "% of amplitude) = " << (tracking ? "PASS" : "FAIL") << '\n';
  {
    std::ofstream mf(dir / "metrics.txt");
    mf << os.str();
  }
  return {bounded && tracking ? kOk : kDivergence, os.str()};
}

int cmd_simulate(const SimulateOptions& o) {
  if (o.all_cases) {
    if (!o.scenario.empty() || o.case_index != 0) {
      throw ConfigError("--all-cases excludes --scenario and --case");
    }
    const fs::path root = o.out_dir.empty() ? fs::path("out") : fs::path(o.out_dir);
    std::vector<RunResult> results(6);
    std::vector<std::thread> workers;
    for (int c = 1; c <= 6; ++c) {
      workers.emplace_back([&, c] {
        try {
          results[static_cast<size_t>(c - 1)] =
              run_one(cli::preset_scenario(c), o, root / ("case_" + std::to_string(c)));
        } catch (const AssumptionError& e) {
          results[static_cast<size_t>(c - 1)] = {kAssumption, std::string("error: ") + e.what() + "\n"};
        } catch (const std::exception& e) {
          results[static_cast<size_t>(c - 1)] = {kDivergence, std::string("error: ") + e.what() + "\n"};
        }
      });
    }
    for (auto& w : workers) w.join();
    int code = kOk;
    for (const auto& r : results) {
      std::cout << r.text << '\n';
      code = std::max(code, r.code);
    }
    return code;
  }
  auto f = load(o.scenario, o.case_index);
  fs::path dir = !o.out_dir.empty() ? fs::path(o.out_dir)
                 : !f.output_dir.empty() ? fs::path(f.output_dir)
                 : fs::path("out") / f.scenario.name;
  const RunResult r = run_one(std::move(f), o, dir);
  std::cout << r.text;
  return r.code;
}

// ---------------------------------------------------------------- complexity

struct ComplexityOptions {
  long n = 0;
  long m = 0;
  long n0 = 0;
  long n_h = 1;
  long n_e = 0;
  bool sweep = false;
  bool find_min = false;
  bool conditions = false;
  std::string csv;
};

int cmd_complexity(const ComplexityOptions& o) {
  if (o.find_min) {
    const auto r = find_min_M(o.n);
    std::cout << "n = " << r.n << "\nbest_M = " << r.best_M << "\nbest_saving = "
              << r.best_saving << "\npredicted_M = " << r.predicted_M
              << "\npredicted_saving = " << r.predicted_saving << "\nf_by_M =";
    for (long v : r.f_by_M) std::cout << ' ' << v;
    std::cout << '\n';
    return kOk;
  }
  if (o.m < 1) throw DimensionError("complexity: -M is required");
  if (o.sweep) {
    const std::string csv = sweep_n0_csv(o.n, o.m, o.n_h, o.n_e);
    if (o.csv.empty()) {
      std::cout << csv;
    } else {
      std::ofstream(o.csv) << csv;
      std::cout << "csv = " << o.csv << '\n';
    }
  } else {
    if (o.n0 < 1) throw DimensionError("complexity: --n0 is required (or --sweep-n0)");
    std::cout << format_report(complexity_report(o.n, o.m, o.n0, o.n_h, o.n_e));
  }
  if (o.conditions || o.sweep) {
    const auto rep = reduction_conditions(o.n, o.m);
    std::cout << "minimal_order_reduced = " << (rep.minimal_direct ? "true" : "false")
              << "\nminimal_order_shortcut = " << (rep.minimal_prose ? "true" : "false") << '\n';
    for (const auto& f : rep.findings) std::cout << "finding: " << f << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-state feedback MRAC: analysis, design, simulation, complexity"};
  app.require_subcommand(1);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "Audit a plant against assumptions A1-A4");
  analyze->add_option("--preset", ao.preset, "Built-in plant (gtm)");
  analyze->add_option("--plant", ao.plant_file, "Plant file with A:, B:, C: blocks");
  analyze->add_option("--scenario", ao.scenario, "Scenario file (plant and selector)");
  analyze->add_option("--states", ao.states, "Measured states, 1-based")->delimiter(',');
  analyze->add_option("--interactor-pole", ao.interactor_pole, "Interactor pole a > 0");
  analyze->add_option("--gamma", ao.gamma, "LDS magnitude gamma_i");

  std::string d_scenario, d_out;
  int d_case = 0;
  auto* design = app.add_subcommand("design", "Solve the matching equation, write Theta*");
  design->add_option("--scenario", d_scenario, "Scenario file");
  design->add_option("--case", d_case, "GTM case 1..6")->check(CLI::Range(1, 6));
  design->add_option("--out", d_out, "Parameter file");

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "Run the closed loop, write CSV, plots, metrics");
  simulate->add_option("--scenario", so.scenario, "Scenario file");
  simulate->add_option("--case", so.case_index, "GTM case 1..6")->check(CLI::Range(1, 6));
  simulate->add_flag("--all-cases", so.all_cases, "Run Cases I-VI in parallel");
  simulate->add_flag("--frozen-truth", so.frozen_truth, "Hold Theta at the matching solution");
  simulate->add_option("--dt", so.dt, "Step size override (s)");
  simulate->add_option("--t-end", so.t_end, "Horizon override (s)");
  simulate->add_option("--out-dir", so.out_dir, "Output directory");
  simulate->add_option("--window", so.window, "Final window fraction for metrics");
  simulate->add_option("--tol", so.tol, "Tracking tolerance, fraction of amplitude");

  ComplexityOptions co;
  auto* complexity = app.add_subcommand("complexity", "Parameter and integrator counts");
  complexity->add_option("-n", co.n, "Plant order")->required();
  complexity->add_option("-M", co.m, "Number of outputs");
  complexity->add_option("--n0", co.n0, "Measured functionals");
  complexity->add_option("--n-h", co.n_h, "Order of h(s)");
  complexity->add_option("--n-e", co.n_e, "Integrators for the reference model");
  complexity->add_flag("--sweep-n0", co.sweep, "Table over n0 = 1..n");
  complexity->add_flag("--find-min-M", co.find_min, "Minimise f(n, M, 1) over M");
  complexity->add_flag("--conditions", co.conditions, "Report the reduction conditions");
  complexity->add_option("--csv", co.csv, "Write the sweep table to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*analyze) return cmd_analyze(ao);
    if (*design) return cmd_design(d_scenario, d_case, d_out);
    if (*simulate) return cmd_simulate(so);
    if (*complexity) return cmd_complexity(co);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const AssumptionError& e) {
    std::cerr << "assumption failure: " << e.what() << '\n';
    return kAssumption;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kAssumption;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
