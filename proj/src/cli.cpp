#include "pospart/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pospart/csv.hpp"

namespace pospart {

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table = {
      {"lemma21", Command::lemma21}, {"lemma22", Command::lemma22},
      {"lemma23", Command::lemma23}, {"series", Command::series},
      {"brute", Command::brute},     {"heat", Command::heat},
      {"ibp", Command::ibp},         {"weakdemo", Command::weakdemo},
      {"all", Command::all}};
  return table;
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_table())
    if (cmd == c) return name;
  return "?";
}

// Deterministic uniform doubles built from the raw mt19937_64 stream, so
// results do not depend on the standard library's distribution internals.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  const int k = std::min(int(uniform01(rng) * span), span - 1);
  return lo + k;
}

struct RunOutput {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  void check(std::string name, bool pass, double value, double threshold) {
    checks.push_back({std::move(name), pass, value, threshold});
  }
  void note(std::string text) { notes.push_back(std::move(text)); }
};

std::vector<int> doubling_modes(int n_max) {
  std::vector<int> modes;
  for (int n = 1; n <= n_max; n *= 2) modes.push_back(n);
  return modes;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Experiment drivers. Each writes one CSV and appends its checks.
// ---------------------------------------------------------------------------

void run_lemma21(const RunConfig& cfg, RunOutput& out) {
  const MeshPolicy policy{cfg.mesh_policy};
  CsvTable table;
  table.header = {"n",           "normV_fem", "normV_exact", "normH_fem",
                  "normH_exact", "dual_fem",  "dual_exact",  "rel_err_max"};
  double max_err = 0.0;
  for (int n : doubling_modes(cfg.n_max)) {
    const MeshPtr mesh = build_mesh(policy.elements_for(n));
    const FemOperators ops = assemble(*mesh);
    const NodalFunction psi =
        interpolate(mesh, [n](double x) { return std::cos(n * kPi * x); });
    const double v = norm_V(psi, ops);
    const double h = norm_H(psi, ops);
    const double d = dual_norm(psi, ops).dual_norm_value;
    const ModeNorms exact = exact_mode_norms(n);
    const double err = std::max({std::abs(v / exact.v - 1.0), std::abs(h / exact.h - 1.0),
                                 std::abs(d / exact.dual - 1.0)});
    max_err = std::max(max_err, err);
    table.add_row({format_int(n), format_double(v), format_double(exact.v), format_double(h),
                   format_double(exact.h), format_double(d), format_double(exact.dual),
                   format_double(err)});
  }
  write_csv(cfg.output_dir / "lemma21.csv", table);
  out.check("lemma21_max_rel_err", max_err <= 1e-3, max_err, 1e-3);
}

void run_lemma22(const RunConfig& cfg, RunOutput& out) {
  const MeshPolicy policy{cfg.mesh_policy};
  CsvTable table;
  table.header = {"n", "pairing", "bound_holds", "psi_plus_dual"};
  double pairing_min = std::numeric_limits<double>::infinity();
  double dual_min = std::numeric_limits<double>::infinity();
  double tail_dev = 0.0;
  bool all_bounds = true;
  bool has_tail = false;
  for (int n = 1; n <= cfg.n_max; ++n) {
    const MeshPtr mesh = build_mesh(policy.elements_for(n));
    const FemOperators ops = assemble(*mesh);
    const Lemma22Result r = lemma22_lower_bound(n, *mesh, ops);
    const NodalFunction psi_plus =
        positive_part(interpolate(mesh, [n](double x) { return std::cos(n * kPi * x); }));
    const double d = dual_norm(psi_plus, ops).dual_norm_value;
    pairing_min = std::min(pairing_min, r.pairing);
    dual_min = std::min(dual_min, d);
    all_bounds = all_bounds && r.bound_holds;
    if (n >= 64) {
      has_tail = true;
      tail_dev = std::max(tail_dev, std::abs(d * kPi - 1.0));
    }
    table.add_row({format_int(n), format_double(r.pairing), format_int(r.bound_holds ? 1 : 0),
                   format_double(d)});
  }
  write_csv(cfg.output_dir / "lemma22.csv", table);
  out.check("lemma22_pairing_min", pairing_min >= 0.029, pairing_min, 0.029);
  out.check("lemma22_bound_holds", all_bounds, all_bounds ? 1.0 : 0.0, 1.0);
  out.check("lemma22_dual_min", dual_min >= 0.01, dual_min, 0.01);
  if (has_tail) out.check("lemma22_dual_tail_dev", tail_dev <= 0.02, tail_dev, 0.02);
  out.note(
      "lemma22 pairing threshold 0.029 reflects 1/pi - 1/sqrt(12) = 0.0296...; "
      "this chain does not support a lower bound of 1/5.");
}

void run_lemma23(const RunConfig& cfg, RunOutput& out) {
  CsvTable table;
  table.header = {"n",        "l1_quad", "l1_exact", "deriv_l1_quad", "deriv_l1_exact",
                  "l2_quad",  "l2_exact", "deriv_l2_quad", "deriv_l2_exact", "rel_err_max"};
  const BumpFunction bump = make_default_bump();
  double max_err = 0.0;
  double support_leak = 0.0;
  const int n_top = std::min(cfg.n_max, 64);
  for (int n = 1; n <= n_top; ++n) {
    const RescaledBump b =
        rescale_bump(bump, n, cfg.exponents.amplitude, cfg.exponents.argument);
    const double q1 = b.quadrature_l1(), e1 = b.l1();
    const double qd1 = b.quadrature_deriv_l1(), ed1 = b.deriv_l1();
    const double q2 = b.quadrature_l2(), e2 = b.l2();
    const double qd2 = b.quadrature_deriv_l2(), ed2 = b.deriv_l2();
    const double err = std::max({std::abs(q1 / e1 - 1.0), std::abs(qd1 / ed1 - 1.0),
                                 std::abs(q2 / e2 - 1.0), std::abs(qd2 / ed2 - 1.0)});
    max_err = std::max(max_err, err);
    for (int k = 0; k <= 16; ++k) {
      support_leak = std::max(support_leak, std::abs(b.value(b.support_lower() * k / 16.0)));
      support_leak = std::max(
          support_leak,
          std::abs(b.value(b.support_upper() + (1.0 - b.support_upper()) * k / 16.0)));
    }
    table.add_row({format_int(n), format_double(q1), format_double(e1), format_double(qd1),
                   format_double(ed1), format_double(q2), format_double(e2),
                   format_double(qd2), format_double(ed2), format_double(err)});
  }
  write_csv(cfg.output_dir / "lemma23.csv", table);
  out.check("lemma23_max_rel_err", max_err <= 1e-4, max_err, 1e-4);
  out.check("lemma23_support_leak", support_leak <= 1e-12, support_leak, 1e-12);
  out.note(
      "lemma23 derivative L2 scaling is exactly (n(n+1))^{3/2} <= 2 sqrt(2) n^3; "
      "a sqrt(2) n^3 bound already fails at n = 1.");
}

void run_series(const RunConfig& cfg, RunOutput& out) {
  const MeshPolicy policy{cfg.mesh_policy};
  const Execution exec = cfg.parallel ? Execution::parallel : Execution::serial;
  const SeriesReport report =
      series_report(cfg.n_max, make_default_bump(), policy, cfg.exponents, exec);

  CsvTable table;
  table.header = {"n", "c_V", "c_dual", "c_plus", "S_V", "S_dual", "S_plus"};
  for (int i = 0; i < cfg.n_max; ++i) {
    const ModeNormRecord& r = report.records[i];
    table.add_row({format_int(r.n), format_double(r.c_v), format_double(r.c_dual),
                   format_double(r.c_plus), format_double(report.s_v[i]),
                   format_double(report.s_dual[i]), format_double(report.s_plus[i])});
  }
  write_csv(cfg.output_dir / "series.csv", table);

  out.check("series_sv_cauchy", report.s_v_cauchy, report.s_v_last_octave_fraction,
            kCauchyFraction);
  out.check("series_sdual_cauchy", report.s_dual_cauchy, report.s_dual_last_octave_fraction,
            kCauchyFraction);
  if (!report.plus_octaves.empty()) {
    out.check("series_splus_octave_dev", report.plus_octaves_uniform,
              report.plus_octave_max_deviation, kOctaveUniformityTol);
    std::ostringstream oct;
    oct << "series octave increments S_plus(2k)-S_plus(k):";
    for (const auto& o : report.plus_octaves)
      oct << " k=" << o.k << ": " << format_double(o.increment);
    out.note(oct.str());
  }
  if (cfg.n_max >= 128) {
    out.check("series_splus_growth", report.plus_growth_ratio >= 1.8,
              report.plus_growth_ratio, 1.8);
    out.note(
        "series_splus_growth compares S_plus(N)/S_plus(8) against 1.8; with the exact "
        "slab scaling ||phi_n'||_L1 = n(n+1) ||phi'||_L1 the n = 1 term makes S_plus(8) "
        "large and the measured ratio settles near 1.65 (a C*log N fit without offset "
        "would give log 128/log 8 = 2.33). The octave increments above carry the "
        "harmonic-growth evidence; this strict ratio check is expected to read FAIL.");
  }
}

void run_brute(const RunConfig& cfg, RunOutput& out) {
  const MeshPolicy policy{cfg.mesh_policy};
  const Execution exec = cfg.parallel ? Execution::parallel : Execution::serial;
  const int n_modes = std::min(cfg.n_max, 8);
  const BumpFunction bump = make_default_bump();

  const auto records = compute_mode_records(n_modes, bump, policy, cfg.exponents, exec);
  BruteForceSums ledger;
  for (const auto& r : records) {
    ledger.s_v += r.c_v;
    ledger.s_dual += r.c_dual;
    ledger.s_plus += r.c_plus;
  }
  const SpaceTimeGrid grid = make_space_time_grid(n_modes, policy);
  const BruteForceSums brute = brute_force_norms(n_modes, grid, bump, cfg.exponents, exec);

  CsvTable table;
  table.header = {"sum", "ledger", "brute_force", "rel_diff"};
  const auto row = [&](const char* name, double a, double b) {
    const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-300);
    table.add_row({name, format_double(a), format_double(b), format_double(rel)});
    return rel;
  };
  const double rv = row("S_V", ledger.s_v, brute.s_v);
  const double rd = row("S_dual", ledger.s_dual, brute.s_dual);
  const double rp = row("S_plus", ledger.s_plus, brute.s_plus);
  write_csv(cfg.output_dir / "brute.csv", table);

  out.check("brute_sv_rel_diff", rv <= 0.01, rv, 0.01);
  out.check("brute_sdual_rel_diff", rd <= 0.01, rd, 0.01);
  out.check("brute_splus_rel_diff", rp <= 0.01, rp, 0.01);
}

void run_heat(const RunConfig& cfg, RunOutput& out) {
  // Representative trajectory with the configured scheme.
  {
    const double tau = cfg.tau.value_or(1e-2);
    const int steps = std::max(1, int(std::lround(cfg.t_final / tau)));
    HeatProblem problem;
    problem.mesh = build_mesh(std::max(2, 2 * cfg.mesh_policy));
    problem.t_final = cfg.t_final;
    problem.num_steps = steps;
    problem.theta = cfg.theta;
    problem.mass_mode = cfg.mass_mode;
    problem.initial =
        interpolate(problem.mesh, [](double x) { return std::max(x - 0.5, 0.0); });
    const HeatSolution solution = heat_solve(problem);
    const FemOperators ops = assemble(*problem.mesh);
    const NegativePartLedger ledger = discrete_negative_part_energy(solution, ops);

    CsvTable table;
    table.header = {"step", "t", "min_nodal", "mass", "negative_energy_ledger"};
    for (std::size_t k = 0; k < solution.diagnostics.size(); ++k) {
      const StepDiagnostics& d = solution.diagnostics[k];
      table.add_row({format_int(long long(k)), format_double(d.t), format_double(d.min_nodal),
                     format_double(d.mass), format_double(ledger.per_step[k])});
    }
    write_csv(cfg.output_dir / "heat.csv", table);
  }

  // Randomized positivity suite: implicit Euler + lumped mass must stay
  // nonnegative for nonnegative data, and the negative-part energy must
  // vanish to rounding.
  {
    std::mt19937_64 rng(cfg.seed);
    double min_value = std::numeric_limits<double>::infinity();
    double ledger_max = 0.0;
    double mass_drift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      HeatProblem problem;
      problem.mesh = build_mesh(uniform_int(rng, 16, 128));
      problem.t_final = 1.0;
      problem.num_steps = uniform_int(rng, 20, 200);
      problem.theta = 1.0;
      problem.mass_mode = MassMode::lumped;
      problem.initial = interpolate(
          *&problem.mesh, [&rng](double) { return std::max(uniform(rng, -0.5, 1.0), 0.0); });
      const bool with_source = trial % 2 == 1;
      if (with_source) {
        const double a = uniform(rng, 0.0, 2.0);
        const double b = uniform(rng, 0.0, 2.0);
        problem.source = [a, b](double t, double x) {
          return (a + b * x) * (1.0 + 0.5 * std::sin(2.0 * kPi * t));
        };
      }
      const HeatSolution solution = heat_solve(problem);
      const FemOperators ops = assemble(*problem.mesh);
      min_value = std::min(min_value, check_nonnegativity(solution).min_value);
      ledger_max =
          std::max(ledger_max, discrete_negative_part_energy(solution, ops).max_value);
      if (!with_source) {
        const double m0 = solution.diagnostics.front().mass;
        for (const auto& d : solution.diagnostics)
          mass_drift = std::max(mass_drift, std::abs(d.mass - m0) / (1.0 + std::abs(m0)));
      }
    }
    out.check("heat_positivity_min", min_value >= -1e-12, min_value, -1e-12);
    out.check("heat_neg_ledger_max", ledger_max <= 1e-20, ledger_max, 1e-20);
    out.check("heat_mass_drift", mass_drift <= 1e-12, mass_drift, 1e-12);
  }

  // Manufactured solution exp(-pi^2 t) cos(pi x): first order in time for
  // implicit Euler, second order in space.
  {
    const auto exact = [](double t, double x) {
      return std::exp(-kPi * kPi * t) * std::cos(kPi * x);
    };
    const auto error_at = [&](int elements, int steps, double t_final) {
      HeatProblem problem;
      problem.mesh = build_mesh(elements);
      problem.t_final = t_final;
      problem.num_steps = steps;
      problem.theta = 1.0;
      problem.mass_mode = MassMode::consistent;
      problem.initial = interpolate(problem.mesh, [](double x) { return std::cos(kPi * x); });
      const HeatSolution solution = heat_solve(problem);
      const FemOperators ops = assemble(*problem.mesh);
      NodalFunction diff = solution.snapshots.back();
      for (int i = 0; i < problem.mesh->num_nodes(); ++i)
        diff.values[i] -= exact(t_final, problem.mesh->nodes[i]);
      return norm_H(diff, ops);
    };

    std::vector<double> log_tau, log_err;
    for (int steps : {10, 20, 40, 80}) {
      log_tau.push_back(std::log(0.1 / steps));
      log_err.push_back(std::log(error_at(512, steps, 0.1)));
    }
    const double temporal_order = least_squares_slope(log_tau, log_err);
    out.check("heat_temporal_order", temporal_order >= 0.9, temporal_order, 0.9);

    std::vector<double> log_h, log_err_h;
    for (int elements : {8, 16, 32}) {
      log_h.push_back(std::log(1.0 / elements));
      log_err_h.push_back(std::log(error_at(elements, 10000, 0.1)));
    }
    const double spatial_order = least_squares_slope(log_h, log_err_h);
    out.check("heat_spatial_order", spatial_order >= 1.8, spatial_order, 1.8);
  }

  // Crank-Nicolson with consistent mass and a sharp initial spike undershoots:
  // the continuous positivity theorem does not transfer to every scheme.
  {
    HeatProblem problem;
    problem.mesh = build_mesh(64);
    problem.t_final = 1.0;
    problem.num_steps = 10;  // tau/h^2 = 409
    problem.theta = 0.5;
    problem.mass_mode = MassMode::consistent;
    NodalFunction spike = interpolate(problem.mesh, [](double) { return 0.0; });
    spike.values[32] = 1.0;
    problem.initial = spike;
    const HeatSolution solution = heat_solve(problem);
    const double cn_min = check_nonnegativity(solution).min_value;
    out.check("heat_cn_violation", cn_min <= -1e-8, cn_min, -1e-8);
  }
}

void run_ibp(const RunConfig& cfg, RunOutput& out) {
  const MeshPtr mesh = build_mesh(16);
  const FemOperators ops = assemble(*mesh);

  // Kink at t = 1/2, which lies on cell boundaries for the taus used here.
  const TimeField aligned{[](double t, double) { return 2.0 * t - 1.0; },
                          [](double, double) { return 2.0; }};
  // Kink at t = 1/pi, never grid-aligned: exposes the O(tau) kink error.
  const TimeField offset{[](double t, double) { return 2.0 * t - 2.0 / kPi; },
                         [](double, double) { return 2.0; }};

  const double tau_check = cfg.tau.value_or(1e-4);
  const double residual_linear = ibp_check(aligned, *mesh, ops, tau_check);
  out.check("ibp_residual_linear", residual_linear <= 1e-6, residual_linear, 1e-6);

  CsvTable table;
  table.header = {"tau", "residual_aligned", "residual_offset"};
  std::vector<double> log_tau, log_res;
  for (double tau : {1e-2, 1e-3, 1e-4}) {
    const double ra = ibp_check(aligned, *mesh, ops, tau);
    const double ro = ibp_check(offset, *mesh, ops, tau);
    table.add_row({format_double(tau), format_double(ra), format_double(ro)});
    log_tau.push_back(std::log(tau));
    log_res.push_back(std::log(std::max(ro, 1e-16)));
  }
  write_csv(cfg.output_dir / "ibp.csv", table);

  const double order = least_squares_slope(log_tau, log_res);
  out.check("ibp_order", order >= 0.9, order, 0.9);
}

void run_weakdemo(const RunConfig& cfg, RunOutput& out) {
  const MeshPolicy policy{cfg.mesh_policy};
  const std::vector<int> modes = doubling_modes(cfg.n_max);
  const auto rows = weak_convergence_demo(modes, policy);

  CsvTable table;
  table.header = {"n", "sine_dual", "sine_dual_exact", "sine_plus_dual", "lobe_integral"};
  double decay = 0.0;
  double plus_min = std::numeric_limits<double>::infinity();
  double lobe_err = 0.0;
  double limit_dev = -1.0;
  bool has_plus = false;
  for (const auto& r : rows) {
    decay = std::max(decay, r.n * r.sine_dual);
    if (r.n >= 4) {
      has_plus = true;
      plus_min = std::min(plus_min, r.sine_plus_dual);
    }
    if (r.n >= 64) limit_dev = std::max(limit_dev, std::abs(r.sine_plus_dual * kPi - 1.0));
    lobe_err = std::max(lobe_err, std::abs(r.lobe_integral - 1.0 / kPi));
    table.add_row({format_int(r.n), format_double(r.sine_dual),
                   format_double(r.sine_dual_exact), format_double(r.sine_plus_dual),
                   format_double(r.lobe_integral)});
  }
  write_csv(cfg.output_dir / "weakdemo.csv", table);

  out.check("weakdemo_sine_decay", decay <= 2.0, decay, 2.0);
  if (has_plus) out.check("weakdemo_plus_min", plus_min >= 0.25, plus_min, 0.25);
  if (limit_dev >= 0.0)
    out.check("weakdemo_plus_limit_dev", limit_dev <= 0.05, limit_dev, 0.05);
  out.check("weakdemo_lobe_err", lobe_err <= 1e-6, lobe_err, 1e-6);
}

void write_summary(const RunConfig& cfg, const RunOutput& out, int passed, int total) {
  std::ofstream file(cfg.output_dir / "summary.txt", std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open " + (cfg.output_dir / "summary.txt").string());
  file << "pospart verification summary\n";
  file << "command: " << command_name(cfg.command) << "\n";
  file << "config: n_max=" << cfg.n_max << " mesh_policy=" << cfg.mesh_policy
       << " exponents=(" << format_double(cfg.exponents.coefficient) << ","
       << format_double(cfg.exponents.amplitude) << ","
       << format_double(cfg.exponents.argument) << ")"
       << " theta=" << format_double(cfg.theta)
       << " mass=" << (cfg.mass_mode == MassMode::lumped ? "lumped" : "consistent")
       << " tau=" << (cfg.tau ? format_double(*cfg.tau) : std::string("default"))
       << " t_final=" << format_double(cfg.t_final) << " seed=" << cfg.seed
       << " parallel=" << (cfg.parallel ? "on" : "off") << "\n\n";
  for (const auto& c : out.checks)
    file << "CHECK " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << ' '
         << format_double(c.value) << ' ' << format_double(c.threshold) << '\n';
  file << '\n';
  for (const auto& n : out.notes) file << "NOTE " << n << '\n';
  file << "\nRESULT " << (passed == total ? "PASS" : "FAIL") << ' ' << passed << '/' << total
       << " checks passed\n";
  file.flush();
  if (!file) throw std::runtime_error("write failed for summary.txt");
}

}  // namespace

std::string usage() {
  return "usage: pospart <command> [options]\n"
         "\n"
         "commands: lemma21 lemma22 lemma23 series brute heat ibp weakdemo all\n"
         "\n"
         "options:\n"
         "  --config FILE      flat JSON config; flags override file values\n"
         "  --n-max N          mode/series truncation (default 128)\n"
         "  --mesh-policy M    elements per mode (default 64)\n"
         "  --exponents A B C  series exponents (default 3 1 1)\n"
         "  --theta T          time-scheme parameter in [0,1] (default 1)\n"
         "  --mass MODE        consistent | lumped (default lumped)\n"
         "  --tau T            time step (default: heat 1e-2, ibp 1e-4)\n"
         "  --t-final T        final time (default 1)\n"
         "  --output-dir DIR   output directory (default ./out or POSPART_OUTPUT_DIR)\n"
         "  --seed S           seed for randomized suites (default 24601)\n"
         "  --serial           run the serial reference kernels\n";
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"positive-part regularity verification suite"};
  app.name("pospart");

  std::string command_str, mass_str, config_path, output_dir_str;
  std::vector<double> exponents;
  RunConfig cfg;
  double tau_value = 0.0;
  bool serial_flag = false;

  app.add_option("command", command_str);
  app.add_option("--config", config_path);
  app.add_option("--n-max", cfg.n_max);
  app.add_option("--mesh-policy", cfg.mesh_policy);
  app.add_option("--exponents", exponents)->expected(3);
  app.add_option("--theta", cfg.theta);
  app.add_option("--mass", mass_str);
  app.add_option("--tau", tau_value);
  app.add_option("--t-final", cfg.t_final);
  app.add_option("--output-dir", output_dir_str);
  app.add_option("--seed", cfg.seed);
  app.add_flag("--serial", serial_flag);

  std::vector<const char*> argv;
  argv.push_back("pospart");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    throw CliError(std::string("argument error: ") + e.what());
  }

  // Config file fills everything the command line left untouched.
  if (app.count("--config") > 0) {
    std::ifstream in(config_path);
    if (!in) throw CliError("cannot read config file: " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CliError("malformed config file: " + std::string(e.what()));
    }
    if (!j.is_object()) throw CliError("config file must hold a flat JSON object");
    static const std::vector<std::string> known = {
        "command", "n_max",   "mesh_policy", "exponent_a", "exponent_b", "exponent_c",
        "theta",   "mass",    "tau",         "t_final",    "output_dir", "seed",
        "parallel"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw CliError("unknown config key: " + key);
      (void)value;
    }
    try {
      if (command_str.empty() && j.contains("command"))
        command_str = j.at("command").get<std::string>();
      if (app.count("--n-max") == 0 && j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
      if (app.count("--mesh-policy") == 0 && j.contains("mesh_policy"))
        cfg.mesh_policy = j.at("mesh_policy").get<int>();
      if (app.count("--exponents") == 0) {
        if (j.contains("exponent_a")) cfg.exponents.coefficient = j.at("exponent_a").get<double>();
        if (j.contains("exponent_b")) cfg.exponents.amplitude = j.at("exponent_b").get<double>();
        if (j.contains("exponent_c")) cfg.exponents.argument = j.at("exponent_c").get<double>();
      }
      if (app.count("--theta") == 0 && j.contains("theta")) cfg.theta = j.at("theta").get<double>();
      if (mass_str.empty() && j.contains("mass")) mass_str = j.at("mass").get<std::string>();
      if (app.count("--tau") == 0 && j.contains("tau")) {
        tau_value = j.at("tau").get<double>();
        cfg.tau = tau_value;
      }
      if (app.count("--t-final") == 0 && j.contains("t_final"))
        cfg.t_final = j.at("t_final").get<double>();
      if (output_dir_str.empty() && j.contains("output_dir"))
        output_dir_str = j.at("output_dir").get<std::string>();
      if (app.count("--seed") == 0 && j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();
      if (!serial_flag && j.contains("parallel")) cfg.parallel = j.at("parallel").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw CliError("malformed config value: " + std::string(e.what()));
    }
  }

  if (app.count("--exponents") > 0) {
    cfg.exponents.coefficient = exponents[0];
    cfg.exponents.amplitude = exponents[1];
    cfg.exponents.argument = exponents[2];
  }
  if (app.count("--tau") > 0) cfg.tau = tau_value;
  if (serial_flag) cfg.parallel = false;

  if (command_str.empty()) throw CliError("missing command\n" + usage());
  const auto it = command_table().find(command_str);
  if (it == command_table().end()) throw CliError("unknown command: " + command_str);
  cfg.command = it->second;

  if (!mass_str.empty()) {
    if (mass_str == "consistent")
      cfg.mass_mode = MassMode::consistent;
    else if (mass_str == "lumped")
      cfg.mass_mode = MassMode::lumped;
    else
      throw CliError("unknown mass mode: " + mass_str);
  }

  if (!output_dir_str.empty()) {
    cfg.output_dir = output_dir_str;
  } else if (const char* env = std::getenv("POSPART_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }

  if (cfg.n_max < 1) throw CliError("--n-max must be >= 1");
  if (cfg.mesh_policy < 1) throw CliError("--mesh-policy must be >= 1");
  if (cfg.theta < 0.0 || cfg.theta > 1.0) throw CliError("--theta must lie in [0,1]");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw CliError("--tau must be > 0");
  if (!(cfg.t_final > 0.0)) throw CliError("--t-final must be > 0");
  if (!(cfg.exponents.coefficient > 0.0) || !(cfg.exponents.amplitude > 0.0) ||
      !(cfg.exponents.argument > 0.0))
    throw CliError("--exponents must be strictly positive");
  return cfg;
}

int run(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  RunOutput out;

  const bool all = cfg.command == Command::all;
  if (all || cfg.command == Command::lemma21) run_lemma21(cfg, out);
  if (all || cfg.command == Command::lemma22) run_lemma22(cfg, out);
  if (all || cfg.command == Command::lemma23) run_lemma23(cfg, out);
  if (all || cfg.command == Command::series) run_series(cfg, out);
  if (all || cfg.command == Command::brute) run_brute(cfg, out);
  if (all || cfg.command == Command::heat) run_heat(cfg, out);
  if (all || cfg.command == Command::ibp) run_ibp(cfg, out);
  if (all || cfg.command == Command::weakdemo) run_weakdemo(cfg, out);

  int passed = 0;
  for (const auto& c : out.checks) passed += c.pass ? 1 : 0;
  write_summary(cfg, out, passed, int(out.checks.size()));
  return passed == int(out.checks.size()) ? 0 : 1;
}

}  // namespace pospart
