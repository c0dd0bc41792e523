#include "pospart/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pospart/quadrature.hpp"

namespace pospart {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMinElementsPerMode = 8;
}  // namespace

int MeshPolicy::elements_for(int mode) const {
  if (mode < 1) throw std::invalid_argument("mesh policy: mode must be >= 1");
  if (elements_per_mode < kMinElementsPerMode)
    throw std::invalid_argument("mesh policy: under-resolved (need >= 8 elements per mode)");
  return elements_per_mode * mode;
}

double discrete_psi_plus_dual(int n, const MeshPolicy& policy) {
  const MeshPtr mesh = build_mesh(policy.elements_for(n));
  const FemOperators ops = assemble(*mesh);
  const NodalFunction psi_plus =
      positive_part(interpolate(mesh, [n](double x) { return std::cos(n * kPi * x); }));
  return dual_norm(psi_plus, ops).dual_norm_value;
}

ModeNormRecord compute_mode_record(int n, const BumpFunction& bump, const MeshPolicy& policy,
                                   const SeriesExponents& exponents) {
  if (n < 1) throw std::invalid_argument("compute_mode_record: n must be >= 1");
  const RescaledBump bump_n =
      rescale_bump(bump, n, exponents.amplitude, exponents.argument);
  const ModeNorms psi = exact_mode_norms(n);
  const double weight = std::pow(double(n), -exponents.coefficient);

  ModeNormRecord rec;
  rec.n = n;
  rec.mesh_elements = policy.elements_for(n);
  // Squared-norm contributions come from the closed forms; the L^1-in-time
  // factor of the positive-part series is integrated over the slab window so
  // the record depends on the profile only through that window.
  rec.c_v = weight * weight * bump_n.l2() * bump_n.l2() * psi.v * psi.v;
  rec.c_dual = weight * weight * bump_n.deriv_l2() * bump_n.deriv_l2() * psi.dual * psi.dual;
  rec.psi_plus_dual = discrete_psi_plus_dual(n, policy);
  rec.c_plus = weight * bump_n.quadrature_deriv_l1() * rec.psi_plus_dual;
  return rec;
}

std::vector<ModeNormRecord> compute_mode_records(int count, const BumpFunction& bump,
                                                 const MeshPolicy& policy,
                                                 const SeriesExponents& exponents,
                                                 Execution exec) {
  if (count < 0) throw std::invalid_argument("compute_mode_records: negative count");
  std::vector<ModeNormRecord> records(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int n = 1; n <= count; ++n)
      records[n - 1] = compute_mode_record(n, bump, policy, exponents);
  } else {
    for (int n = 1; n <= count; ++n)
      records[n - 1] = compute_mode_record(n, bump, policy, exponents);
  }
  return records;
}

SeriesReport series_report(int n_modes, const BumpFunction& bump, const MeshPolicy& policy,
                           const SeriesExponents& exponents, Execution exec) {
  if (n_modes < 8)
    throw std::invalid_argument("series_report: need N >= 8 to classify growth");

  SeriesReport report;
  report.records = compute_mode_records(n_modes, bump, policy, exponents, exec);

  // Reduction is always serial and ascending in n so that the parallel path
  // reproduces the reference bit for bit.
  report.s_v.resize(n_modes);
  report.s_dual.resize(n_modes);
  report.s_plus.resize(n_modes);
  double sv = 0.0, sd = 0.0, sp = 0.0;
  for (int i = 0; i < n_modes; ++i) {
    sv += report.records[i].c_v;
    sd += report.records[i].c_dual;
    sp += report.records[i].c_plus;
    report.s_v[i] = sv;
    report.s_dual[i] = sd;
    report.s_plus[i] = sp;
  }

  const auto sum_at = [](const std::vector<double>& s, int n) { return s[n - 1]; };

  const int half = n_modes / 2;
  report.s_v_last_octave_fraction =
      (sum_at(report.s_v, n_modes) - sum_at(report.s_v, half)) / sum_at(report.s_v, n_modes);
  report.s_dual_last_octave_fraction =
      (sum_at(report.s_dual, n_modes) - sum_at(report.s_dual, half)) /
      sum_at(report.s_dual, n_modes);
  report.s_v_cauchy = report.s_v_last_octave_fraction <= kCauchyFraction;
  report.s_dual_cauchy = report.s_dual_last_octave_fraction <= kCauchyFraction;

  for (int k = 8; 2 * k <= n_modes; k *= 2)
    report.plus_octaves.push_back(
        {k, sum_at(report.s_plus, 2 * k) - sum_at(report.s_plus, k)});
  if (!report.plus_octaves.empty()) {
    double mean = 0.0;
    for (const auto& o : report.plus_octaves) mean += o.increment;
    mean /= double(report.plus_octaves.size());
    double dev = 0.0;
    for (const auto& o : report.plus_octaves)
      dev = std::max(dev, std::abs(o.increment - mean) / mean);
    report.plus_octave_max_deviation = dev;
  }
  report.plus_octaves_uniform = report.plus_octave_max_deviation <= kOctaveUniformityTol;
  report.plus_growth_ratio = sum_at(report.s_plus, n_modes) / sum_at(report.s_plus, 8);
  return report;
}

SpaceTimeGrid make_space_time_grid(int n_modes, const MeshPolicy& policy,
                                   int samples_per_slab) {
  if (n_modes < 0) throw std::invalid_argument("make_space_time_grid: negative mode count");
  if (samples_per_slab < 1)
    throw std::invalid_argument("make_space_time_grid: samples_per_slab must be >= 1");
  SpaceTimeGrid grid;
  grid.max_mode = n_modes;
  grid.samples_per_slab = samples_per_slab;
  grid.space_mesh = build_mesh(policy.elements_for(std::max(n_modes, 1)));
  grid.num_time_cells = std::max(1, 4 * n_modes * (n_modes + 1) * samples_per_slab);
  grid.tau = 1.0 / grid.num_time_cells;
  return grid;
}

BruteForceSums brute_force_norms(int n_modes, const SpaceTimeGrid& grid,
                                 const BumpFunction& bump, const SeriesExponents& exponents,
                                 Execution exec) {
  if (n_modes < 0) throw std::invalid_argument("brute_force_norms: negative mode count");
  if (n_modes > 8)
    throw std::invalid_argument("brute_force_norms: limited to N <= 8 (cost control)");
  if (n_modes == 0) return {};
  if (grid.max_mode < n_modes || grid.num_time_cells < 4 * n_modes * (n_modes + 1))
    throw std::invalid_argument("brute_force_norms: grid does not resolve the thinnest slab");

  const Mesh1D& mesh = *grid.space_mesh;
  const int num_nodes = mesh.num_nodes();
  const FemOperators ops = assemble(mesh);
  const LdlTridiagonalSolver v_solver(ops.v_product);

  // Per-mode ingredients: nodal cosine tables, slab profiles, weights.
  std::vector<std::vector<double>> psi(n_modes);
  std::vector<RescaledBump> bumps;
  std::vector<double> weights(n_modes);
  for (int m = 1; m <= n_modes; ++m) {
    psi[m - 1].resize(num_nodes);
    for (int i = 0; i < num_nodes; ++i) psi[m - 1][i] = std::cos(m * kPi * mesh.nodes[i]);
    bumps.push_back(rescale_bump(bump, m, exponents.amplitude, exponents.argument));
    weights[m - 1] = std::pow(double(m), -exponents.coefficient);
  }

  const int cells = grid.num_time_cells;
  std::vector<double> sample_v(cells), sample_dual(cells), sample_plus(cells);

  const auto evaluate_cell = [&](int j) {
    const double t = (j + 0.5) * grid.tau;
    std::vector<double> u(num_nodes, 0.0), du(num_nodes, 0.0), du_plus(num_nodes);
    for (int m = 0; m < n_modes; ++m) {
      const double a = weights[m] * bumps[m].value(t);
      const double b = weights[m] * bumps[m].derivative(t);
      if (a == 0.0 && b == 0.0) continue;
      const std::vector<double>& mode = psi[m];
      for (int i = 0; i < num_nodes; ++i) {
        u[i] += a * mode[i];
        du[i] += b * mode[i];
      }
    }
    // d/dt of the clamped field: keep the derivative where the sample is
    // positive, zero elsewhere.
    for (int i = 0; i < num_nodes; ++i) du_plus[i] = u[i] > 0.0 ? du[i] : 0.0;

    sample_v[j] = ops.v_product.inner(u, u);
    const double dd = dual_norm_value(du, ops, v_solver);
    sample_dual[j] = dd * dd;
    sample_plus[j] = dual_norm_value(du_plus, ops, v_solver);
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < cells; ++j) evaluate_cell(j);
  } else {
    for (int j = 0; j < cells; ++j) evaluate_cell(j);
  }

  BruteForceSums sums;
  for (int j = 0; j < cells; ++j) {
    sums.s_v += grid.tau * sample_v[j];
    sums.s_dual += grid.tau * sample_dual[j];
    sums.s_plus += grid.tau * sample_plus[j];
  }
  return sums;
}

Lemma22Result lemma22_lower_bound(int n, const Mesh1D& mesh, const FemOperators& ops) {
  if (n < 1) throw std::invalid_argument("lemma22_lower_bound: n must be >= 1");
  if (mesh.h > 1.0 / (64.0 * n) + 1e-15)
    throw std::invalid_argument("lemma22_lower_bound: mesh does not resolve mode n");
  if (std::size_t(mesh.num_nodes()) != ops.size())
    throw std::invalid_argument("lemma22_lower_bound: mesh/operator mismatch");

  MeshPtr mesh_ptr = std::make_shared<Mesh1D>(mesh);
  const NodalFunction psi_plus =
      positive_part(interpolate(mesh_ptr, [n](double x) { return std::cos(n * kPi * x); }));
  const NodalFunction v_e = interpolate(mesh_ptr, TestFunctions::v_e);

  Lemma22Result result;
  result.pairing = ops.mass.inner(psi_plus.values, v_e.values);
  const double bound = 1.0 / kPi - 1.0 / std::sqrt(12.0) - 10.0 * mesh.h;
  result.bound_holds = result.pairing >= bound;
  return result;
}

std::vector<WeakConvergenceRow> weak_convergence_demo(std::span<const int> modes,
                                                      const MeshPolicy& policy) {
  std::vector<WeakConvergenceRow> rows;
  rows.reserve(modes.size());
  for (int n : modes) {
    if (n < 1) throw std::invalid_argument("weak_convergence_demo: modes must be >= 1");
    // sin(2 pi n x) oscillates like cosine mode 2n; resolve accordingly.
    const MeshPtr mesh = build_mesh(policy.elements_for(2 * n));
    const FemOperators ops = assemble(*mesh);
    const NodalFunction sine =
        interpolate(mesh, [n](double x) { return std::sin(2.0 * kPi * n * x); });
    WeakConvergenceRow row;
    row.n = n;
    row.sine_dual = dual_norm(sine, ops).dual_norm_value;
    row.sine_dual_exact = exact_sine_dual_norm(n);
    row.sine_plus_dual = dual_norm(positive_part(sine), ops).dual_norm_value;
    row.lobe_integral = sine_positive_lobe_integral(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pospart
