#include "pospart/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pospart {

namespace {

SymTridiagonal scheme_mass(const FemOperators& ops, MassMode mode) {
  if (mode == MassMode::consistent) return ops.mass;
  SymTridiagonal m;
  m.diag = ops.lumped_mass;
  m.off.assign(ops.lumped_mass.size() - 1, 0.0);
  return m;
}

StepDiagnostics diagnose(double t, const std::vector<double>& u, const SymTridiagonal& mt,
                         const FemOperators& ops) {
  StepDiagnostics d;
  d.t = t;
  d.min_nodal = *std::min_element(u.begin(), u.end());
  const std::vector<double> mu = mt.apply(u);
  d.mass = 0.0;
  for (double v : mu) d.mass += v;
  d.energy_h = ops.mass.inner(u, u);
  return d;
}

}  // namespace

HeatSolution heat_solve(const HeatProblem& problem) {
  if (!problem.mesh) throw std::invalid_argument("heat_solve: missing mesh");
  if (problem.num_steps < 1) throw std::invalid_argument("heat_solve: num_steps must be >= 1");
  if (!(problem.t_final > 0.0)) throw std::invalid_argument("heat_solve: t_final must be > 0");
  if (problem.theta < 0.0 || problem.theta > 1.0)
    throw std::invalid_argument("heat_solve: theta must lie in [0,1]");
  const Mesh1D& mesh = *problem.mesh;
  if (problem.initial.values.size() != std::size_t(mesh.num_nodes()))
    throw std::invalid_argument("heat_solve: initial datum does not match the mesh");

  const FemOperators ops = assemble(mesh);
  const SymTridiagonal mt = scheme_mass(ops, problem.mass_mode);
  const double tau = problem.t_final / problem.num_steps;
  const double theta = problem.theta;
  const std::size_t n = mt.size();

  SymTridiagonal lhs, rhs;
  lhs.diag.resize(n);
  lhs.off.resize(n - 1);
  rhs.diag.resize(n);
  rhs.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    lhs.diag[i] = mt.diag[i] / tau + theta * ops.stiffness.diag[i];
    rhs.diag[i] = mt.diag[i] / tau - (1.0 - theta) * ops.stiffness.diag[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    lhs.off[i] = mt.off[i] / tau + theta * ops.stiffness.off[i];
    rhs.off[i] = mt.off[i] / tau - (1.0 - theta) * ops.stiffness.off[i];
  }
  const LdlTridiagonalSolver solver(lhs);

  HeatSolution solution;
  solution.tau = tau;
  solution.theta = theta;
  solution.mass_mode = problem.mass_mode;
  solution.snapshots.reserve(problem.num_steps + 1);
  solution.diagnostics.reserve(problem.num_steps + 1);

  std::vector<double> u = problem.initial.values;
  solution.snapshots.push_back(NodalFunction{problem.mesh, u});
  solution.diagnostics.push_back(diagnose(0.0, u, mt, ops));

  std::vector<double> b(n), f(n);
  for (int k = 0; k < problem.num_steps; ++k) {
    rhs.apply(u, b);
    if (problem.source) {
      const double ts = k * tau + theta * tau;
      for (std::size_t i = 0; i < n; ++i) {
        f[i] = problem.source(ts, mesh.nodes[i]);
        if (!std::isfinite(f[i])) throw std::runtime_error("heat_solve: source sample is not finite");
      }
      const std::vector<double> mf = mt.apply(f);
      for (std::size_t i = 0; i < n; ++i) b[i] += mf[i];
    }
    u = solver.solve(b);
    const double t = (k + 1) * tau;
    solution.snapshots.push_back(NodalFunction{problem.mesh, u});
    solution.diagnostics.push_back(diagnose(t, u, mt, ops));
  }
  return solution;
}

NonnegativityResult check_nonnegativity(const HeatSolution& solution) {
  NonnegativityResult result;
  result.min_value = std::numeric_limits<double>::infinity();
  for (const auto& d : solution.diagnostics)
    result.min_value = std::min(result.min_value, d.min_nodal);
  result.holds = result.min_value >= -1e-12;
  return result;
}

NegativePartLedger discrete_negative_part_energy(const HeatSolution& solution,
                                                 const FemOperators& ops) {
  NegativePartLedger ledger;
  ledger.per_step.reserve(solution.snapshots.size());
  double stiffness_sum = 0.0;
  for (std::size_t k = 0; k < solution.snapshots.size(); ++k) {
    const NodalFunction um = negative_part(solution.snapshots[k]);
    if (k > 0) stiffness_sum += solution.tau * ops.stiffness.inner(um.values, um.values);
    const double value = 0.5 * ops.mass.inner(um.values, um.values) + stiffness_sum;
    ledger.per_step.push_back(value);
    ledger.max_value = std::max(ledger.max_value, value);
  }
  return ledger;
}

double ibp_check(const TimeField& field, const Mesh1D& mesh, const FemOperators& ops,
                 double tau, double t_final) {
  if (!(tau > 0.0) || !(t_final > 0.0)) throw std::invalid_argument("ibp_check: bad step");
  const double cells_real = t_final / tau;
  const int cells = int(std::lround(cells_real));
  if (cells < 1 || std::abs(cells - cells_real) > 1e-8 * cells_real)
    throw std::invalid_argument("ibp_check: tau does not partition [0, t_final]");
  if (std::size_t(mesh.num_nodes()) != ops.size())
    throw std::invalid_argument("ibp_check: mesh/operator mismatch");

  const int n = mesh.num_nodes();
  std::vector<double> u(n), du(n);
  const auto sample = [&](double t) {
    for (int i = 0; i < n; ++i) {
      u[i] = field.value(t, mesh.nodes[i]);
      du[i] = field.dt(t, mesh.nodes[i]);
    }
  };

  double lhs = 0.0;
  for (int j = 0; j < cells; ++j) {
    sample((j + 0.5) * tau);
    std::vector<double> u_plus(u);
    for (double& v : u_plus) v = std::max(v, 0.0);
    lhs += tau * ops.mass.inner(du, u_plus);
  }

  const auto clamped_energy = [&](double t) {
    sample(t);
    std::vector<double> u_plus(u);
    for (double& v : u_plus) v = std::max(v, 0.0);
    return ops.mass.inner(u_plus, u_plus);
  };
  const double rhs = 0.5 * (clamped_energy(t_final) - clamped_energy(0.0));
  return std::abs(lhs - rhs);
}

}  // namespace pospart
