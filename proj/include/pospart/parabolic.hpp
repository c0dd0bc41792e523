#pragma once

#include <functional>
#include <vector>

#include "pospart/fem.hpp"

namespace pospart {

enum class MassMode { consistent, lumped };

/// Neumann heat problem on (0,1) x (0, T]: d/dt u - u'' = f, natural boundary
/// conditions, theta-scheme in time. source(t, x) may be empty (f = 0).
struct HeatProblem {
  MeshPtr mesh;
  double t_final = 1.0;
  int num_steps = 100;
  double theta = 1.0;  // 0 explicit, 1/2 Crank-Nicolson, 1 implicit Euler
  NodalFunction initial;
  std::function<double(double, double)> source;
  MassMode mass_mode = MassMode::lumped;
};

struct StepDiagnostics {
  double t = 0.0;
  double min_nodal = 0.0;
  double mass = 0.0;      // 1' M~ u with the scheme's mass matrix
  double energy_h = 0.0;  // u' M u (consistent mass)
};

struct HeatSolution {
  std::vector<NodalFunction> snapshots;  // num_steps + 1, snapshot 0 = initial
  std::vector<StepDiagnostics> diagnostics;
  double tau = 0.0;
  double theta = 0.0;
  MassMode mass_mode = MassMode::lumped;
};

/// theta-scheme: (M~/tau + theta K) u^{k+1} = (M~/tau - (1-theta) K) u^k + M~ f^{k+theta},
/// source sampled at t_k + theta tau. Rejects NaN samples from the source.
HeatSolution heat_solve(const HeatProblem& problem);

struct NonnegativityResult {
  double min_value = 0.0;
  bool holds = false;  // min over all snapshots and nodes >= -1e-12
};

NonnegativityResult check_nonnegativity(const HeatSolution& solution);

/// Per-step value of  1/2 ||u^-(t_k)||_H^2 + sum_{j<=k} tau (u^-)' K (u^-),
/// the discrete form of the energy chain that forces u^- = 0 for
/// nonnegative data.
struct NegativePartLedger {
  std::vector<double> per_step;
  double max_value = 0.0;
};

NegativePartLedger discrete_negative_part_energy(const HeatSolution& solution,
                                                 const FemOperators& ops);

/// A space-time field with an analytic time derivative, for quadrature checks.
struct TimeField {
  std::function<double(double, double)> value;  // (t, x)
  std::function<double(double, double)> dt;
};

/// Residual of the clamped integration-by-parts identity
///   int_0^T (du/dt, u^+)_H dt = 1/2 ||u^+(T)||_H^2 - 1/2 ||u^+(0)||_H^2
/// with the left side integrated by the midpoint rule at step tau.
/// tau must divide t_final.
double ibp_check(const TimeField& field, const Mesh1D& mesh, const FemOperators& ops,
                 double tau, double t_final = 1.0);

}  // namespace pospart
