#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pospart/tridiagonal.hpp"

namespace pospart {

/// Uniform grid on (0,1): nodes 0 = x_0 < x_1 < ... < x_M = 1, x_{i+1}-x_i = h.
struct Mesh1D {
  int num_elements = 0;
  double h = 0.0;
  std::vector<double> nodes;

  int num_nodes() const { return num_elements + 1; }
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

/// Uniform mesh with at least two elements (rejects num_elements < 2).
MeshPtr build_mesh(int num_elements);

/// Coefficient vector of a continuous piecewise-linear function.
struct NodalFunction {
  MeshPtr mesh;
  std::vector<double> values;
};

template <class F>
NodalFunction interpolate(MeshPtr mesh, F&& f) {
  NodalFunction g{std::move(mesh), {}};
  g.values.reserve(g.mesh->nodes.size());
  for (double x : g.mesh->nodes) g.values.push_back(f(x));
  return g;
}

/// P1 matrices for the triple H^1 ⊃ L^2: mass M (L^2 product), stiffness K
/// (gradient product), v_product A = M + K (the full H^1 product), and the
/// lumped mass diagonal (row sums of M).
struct FemOperators {
  SymTridiagonal mass;
  SymTridiagonal stiffness;
  SymTridiagonal v_product;
  std::vector<double> lumped_mass;

  std::size_t size() const { return mass.size(); }
};

FemOperators assemble(const Mesh1D& mesh);

double norm_H(const NodalFunction& f, const FemOperators& ops);
double norm_V(const NodalFunction& f, const FemOperators& ops);
double norm_lumped(std::span<const double> v, const FemOperators& ops);

/// Riesz representative of an L^2 element f against the H^1 product:
/// z solves A z = M f, and ||f||_* = sqrt(z' M f) = ||z||_A.
struct RieszRepresentative {
  NodalFunction source;
  NodalFunction z;
  double dual_norm_value = 0.0;
};

RieszRepresentative dual_norm(const NodalFunction& f, const FemOperators& ops);

/// Low-level variant with a prefactored A-solver, for hot loops.
double dual_norm_value(std::span<const double> f, const FemOperators& ops,
                       const LdlTridiagonalSolver& v_solver);

/// Nodal clamp max(v, 0): the P1 interpolant of the positive part.
NodalFunction positive_part(const NodalFunction& f);
/// Nodal min(v, 0), so f = f^+ + f^- with f^- <= 0.
NodalFunction negative_part(const NodalFunction& f);

}  // namespace pospart
