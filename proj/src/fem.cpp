#include "pospart/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pospart {

MeshPtr build_mesh(int num_elements) {
  if (num_elements < 2) throw std::invalid_argument("build_mesh: need at least 2 elements");
  auto mesh = std::make_shared<Mesh1D>();
  mesh->num_elements = num_elements;
  mesh->h = 1.0 / num_elements;
  mesh->nodes.resize(num_elements + 1);
  for (int i = 0; i <= num_elements; ++i) mesh->nodes[i] = double(i) / num_elements;
  mesh->nodes.front() = 0.0;
  mesh->nodes.back() = 1.0;
  return mesh;
}

FemOperators assemble(const Mesh1D& mesh) {
  if (mesh.num_elements < 2 || int(mesh.nodes.size()) != mesh.num_elements + 1)
    throw std::invalid_argument("assemble: invalid mesh");
  const int n = mesh.num_nodes();
  const double h = mesh.h;

  FemOperators ops;
  ops.mass.diag.assign(n, 0.0);
  ops.mass.off.assign(n - 1, 0.0);
  ops.stiffness.diag.assign(n, 0.0);
  ops.stiffness.off.assign(n - 1, 0.0);

  // Element matrices: h/6 [2 1; 1 2] and 1/h [1 -1; -1 1].
  for (int e = 0; e < mesh.num_elements; ++e) {
    ops.mass.diag[e] += h / 3.0;
    ops.mass.diag[e + 1] += h / 3.0;
    ops.mass.off[e] += h / 6.0;
    ops.stiffness.diag[e] += 1.0 / h;
    ops.stiffness.diag[e + 1] += 1.0 / h;
    ops.stiffness.off[e] -= 1.0 / h;
  }

  ops.v_product = ops.mass + ops.stiffness;

  ops.lumped_mass.assign(n, 0.0);
  for (int i = 0; i < n; ++i) ops.lumped_mass[i] = ops.mass.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    ops.lumped_mass[i] += ops.mass.off[i];
    ops.lumped_mass[i + 1] += ops.mass.off[i];
  }
  return ops;
}

namespace {
void require_shape(const NodalFunction& f, const FemOperators& ops) {
  if (f.values.size() != ops.size())
    throw std::invalid_argument("nodal function / operator shape mismatch");
}
}  // namespace

double norm_H(const NodalFunction& f, const FemOperators& ops) {
  require_shape(f, ops);
  return std::sqrt(std::max(0.0, ops.mass.inner(f.values, f.values)));
}

double norm_V(const NodalFunction& f, const FemOperators& ops) {
  require_shape(f, ops);
  return std::sqrt(std::max(0.0, ops.v_product.inner(f.values, f.values)));
}

double norm_lumped(std::span<const double> v, const FemOperators& ops) {
  if (v.size() != ops.size()) throw std::invalid_argument("shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += ops.lumped_mass[i] * v[i] * v[i];
  return std::sqrt(std::max(0.0, s));
}

double dual_norm_value(std::span<const double> f, const FemOperators& ops,
                       const LdlTridiagonalSolver& v_solver) {
  if (f.size() != ops.size() || v_solver.size() != ops.size())
    throw std::invalid_argument("shape mismatch");
  const std::vector<double> mf = ops.mass.apply(f);
  const std::vector<double> z = v_solver.solve(mf);
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * mf[i];
  return std::sqrt(std::max(0.0, s));
}

RieszRepresentative dual_norm(const NodalFunction& f, const FemOperators& ops) {
  require_shape(f, ops);
  const std::vector<double> mf = ops.mass.apply(f.values);
  std::vector<double> z = solve_tridiagonal(ops.v_product, mf);
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * mf[i];
  RieszRepresentative r;
  r.source = f;
  r.z = NodalFunction{f.mesh, std::move(z)};
  r.dual_norm_value = std::sqrt(std::max(0.0, s));
  return r;
}

NodalFunction positive_part(const NodalFunction& f) {
  NodalFunction g{f.mesh, f.values};
  for (double& v : g.values) v = std::max(v, 0.0);
  return g;
}

NodalFunction negative_part(const NodalFunction& f) {
  NodalFunction g{f.mesh, f.values};
  for (double& v : g.values) v = std::min(v, 0.0);
  return g;
}

}  // namespace pospart
