#include "pospart/tridiagonal.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace pospart {

void SymTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  assert(x.size() == n && y.size() == n);
  for (std::size_t i = 0; i < n; ++i) y[i] = diag[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    y[i] += off[i] * x[i + 1];
    y[i + 1] += off[i] * x[i];
  }
}

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

double SymTridiagonal::inner(std::span<const double> x, std::span<const double> y) const {
  const std::size_t n = size();
  assert(x.size() == n && y.size() == n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * diag[i] * y[i];
  for (std::size_t i = 0; i + 1 < n; ++i) s += off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  return s;
}

SymTridiagonal& SymTridiagonal::operator+=(const SymTridiagonal& other) {
  if (other.size() != size()) throw std::invalid_argument("tridiagonal size mismatch");
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += other.diag[i];
  for (std::size_t i = 0; i < off.size(); ++i) off[i] += other.off[i];
  return *this;
}

LdlTridiagonalSolver::LdlTridiagonalSolver(SymTridiagonal matrix)
    : matrix_(std::move(matrix)), d_(matrix_.size()), l_(matrix_.size() > 0 ? matrix_.size() - 1 : 0) {
  const std::size_t n = matrix_.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  d_[0] = matrix_.diag[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(d_[i] > 0.0)) throw std::runtime_error("nonpositive pivot in LDL' factorization");
    l_[i] = matrix_.off[i] / d_[i];
    d_[i + 1] = matrix_.diag[i + 1] - matrix_.off[i] * l_[i];
  }
  if (!(d_[n - 1] > 0.0)) throw std::runtime_error("nonpositive pivot in LDL' factorization");
}

void LdlTridiagonalSolver::substitute(std::span<const double> rhs, std::span<double> x) const {
  const std::size_t n = d_.size();
  x[0] = rhs[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = rhs[i] - l_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= l_[i] * x[i + 1];
}

std::vector<double> LdlTridiagonalSolver::solve(std::span<const double> rhs) const {
  const std::size_t n = d_.size();
  if (rhs.size() != n) throw std::invalid_argument("rhs size mismatch");
  std::vector<double> x(n);
  substitute(rhs, x);
  // One refinement pass keeps the residual at the level of rounding in A*x,
  // independent of the conditioning spread between mass and stiffness scales.
  std::vector<double> r(n), dx(n);
  matrix_.apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
  substitute(r, dx);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

std::vector<double> solve_tridiagonal(const SymTridiagonal& matrix, std::span<const double> rhs) {
  return LdlTridiagonalSolver(matrix).solve(rhs);
}

}  // namespace pospart
