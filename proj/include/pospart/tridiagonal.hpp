#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pospart {

/// Symmetric tridiagonal matrix stored as diagonal + one off-diagonal band.
struct SymTridiagonal {
  std::vector<double> diag;  // size n
  std::vector<double> off;   // size n-1

  std::size_t size() const { return diag.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Bilinear form x' A y.
  double inner(std::span<const double> x, std::span<const double> y) const;

  SymTridiagonal& operator+=(const SymTridiagonal& other);
  friend SymTridiagonal operator+(SymTridiagonal a, const SymTridiagonal& b) {
    a += b;
    return a;
  }
};

/// LDL' factorization of an SPD tridiagonal matrix. Factorization is done
/// once at construction; solve() is reusable and safe to call concurrently.
class LdlTridiagonalSolver {
 public:
  /// Throws std::runtime_error if a pivot is not strictly positive
  /// (the matrix is not SPD).
  explicit LdlTridiagonalSolver(SymTridiagonal matrix);

  std::vector<double> solve(std::span<const double> rhs) const;
  std::size_t size() const { return d_.size(); }

 private:
  void substitute(std::span<const double> rhs, std::span<double> x) const;

  SymTridiagonal matrix_;  // kept for the iterative refinement pass
  std::vector<double> d_;  // pivots
  std::vector<double> l_;  // subdiagonal multipliers
};

/// One-shot solve of an SPD tridiagonal system.
std::vector<double> solve_tridiagonal(const SymTridiagonal& matrix,
                                      std::span<const double> rhs);

}  // namespace pospart
