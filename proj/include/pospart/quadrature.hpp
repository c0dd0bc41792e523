#pragma once

#include <array>
#include <span>

namespace pospart {

// 4-point Gauss-Legendre rule on [-1,1].
inline constexpr std::array<double, 4> kGaussNodes = {
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

/// Composite 4-point Gauss-Legendre quadrature of f over [a,b] with the given
/// number of equal panels. Panel count should scale with the integrand's
/// oscillation; kinks must lie on panel boundaries for full accuracy.
template <class F>
double integrate_gl(F&& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    double s = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q)
      s += kGaussWeights[q] * f(mid + 0.5 * w * kGaussNodes[q]);
    sum += 0.5 * w * s;
  }
  return sum;
}

/// Piecewise composite rule: integrates over consecutive intervals
/// [breaks[0], breaks[1]], [breaks[1], breaks[2]], ... so that known kinks can
/// be placed on the breakpoints.
template <class F>
double integrate_gl_pieces(F&& f, std::span<const double> breaks, int panels_per_piece) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    sum += integrate_gl(f, breaks[k], breaks[k + 1], panels_per_piece);
  return sum;
}

}  // namespace pospart
