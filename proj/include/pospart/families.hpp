#pragma once

#include <functional>
#include <vector>

namespace pospart {

/// cos(n*pi*x) on (0,1), the oscillating family whose positive part keeps a
/// dual norm bounded away from zero.
struct CosineMode {
  int n = 1;
  double value(double x) const;
};

/// sin(2*pi*n*x), the classical weak-null sequence used in the demo.
struct SineMode {
  int n = 1;
  double value(double x) const;
};

struct ModeNorms {
  double v = 0.0;     // sqrt((n^2 pi^2 + 1)/2)
  double h = 0.0;     // 1/sqrt(2)
  double dual = 0.0;  // 1/sqrt(2 (n^2 pi^2 + 1))
};

/// Closed-form H^1, L^2 and dual norms of cos(n*pi*x).
ModeNorms exact_mode_norms(int n);

/// Closed-form dual norm of sin(2*pi*n*x): 1/sqrt(2 (4 pi^2 n^2 + 1)).
double exact_sine_dual_norm(int n);

/// A nonnegative H^1_0(0,1) profile with closed-form norms. The derivative's
/// interior sign changes are listed so L^1 quadrature can split panels there.
struct BumpFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double l1 = 0.0;
  double deriv_l1 = 0.0;
  double l2 = 0.0;
  double deriv_l2 = 0.0;
  std::vector<double> derivative_sign_changes;
};

/// phi(t) = sin^2(pi t): ||phi||_1 = 1/2, ||phi'||_1 = 2, ||phi||_2 = sqrt(3/8),
/// ||phi'||_2 = pi/sqrt(2).
BumpFunction make_default_bump();

/// phi_n(t) = amp * phi(arg * t - n), supported on (n/arg, (n+1)/arg).
/// The standard rescaling uses amp = arg = n(n+1), giving support
/// (1/(n+1), 1/n); the exponents generalize amp = (n(n+1))^b, arg = (n(n+1))^c.
struct RescaledBump {
  int n = 1;
  BumpFunction base;
  double amplitude = 0.0;
  double arg_scale = 0.0;

  double support_lower() const { return n / arg_scale; }
  double support_upper() const { return (n + 1) / arg_scale; }
  double value(double t) const;
  double derivative(double t) const;

  // Closed-form norms from the base profile's norms.
  double l1() const { return amplitude / arg_scale * base.l1; }
  double deriv_l1() const { return amplitude * base.deriv_l1; }
  double l2() const;
  double deriv_l2() const;

  // Quadrature counterparts, restricted to the support window.
  double quadrature_l1(int panels_per_piece = 64) const;
  double quadrature_deriv_l1(int panels_per_piece = 64) const;
  double quadrature_l2(int panels_per_piece = 64) const;
  double quadrature_deriv_l2(int panels_per_piece = 64) const;
};

/// Throws if n < 1 or if the rescaled support would leave [0,1].
RescaledBump rescale_bump(const BumpFunction& base, int n,
                          double amplitude_exponent = 1.0,
                          double argument_exponent = 1.0);

/// Quadrature of the positive part of cos(n*pi*x) over (0,1); equals 1/pi for
/// every n. Panels are aligned with the sign changes.
double positive_lobe_integral(int n);

/// Same for sin(2*pi*n*x); also 1/pi.
double sine_positive_lobe_integral(int n);

/// The constant function e = 1 and the plateau v_e(x) = min(4x, 1, 4(1-x))
/// used in the dual-norm lower bound, with their exact pairing constants.
struct TestFunctions {
  static double e(double);
  static double v_e(double x);

  static constexpr double v_e_minus_e_h_sq = 1.0 / 6.0;  // ||v_e - e||_H^2
  static constexpr double v_e_v_norm_sq = 26.0 / 3.0;    // ||v_e||_V^2
};

}  // namespace pospart
