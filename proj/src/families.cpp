#include "pospart/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pospart/quadrature.hpp"

namespace pospart {

namespace {
constexpr double kPi = std::numbers::pi;
}

double CosineMode::value(double x) const { return std::cos(n * kPi * x); }

double SineMode::value(double x) const { return std::sin(2.0 * kPi * n * x); }

ModeNorms exact_mode_norms(int n) {
  if (n < 1) throw std::invalid_argument("exact_mode_norms: n must be >= 1");
  const double s = n * kPi * (n * kPi) + 1.0;
  ModeNorms norms;
  norms.v = std::sqrt(s / 2.0);
  norms.h = 1.0 / std::sqrt(2.0);
  norms.dual = 1.0 / std::sqrt(2.0 * s);
  return norms;
}

double exact_sine_dual_norm(int n) {
  if (n < 1) throw std::invalid_argument("exact_sine_dual_norm: n must be >= 1");
  const double w = 2.0 * kPi * n;
  return 1.0 / std::sqrt(2.0 * (w * w + 1.0));
}

BumpFunction make_default_bump() {
  BumpFunction phi;
  phi.value = [](double t) {
    const double s = std::sin(kPi * t);
    return s * s;
  };
  phi.derivative = [](double t) { return kPi * std::sin(2.0 * kPi * t); };
  phi.l1 = 0.5;
  phi.deriv_l1 = 2.0;
  phi.l2 = std::sqrt(3.0 / 8.0);
  phi.deriv_l2 = kPi / std::sqrt(2.0);
  phi.derivative_sign_changes = {0.5};
  return phi;
}

double RescaledBump::value(double t) const {
  if (t <= support_lower() || t >= support_upper()) return 0.0;
  return amplitude * base.value(arg_scale * t - n);
}

double RescaledBump::derivative(double t) const {
  if (t <= support_lower() || t >= support_upper()) return 0.0;
  return amplitude * arg_scale * base.derivative(arg_scale * t - n);
}

double RescaledBump::l2() const { return amplitude / std::sqrt(arg_scale) * base.l2; }

double RescaledBump::deriv_l2() const { return amplitude * std::sqrt(arg_scale) * base.deriv_l2; }

namespace {

std::vector<double> support_breaks(const RescaledBump& b, bool split_at_derivative_zeros) {
  std::vector<double> breaks{b.support_lower()};
  if (split_at_derivative_zeros) {
    for (double s : b.base.derivative_sign_changes)
      if (s > 0.0 && s < 1.0) breaks.push_back((s + b.n) / b.arg_scale);
  }
  breaks.push_back(b.support_upper());
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

}  // namespace

double RescaledBump::quadrature_l1(int panels_per_piece) const {
  const auto breaks = support_breaks(*this, false);
  return integrate_gl_pieces([this](double t) { return std::abs(value(t)); }, breaks,
                             panels_per_piece);
}

double RescaledBump::quadrature_deriv_l1(int panels_per_piece) const {
  const auto breaks = support_breaks(*this, true);
  return integrate_gl_pieces([this](double t) { return std::abs(derivative(t)); }, breaks,
                             panels_per_piece);
}

double RescaledBump::quadrature_l2(int panels_per_piece) const {
  const auto breaks = support_breaks(*this, false);
  const double s = integrate_gl_pieces(
      [this](double t) {
        const double v = value(t);
        return v * v;
      },
      breaks, panels_per_piece);
  return std::sqrt(std::max(0.0, s));
}

double RescaledBump::quadrature_deriv_l2(int panels_per_piece) const {
  const auto breaks = support_breaks(*this, false);
  const double s = integrate_gl_pieces(
      [this](double t) {
        const double v = derivative(t);
        return v * v;
      },
      breaks, panels_per_piece);
  return std::sqrt(std::max(0.0, s));
}

RescaledBump rescale_bump(const BumpFunction& base, int n, double amplitude_exponent,
                          double argument_exponent) {
  if (n < 1) throw std::invalid_argument("rescale_bump: n must be >= 1");
  RescaledBump b;
  b.n = n;
  b.base = base;
  const double scale = double(n) * (n + 1.0);
  b.amplitude = std::pow(scale, amplitude_exponent);
  b.arg_scale = std::pow(scale, argument_exponent);
  if (!(b.support_lower() >= 0.0) || !(b.support_upper() <= 1.0 + 1e-12))
    throw std::invalid_argument("rescale_bump: support leaves the unit interval");
  return b;
}

double positive_lobe_integral(int n) {
  if (n < 1) throw std::invalid_argument("positive_lobe_integral: n must be >= 1");
  // Sign changes of cos(n pi x) at (k + 1/2)/n; integrate lobe by lobe.
  std::vector<double> breaks{0.0};
  for (int k = 0; k < n; ++k) breaks.push_back((k + 0.5) / n);
  breaks.push_back(1.0);
  return integrate_gl_pieces(
      [n](double x) { return std::max(std::cos(n * kPi * x), 0.0); }, breaks, 16);
}

double sine_positive_lobe_integral(int n) {
  if (n < 1) throw std::invalid_argument("sine_positive_lobe_integral: n must be >= 1");
  std::vector<double> breaks{0.0};
  for (int k = 1; k <= 2 * n; ++k) breaks.push_back(k / (2.0 * n));
  return integrate_gl_pieces(
      [n](double x) { return std::max(std::sin(2.0 * kPi * n * x), 0.0); }, breaks, 16);
}

double TestFunctions::e(double) { return 1.0; }

double TestFunctions::v_e(double x) { return std::min({4.0 * x, 1.0, 4.0 * (1.0 - x)}); }

}  // namespace pospart
