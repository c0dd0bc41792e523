#pragma once

#include <span>
#include <vector>

#include "pospart/families.hpp"
#include "pospart/fem.hpp"

namespace pospart {

/// Kernel dispatch: the serial path is the reference implementation; the
/// parallel path uses OpenMP and must produce bitwise-identical results
/// (independent work items, fixed ascending reduction order).
enum class Execution { serial, parallel };

/// Mesh resolution policy: mode n is interpolated on elements_per_mode * n
/// elements, i.e. h <= 1/(64 n) at the default multiplier.
struct MeshPolicy {
  int elements_per_mode = 64;

  int elements_for(int mode) const;
};

/// Exponents of the generalized series  u = sum_n n^{-a} phi_n(t) psi_n(x)
/// with phi_n scaled by (n(n+1))^b in amplitude and (n(n+1))^c in argument.
/// Defaults (3, 1, 1) give the standard construction; c != 1 changes the
/// slab layout and is accepted only while the supports stay inside (0,1).
struct SeriesExponents {
  double coefficient = 3.0;
  double amplitude = 1.0;
  double argument = 1.0;
};

/// Per-mode contributions to the three space-time norms:
///   c_v    -> ||u_N||^2 in L^2(I;V)         (squared-norm contribution)
///   c_dual -> ||d/dt u_N||^2 in L^2(I;V*)   (squared-norm contribution)
///   c_plus -> ||d/dt u_N^+|| in L^1(I;V*)
struct ModeNormRecord {
  int n = 0;
  double c_v = 0.0;
  double c_dual = 0.0;
  double c_plus = 0.0;
  double psi_plus_dual = 0.0;  // discrete dual norm of the clamped cosine mode
  int mesh_elements = 0;
};

ModeNormRecord compute_mode_record(int n, const BumpFunction& bump,
                                   const MeshPolicy& policy = {},
                                   const SeriesExponents& exponents = {});

/// Batch of independent records for n = 1..count.
std::vector<ModeNormRecord> compute_mode_records(int count, const BumpFunction& bump,
                                                 const MeshPolicy& policy = {},
                                                 const SeriesExponents& exponents = {},
                                                 Execution exec = Execution::serial);

/// Partial sums and growth classification for the three series.
struct SeriesReport {
  struct Octave {
    int k = 0;
    double increment = 0.0;  // S_plus(2k) - S_plus(k)
  };

  std::vector<ModeNormRecord> records;
  std::vector<double> s_v;     // s_v[i] = sum of c_v through mode i+1
  std::vector<double> s_dual;
  std::vector<double> s_plus;

  std::vector<Octave> plus_octaves;
  double s_v_last_octave_fraction = 0.0;
  double s_dual_last_octave_fraction = 0.0;
  double plus_octave_max_deviation = 0.0;  // relative to the mean increment
  double plus_growth_ratio = 0.0;          // S_plus(N) / S_plus(8)

  bool s_v_cauchy = false;
  bool s_dual_cauchy = false;
  bool plus_octaves_uniform = false;
};

/// Thresholds separating a summable tail from harmonic growth at N <= 128.
inline constexpr double kCauchyFraction = 0.05;
inline constexpr double kOctaveUniformityTol = 0.25;

/// Requires N >= 8 (enough octaves to classify growth).
SeriesReport series_report(int n_modes, const BumpFunction& bump,
                           const MeshPolicy& policy = {},
                           const SeriesExponents& exponents = {},
                           Execution exec = Execution::serial);

/// Tensor grid for the brute-force oracle: one shared space mesh resolving
/// the fastest mode and a uniform time partition with at least
/// 4 * samples_per_slab cells inside the thinnest slab.
struct SpaceTimeGrid {
  MeshPtr space_mesh;
  int max_mode = 0;
  int num_time_cells = 0;
  double tau = 0.0;
  int samples_per_slab = 0;
};

SpaceTimeGrid make_space_time_grid(int n_modes, const MeshPolicy& policy = {},
                                   int samples_per_slab = 64);

struct BruteForceSums {
  double s_v = 0.0;
  double s_dual = 0.0;
  double s_plus = 0.0;
};

/// Direct space-time evaluation of the truncated series: midpoint rule in
/// time, discrete norms in space, analytic time derivatives, and the
/// positive-part derivative formed by clamping the sampled field nodally.
/// Requires n_modes <= 8 and a grid that resolves slab n_modes.
BruteForceSums brute_force_norms(int n_modes, const SpaceTimeGrid& grid,
                                 const BumpFunction& bump,
                                 const SeriesExponents& exponents = {},
                                 Execution exec = Execution::serial);

struct Lemma22Result {
  double pairing = 0.0;    // (psi_n^+, v_e)_H, discrete
  bool bound_holds = false;  // pairing >= 1/pi - 1/sqrt(12) - 10 h
};

/// Discrete form of the dual-norm lower bound: pairs the clamped cosine mode
/// against the plateau function v_e. The mesh must resolve mode n
/// (h <= 1/(64 n)).
Lemma22Result lemma22_lower_bound(int n, const Mesh1D& mesh, const FemOperators& ops);

/// Discrete dual norm of the clamped cosine mode at the policy resolution.
double discrete_psi_plus_dual(int n, const MeshPolicy& policy = {});

struct WeakConvergenceRow {
  int n = 0;
  double sine_dual = 0.0;
  double sine_dual_exact = 0.0;
  double sine_plus_dual = 0.0;
  double lobe_integral = 0.0;
};

/// For each listed n: dual norms of sin(2 pi n x) and of its positive part,
/// plus the quadrature of the positive part. The sine modes decay in the
/// dual norm while their clamped versions do not.
std::vector<WeakConvergenceRow> weak_convergence_demo(std::span<const int> modes,
                                                      const MeshPolicy& policy = {});

}  // namespace pospart
