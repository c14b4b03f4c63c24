#pragma once

#include <string>
#include <vector>

#include "zklab/grid.hpp"
#include "zklab/spacetime.hpp"

namespace zk {

/// Settings for solving v_t + (d_x^3 + d_y^3) v = 4^{-1/3} (d_x + d_y)(v^2) on [0, T].
struct SolveConfig {
  Grid2 grid{32, 32};
  double T = 0.5;
  int nt = 64;  ///< time panels; the trajectory has nt + 1 samples
  int max_picard_iters = 50;
  double picard_tol = 1e-12;
  bool nonlinearity_on = true;

  void validate() const;
  [[nodiscard]] double dt() const { return T / nt; }
};

enum class SolveStatus { converged, divergent };

struct SolveResult {
  SpaceTimeField trajectory;
  std::vector<double> picard_residuals;  ///< sup_t L2 change per iteration (Picard only)
  double l2_drift = 0.0;                 ///< |M(u(T)) - M(phi)| / M(phi), M = ||.||^2
  double energy_drift = 0.0;             ///< |E(u(T)) - E(phi)| / |E(phi)|
  SolveStatus status = SolveStatus::converged;
  std::string method;
};

/// 4^{-1/3} (d_x + d_y) of the dealiased square of v.
Field2 nonlinearity(const Field2& v);

/// Hamiltonian of the symmetrized flow,
///   E(v) = int (v_x^2 - v_x v_y + v_y^2) / 2 + 4^{-1/3} v^3 / 3 dx dy.
double energy(const Field2& v);

/// Picard iteration u <- U(t) phi + I(u) on the sampled trajectory, where
/// I(u)(t) = int_0^t U(t - s) N(u(s)) ds is evaluated at every sample instant.
/// Stops when the sup-in-time L2 change drops below picard_tol; otherwise the
/// result is flagged divergent. Throws std::runtime_error on non-finite values.
SolveResult picard_solve(const Field2& phi, const SolveConfig& cfg);

/// Integrating-factor RK4 on the same time partition.
SolveResult reference_solve(const Field2& phi, const SolveConfig& cfg);

/// ||u(t) - U(t) phi - I(u)(t)||_{L2} maximized over the samples.
double fixed_point_defect(const SpaceTimeField& u, const Field2& phi);

}  // namespace zk
