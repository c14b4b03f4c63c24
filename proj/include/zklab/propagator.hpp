#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "zklab/fft.hpp"
#include "zklab/grid.hpp"
#include "zklab/spacetime.hpp"
#include "zklab/symmetrizer.hpp"

namespace zk {

/// Free group U(t) = exp(-t(d_x^3 + d_y^3)): multiplies the coefficient at
/// (xi, eta) by exp(i t (xi^3 + eta^3)).
template <typename Scalar>
class PropagatorT {
 public:
  explicit PropagatorT(const Grid2& grid) : grid_(grid), omega_(grid.nx, grid.ny) {
    grid.validate();
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        omega_(i, j) = symbol_symmetric<long double>(grid.xi_odd(i), grid.eta_odd(j));
  }

  [[nodiscard]] const Grid2& grid() const { return grid_; }

  /// Phase speed xi^3 + eta^3 at storage index (i, j).
  [[nodiscard]] long double omega(int i, int j) const { return omega_(i, j); }

  /// exp(i t omega) with t*omega reduced modulo 2 pi in extended precision.
  [[nodiscard]] std::complex<Scalar> multiplier(double t, int i, int j) const {
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const long double theta = std::fmod(static_cast<long double>(t) * omega_(i, j), two_pi);
    return {static_cast<Scalar>(std::cos(theta)), static_cast<Scalar>(std::sin(theta))};
  }

  [[nodiscard]] SpecField2T<Scalar> evolve(SpecField2T<Scalar> F, double t) const {
    require_same_grid(grid_, F.grid, "free_evolve");
    if (t == 0.0) return F;
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) F.coeffs(i, j) *= multiplier(t, i, j);
    return F;
  }

  [[nodiscard]] Field2T<Scalar> evolve(const Field2T<Scalar>& f, double t) const {
    return fft_inverse(evolve(fft_forward(f), t));
  }

 private:
  Grid2 grid_;
  Eigen::Array<long double, Eigen::Dynamic, Eigen::Dynamic> omega_;
};

using Propagator = PropagatorT<double>;

template <typename Scalar>
SpecField2T<Scalar> free_evolve(const SpecField2T<Scalar>& F, double t) {
  return PropagatorT<Scalar>(F.grid).evolve(F, t);
}

enum class QuadratureRule { none, trapezoid, simpson, simpson_with_3_8 };

inline std::string to_string(QuadratureRule r) {
  switch (r) {
    case QuadratureRule::none: return "none";
    case QuadratureRule::trapezoid: return "trapezoid";
    case QuadratureRule::simpson: return "simpson";
    case QuadratureRule::simpson_with_3_8: return "simpson+3/8";
  }
  return "?";
}

struct QuadratureWeights {
  std::vector<double> weights;  ///< per sample, in units of the time step
  QuadratureRule rule = QuadratureRule::none;
};

/// Weights for integrating over `panels` equal panels (panels + 1 samples).
/// Even panel counts use composite Simpson; odd counts >= 3 close the last
/// three panels with Simpson's 3/8 rule; a single panel falls back to the
/// trapezoid rule.
QuadratureWeights quadrature_weights(int panels);

struct DuhamelResult {
  Field2 value;
  QuadratureRule rule = QuadratureRule::none;
  int panels = 0;
};

/// int_0^t U(t - s) f(s) ds for forcing samples on a uniform partition
/// starting at s = 0. The integrand is pulled back by U(-s) before the
/// quadrature and the sum pushed forward by U(t). `t` must coincide with a
/// sample instant.
DuhamelResult duhamel(const SpaceTimeField& forcing, double t);

}  // namespace zk
