#pragma once

#include <cmath>
#include <stdexcept>

#include "zklab/fft.hpp"
#include "zklab/grid.hpp"

namespace zk {

enum class Axis { x, y };

enum class Potential { riesz_x, riesz_y, riesz_xy, bessel_x, bessel_y, bessel_xy };

enum class Dyadic {
  P_k,        ///< |freq| <= 2^k
  P_delta_k,  ///< 2^k < |freq| <= 2^(k+1)
  P_ge1,      ///< identity minus P_0
};

inline double japanese_bracket(double a) { return std::sqrt(1.0 + a * a); }

/// Multiplies every coefficient by symbol(i, j), evaluated at storage indices.
template <typename Scalar, typename Symbol>
SpecField2T<Scalar> apply_multiplier(SpecField2T<Scalar> F, Symbol&& symbol) {
  for (int j = 0; j < F.grid.ny; ++j)
    for (int i = 0; i < F.grid.nx; ++i) F.coeffs(i, j) *= symbol(i, j);
  return F;
}

/// Multiplier (i xi)^order or (i eta)^order, order in {1, 2, 3}.
template <typename Scalar>
SpecField2T<Scalar> apply_derivative(const SpecField2T<Scalar>& F, Axis axis, int order) {
  using C = std::complex<Scalar>;
  if (order < 1 || order > 3)
    throw std::invalid_argument("apply_derivative: order must be 1, 2 or 3");
  const Grid2& g = F.grid;
  const bool odd = order % 2 == 1;
  return apply_multiplier(F, [&](int i, int j) {
    const double k = axis == Axis::x ? (odd ? g.xi_odd(i) : g.xi(i))
                                     : (odd ? g.eta_odd(j) : g.eta(j));
    C m(1);
    for (int n = 0; n < order; ++n) m *= C(0, static_cast<Scalar>(k));
    return m;
  });
}

/// Riesz (|.|^s) and Bessel (<.>^s) potentials in x, y, or both variables.
/// A Riesz symbol with s > 0 vanishes at the origin; with s < 0 it is
/// singular there and the (0, 0) coefficient must already be zero.
template <typename Scalar>
SpecField2T<Scalar> apply_potential(const SpecField2T<Scalar>& F, Potential kind, double s) {
  const Grid2& g = F.grid;
  const bool riesz =
      kind == Potential::riesz_x || kind == Potential::riesz_y || kind == Potential::riesz_xy;
  if (riesz && s < 0.0 && F.coeffs(0, 0) != std::complex<Scalar>(0))
    throw std::domain_error(
        "apply_potential: Riesz symbol with s < 0 is singular at the zero frequency "
        "and the field has nonzero mean");
  return apply_multiplier(F, [&](int i, int j) -> Scalar {
    const double xi = g.xi(i), eta = g.eta(j);
    double a = 0.0;
    switch (kind) {
      case Potential::riesz_x:
      case Potential::bessel_x: a = std::abs(xi); break;
      case Potential::riesz_y:
      case Potential::bessel_y: a = std::abs(eta); break;
      case Potential::riesz_xy:
      case Potential::bessel_xy: a = std::hypot(xi, eta); break;
    }
    if (!riesz) return static_cast<Scalar>(std::pow(1.0 + a * a, 0.5 * s));
    if (s == 0.0) return Scalar(1);
    // Zero-frequency entries of a Riesz symbol with s < 0 only ever multiply zeros.
    if (a == 0.0) return Scalar(0);
    return static_cast<Scalar>(std::pow(a, s));
  });
}

/// Sharp Littlewood-Paley cutoffs along one axis.
template <typename Scalar>
SpecField2T<Scalar> dyadic_project(const SpecField2T<Scalar>& F, Axis axis, Dyadic kind, int k) {
  const Grid2& g = F.grid;
  const double lo = std::ldexp(1.0, k);
  const double hi = std::ldexp(1.0, k + 1);
  return apply_multiplier(F, [&](int i, int j) -> Scalar {
    const double a = axis == Axis::x ? std::abs(g.xi(i)) : std::abs(g.eta(j));
    switch (kind) {
      case Dyadic::P_k: return a <= lo ? 1 : 0;
      case Dyadic::P_delta_k: return (a > lo && a <= hi) ? 1 : 0;
      case Dyadic::P_ge1: return a > 1.0 ? 1 : 0;
    }
    return 0;
  });
}

/// Two-thirds rule: zero every coefficient with 3|k| > nx or 3|m| > ny.
template <typename Scalar>
SpecField2T<Scalar> dealias(const SpecField2T<Scalar>& F) {
  const Grid2& g = F.grid;
  return apply_multiplier(F, [&](int i, int j) -> Scalar {
    return (3 * std::abs(g.kx(i)) > g.nx || 3 * std::abs(g.ky(j)) > g.ny) ? 0 : 1;
  });
}

/// True when every coefficient outside the two-thirds band is exactly zero.
template <typename Scalar>
bool is_dealiased(const SpecField2T<Scalar>& F) {
  const Grid2& g = F.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if ((3 * std::abs(g.kx(i)) > g.nx || 3 * std::abs(g.ky(j)) > g.ny) &&
          F.coeffs(i, j) != std::complex<Scalar>(0))
        return false;
  return true;
}

/// Dealiased pointwise product of two fields.
template <typename Scalar>
Field2T<Scalar> dealiased_product(const Field2T<Scalar>& f, const Field2T<Scalar>& g) {
  require_same_grid(f.grid, g.grid, "dealiased_product");
  Field2T<Scalar> prod(f.grid, f.values * g.values);
  return fft_inverse(dealias(fft_forward(prod)));
}

}  // namespace zk
