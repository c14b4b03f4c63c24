#pragma once

#include <cmath>
#include <utility>

namespace zk {

/// Constants of the shear x' = mu x + lambda y, y' = mu x - lambda y that turns
/// the dispersion symbol xi^3 + xi eta^2 into xi'^3 + eta'^3.
template <typename Scalar = double>
struct SymmetrizerConstants {
  Scalar mu;
  Scalar lambda;
  Scalar nonlin_coeff;

  static SymmetrizerConstants standard() {
    using std::cbrt;
    using std::sqrt;
    const Scalar mu = Scalar(1) / cbrt(Scalar(4));
    return {mu, sqrt(Scalar(3)) * mu, mu};
  }

  /// Coefficient of xi'^3 + eta'^3 after the substitution; 1 for the standard choice.
  [[nodiscard]] Scalar symmetric_coefficient() const { return mu * mu * mu + mu * lambda * lambda; }
  /// Coefficient of the mixed terms; 0 for the standard choice.
  [[nodiscard]] Scalar mixed_coefficient() const { return 3 * mu * mu * mu - mu * lambda * lambda; }
};

/// Frequencies (xi, eta) dual to (x, y) for given primed frequencies.
template <typename Scalar>
std::pair<Scalar, Scalar> dual_map(Scalar xi_p, Scalar eta_p,
                                   const SymmetrizerConstants<Scalar>& c =
                                       SymmetrizerConstants<Scalar>::standard()) {
  return {c.mu * (xi_p + eta_p), c.lambda * (xi_p - eta_p)};
}

template <typename Scalar>
std::pair<Scalar, Scalar> inverse_dual_map(Scalar xi, Scalar eta,
                                           const SymmetrizerConstants<Scalar>& c =
                                               SymmetrizerConstants<Scalar>::standard()) {
  const Scalar s = xi / c.mu, d = eta / c.lambda;
  return {(s + d) / 2, (s - d) / 2};
}

/// Determinant of the linear map (xi', eta') -> (xi, eta); equals -2 mu lambda.
template <typename Scalar>
Scalar dual_map_determinant(const SymmetrizerConstants<Scalar>& c =
                                SymmetrizerConstants<Scalar>::standard()) {
  return c.mu * (-c.lambda) - c.mu * c.lambda;
}

/// Dispersion symbol of the original operator d_x^3 + d_x d_y^2.
template <typename Scalar>
constexpr Scalar symbol_original(Scalar xi, Scalar eta) {
  return xi * xi * xi + xi * eta * eta;
}

/// Dispersion symbol of d_x'^3 + d_y'^3; also the phase speed of the propagator.
template <typename Scalar>
constexpr Scalar symbol_symmetric(Scalar xi_p, Scalar eta_p) {
  return xi_p * xi_p * xi_p + eta_p * eta_p * eta_p;
}

}  // namespace zk
