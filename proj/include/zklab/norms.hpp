#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "zklab/grid.hpp"
#include "zklab/spacetime.hpp"

namespace zk {

enum class SpatialWeight {
  full,    ///< <(xi, eta)>^s
  x_only,  ///< <xi>^s
};

/// Exponents of an X^{s,b} norm. The norm routines read `s` and `b`;
/// `b_prime` is carried for estimates that pair a b-norm with a b'-norm.
struct NormSpec {
  double s = 0.0;
  double b = 0.0;
  double b_prime = 0.0;
  SpatialWeight spatial_weight = SpatialWeight::full;
};

/// psi_T(t) = psi(t / T) for an even C-infinity bump psi that equals 1 on
/// [-1, 1] and vanishes outside (-2, 2).
class TimeCutoff {
 public:
  explicit TimeCutoff(double T = 1.0) : T_(T) {
    if (!(T > 0.0)) throw std::invalid_argument("TimeCutoff: T must be positive");
  }
  [[nodiscard]] double T() const { return T_; }
  [[nodiscard]] double support_radius() const { return 2.0 * T_; }
  [[nodiscard]] double operator()(double t) const { return profile(t / T_); }

  /// The unscaled bump psi.
  static double profile(double t);

 private:
  double T_;
};

/// Scalar time envelopes g(t) whose product with a free solution, g(t) U(t) phi,
/// has space-time transform g^(tau - xi^3 - eta^3) phi^(xi, eta).
class TemporalProfile {
 public:
  enum class Kind {
    window,     ///< psi_T(t)
    modulated,  ///< cos(delta t) psi_T(t)
    duhamel,    ///< psi_T(t) * int_0^t cos(delta s) psi_T(s) ds
  };

  static TemporalProfile window(const TimeCutoff& c) { return {Kind::window, c, 0.0}; }
  static TemporalProfile modulated(const TimeCutoff& c, double delta) {
    return {Kind::modulated, c, delta};
  }
  /// Envelope of psi_T * Duhamel(f) for the forcing f = cos(delta s) psi_T(s) U(s) g.
  static TemporalProfile duhamel(const TimeCutoff& c, double delta) {
    return {Kind::duhamel, c, delta};
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const TimeCutoff& cutoff() const { return cutoff_; }
  [[nodiscard]] double modulation() const { return delta_; }
  [[nodiscard]] double support_radius() const { return cutoff_.support_radius(); }

  /// Values at t_start + n*dt, n = 0..count-1.
  [[nodiscard]] std::vector<double> sample(double t_start, double dt, int count) const;

 private:
  TemporalProfile(Kind k, const TimeCutoff& c, double d) : kind_(k), cutoff_(c), delta_(d) {}
  Kind kind_;
  TimeCutoff cutoff_;
  double delta_;
};

/// Thrown when a space-time grid is too coarse in time for the tau lattice to
/// resolve the characteristic surface.
class ResolutionError : public std::invalid_argument {
 public:
  ResolutionError(const std::string& what, int required_nt)
      : std::invalid_argument(what), required_nt_(required_nt) {}
  [[nodiscard]] int required_nt() const { return required_nt_; }

 private:
  int required_nt_;
};

/// Smallest nt with nt >= 4 (t1 - t0) Omega / (2 pi).
int required_time_samples(double window_length, double temporal_bandwidth);

/// ||<(xi, eta)>^s phi^||_{L2}.
double sobolev_norm(const Field2& phi, double s);

/// ||w_s phi^||_{L2} with the spatial weight chosen by `weight`.
double weighted_spatial_norm(const Field2& phi, double s, SpatialWeight weight);

/// L^p_t L^q_{x,y}: grid quadrature in space, trapezoid rule in time.
double mixed_norm(const SpaceTimeField& u, double p, double q);

/// ||<tau>^b g^||_{L2_tau} (Plancherel normalization, so b = 0 gives ||g||_{L2_t}).
double temporal_weighted_norm(const TemporalProfile& g, double b);

struct XsbAnalysis {
  double norm = 0.0;
  double temporal_bandwidth = 0.0;
  int required_nt = 0;
  /// Squared weighted contribution of every spatial mode (storage order).
  Eigen::ArrayXXd mode_energy;
};

/// X^{s,b} norm through a discrete transform in (t, x, y). The slices are one
/// period of a periodic signal, so u should vanish near both ends of the
/// window (multiply by a cutoff first). The time grid must satisfy
/// nt >= 4 (t1 - t0) Omega / (2 pi), where Omega bounds |tau| on the support
/// of u^. By default Omega = max |xi^3 + eta^3| over the spatial modes carrying
/// content, which is right for modulated free waves; for products of free
/// waves pass the sum of the factors' bandwidths instead.
XsbAnalysis xsb_analysis(const SpaceTimeField& u, const NormSpec& spec,
                         std::optional<double> temporal_bandwidth = std::nullopt);

double xsb_norm_direct(const SpaceTimeField& u, const NormSpec& spec,
                       std::optional<double> temporal_bandwidth = std::nullopt);

/// Exact factorization for u = psi_T(t) U(t) phi:
/// ||<.>^b psi_T^||_{L2} * ||w_s phi^||_{L2}.
double xsb_norm_factorized(const Field2& phi, const TimeCutoff& cutoff, const NormSpec& spec);
double xsb_norm_factorized(const Field2& phi, const TemporalProfile& profile, const NormSpec& spec);

/// Lambda^b: space-time multiplier <tau - xi^3 - eta^3>^b. Same sampling
/// requirements as xsb_norm_direct.
SpaceTimeField modulation_weight(const SpaceTimeField& u, double b,
                                 std::optional<double> temporal_bandwidth = std::nullopt);

enum class BilinearSymbol {
  x_minus,  ///< |xi1 - xi2|^s
  x_plus,   ///< |xi1 + 2 xi2|^s
  y_minus,  ///< |eta1 - eta2|^s
  y_plus,   ///< |eta1 + 2 eta2|^s
};

/// Symbol value a(first, second) for the pair of frequencies along the
/// symbol's axis.
double bilinear_symbol(BilinearSymbol symbol, double first, double second, double s);

/// Bilinear operator with symbol a: spectrum
///   (1 / (lx ly)) sum_{k1 + k2 = k} a * f^(k1) g^(k2),
/// which is the pointwise product when a = 1. Inputs must be two-thirds
/// band limited; the result is dealiased.
Field2 bilinear_pseudoproduct(const Field2& f, const Field2& g, BilinearSymbol symbol, double s);

}  // namespace zk
