#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zklab/grid.hpp"
#include "zklab/norms.hpp"
#include "zklab/spacetime.hpp"

namespace zk {

// ---------------------------------------------------------------------------
// Random data and free waves

/// Seeded ensemble description. Members are band limited to |k| <= band_x,
/// |m| <= band_y and carry Gaussian coefficients with <(k, m)>^-2 decay.
struct Ensemble {
  int size = 100;
  std::uint64_t seed = 1;
  int band_x = 8;
  int band_y = 8;
};

/// Member `index` of the ensemble, sampled on `g` with unit L2 norm. The
/// coefficients depend only on (seed, index, k, m), so the same function is
/// produced on every grid that resolves the band.
Field2 random_field(const Grid2& g, const Ensemble& e, std::uint64_t index);

/// A free solution U(t) phi stored through its nonzero modes only, which makes
/// sampling many time slices cheap.
class FreeWave {
 public:
  explicit FreeWave(const Field2& phi);

  [[nodiscard]] const Grid2& grid() const { return grid_; }
  [[nodiscard]] SpecField2 spectrum(double t) const;
  [[nodiscard]] Field2 field(double t) const;
  /// max |xi^3 + eta^3| over the nonzero modes.
  [[nodiscard]] double bandwidth() const { return bandwidth_; }

 private:
  struct Mode {
    int i, j;
    std::complex<double> coeff;
    long double omega;
  };
  Grid2 grid_;
  std::vector<Mode> modes_;
  double bandwidth_ = 0.0;
};

/// g(t) U(t) phi sampled at nt points on [t0, t1] for the given envelope.
SpaceTimeField sample_free_solution(const FreeWave& w, const TemporalProfile& g, double t0, double t1,
                                    int nt);

// ---------------------------------------------------------------------------
// Resonance and frequency regions

/// Three space-time frequencies tied by (tau, xi, eta) = sum of the two factors.
struct FrequencyTriple {
  double xi = 0, eta = 0, tau = 0;
  double xi1 = 0, eta1 = 0, tau1 = 0;
  double xi2 = 0, eta2 = 0, tau2 = 0;

  /// Output frequency filled in from the two factors.
  static FrequencyTriple from_factors(double xi1, double eta1, double tau1, double xi2, double eta2,
                                      double tau2);
  /// Factors placed on the characteristic surface shifted by the modulations
  /// sigma1, sigma2.
  static FrequencyTriple on_surface(double xi1, double eta1, double xi2, double eta2,
                                    double sigma1 = 0.0, double sigma2 = 0.0);

  [[nodiscard]] double sigma0() const;
  [[nodiscard]] double sigma1() const;
  [[nodiscard]] double sigma2() const;
  /// Relative violation of the convolution constraint.
  [[nodiscard]] double constraint_defect() const;
  /// The same triple with the roles of x and y exchanged when |eta| > |xi|.
  [[nodiscard]] FrequencyTriple symmetry_reduced() const;
};

struct ResonanceCheck {
  double lhs = 0;        ///< |sigma0 - sigma1 - sigma2|
  double rhs = 0;        ///< 3 |xi xi1 xi2 + eta eta1 eta2|
  double residual = 0;   ///< |lhs - rhs|
  double signed_difference = 0;  ///< sigma0 - sigma1 - sigma2 = -3 (xi xi1 xi2 + eta eta1 eta2)
};

/// Throws std::invalid_argument if the convolution constraint fails.
ResonanceCheck resonance_check(const FrequencyTriple& t);

enum class Region { R1, R2, R3, R4, outside };
std::string to_string(Region r);

/// Label on the branch |eta| <= |xi| with numeric comparison factor c0:
///   R1  |xi| <= c0 |xi1 - xi2|
///   R2  |eta1| >= |xi| / c0
///   R3  |eta2| >= |xi| / c0
///   R4  |xi|, |xi1|, |xi2| pairwise within a factor c0
/// tested in that order. Throws std::invalid_argument if |eta| > |xi|.
Region region_classify(const FrequencyTriple& t, double c0 = 4.0);

/// (<sigma0> + <sigma1> + <sigma2>) / |xi|^3. Throws unless the triple is in R4.
double resonance_inequality_check(const FrequencyTriple& t, double c0 = 4.0);

// ---------------------------------------------------------------------------
// Reports

struct ThresholdCheck {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation;  ///< "<", "<=", ">=", ">"
  bool passed = false;
};

ThresholdCheck make_check(std::string name, double value, std::string relation, double bound);

struct EstimateReport {
  std::string name;
  std::uint64_t seed = 0;
  int ensemble_size = 0;
  std::vector<double> ratios;  ///< LHS / RHS per sample, on the base grid
  double max_ratio = 0;
  double refinement_drift = 0;  ///< |max_ratio(refined) - max_ratio(base)| / max_ratio(base)
  std::optional<double> scaling_slope;
  std::map<std::string, double> params;
  std::map<std::string, std::string> grids;
  std::map<std::string, double> metrics;
  std::vector<ThresholdCheck> checks;
  std::vector<std::string> notes;

  [[nodiscard]] bool passed() const;
  /// Sets max_ratio and checks the ratio invariants (finite, nonnegative).
  void finalize();
};

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

double relative_drift(double base, double refined);

// ---------------------------------------------------------------------------
// Verification harnesses

struct LinearLemmaConfig {
  NormSpec spec{0.5, 0.55, -1.0 / 3.0};
  double T = 1.0;
  std::vector<double> T_sweep{0.125, 0.25, 0.5, 1.0};
  /// Forcing cos(c t / T) psi_T(t) U(t) g used for the T-scaling fit.
  double modulation = 8.0;
  Ensemble ensemble{100, 1, 8, 8};
  Grid2 base{32, 32};
  Grid2 refined{64, 64};
  double slope_tolerance = 0.15;
  double drift_tolerance = 0.1;
  void validate() const;
};
EstimateReport verify_linear_lemma(const LinearLemmaConfig& cfg);

enum class StrichartzFamily { str1, str2, l4, lpq };
std::string to_string(StrichartzFamily f);

struct StrichartzConfig {
  StrichartzFamily family = StrichartzFamily::l4;
  double p = 4.0;
  double q = 4.0;
  double b = 0.45;
  double T = 1.0;
  int nt = 0;  ///< time samples on [-2T, 2T]; 0 picks the resolution rule for the band
  Ensemble ensemble{100, 1, 8, 8};
  Grid2 base{32, 32};
  Grid2 refined{64, 64};
  double drift_tolerance = 0.1;
  /// Default exponents for a family.
  static StrichartzConfig defaults(StrichartzFamily f);
  void validate() const;
  [[nodiscard]] int time_samples() const;
};
EstimateReport verify_strichartz(const StrichartzConfig& cfg);

enum class BilinearFamily { bil1, bil2, bil3, bil4 };
std::string to_string(BilinearFamily f);

struct BilinearConfig {
  BilinearFamily which = BilinearFamily::bil1;
  int k_min = 0;
  int k_max = 4;
  double b = 0.55;
  double T = 0.25;
  double s0 = 0.2, s1 = 0.2, s2 = 0.2;  ///< Bessel exponents for bil4
  int nt = 1024;  ///< time samples on [-2T, 2T]
  Ensemble ensemble{24, 1, 8, 16};
  /// Both grids keep the full product band (6 * band per axis), so the
  /// outputs are computed without truncation.
  Grid2 base{48, 96};
  Grid2 refined{64, 128};
  double slope_bound = 0.6;
  double slope_stability = 0.05;
  double drift_tolerance = 0.15;
  void validate() const;
};
EstimateReport verify_bilinear(const BilinearConfig& cfg);

/// Left side for u = psi_T U phi1, v = psi_T U phi2 sampled with cfg.nt points
/// on [-2T, 2T], one entry per k in [k_min, k_max] (a single entry for bil4).
/// Evaluated row by row in a mixed x-Fourier / y-physical representation.
std::vector<double> bilinear_windowed_lhs(const Field2& phi1, const Field2& phi2, const BilinearConfig& cfg);

/// Space-time L2 norm of I_x^{1/2} I_{x,-}^{1/2}(u, v) with the P_{y,k}
/// placement of `which` (k ignored for bil4, which applies J_y^{-s0}), built
/// from bilinear_pseudoproduct slice by slice. Slow; used as the oracle.
double bilinear_lhs(const SpaceTimeField& u, const SpaceTimeField& v, BilinearFamily which, int k,
                    double s0 = 0.0);

struct KeyEstimateConfig {
  double s = 0.6;
  double b = 0.55;
  double b_prime = -1.0 / 3.0;
  double T = 0.5;
  double max_modulation = 256.0;
  double window = 1.25;  ///< samples cover [-window, window]
  int nt = 4096;
  double c0 = 4.0;
  Ensemble ensemble{50, 1, 8, 8};
  Grid2 base{32, 32};
  Grid2 refined{48, 48};
  double drift_tolerance = 0.2;
  void validate() const;
};
EstimateReport verify_key_estimate(const KeyEstimateConfig& cfg);

struct KeyEstimateSample {
  double lhs = 0, rhs = 0;
  Region region = Region::outside;
};
/// One (u1, u2) pair: u_j = cos(delta_j t) psi_T(t) U(t) phi_j.
KeyEstimateSample key_estimate_sample(const Field2& phi1, double delta1, const Field2& phi2,
                                      double delta2, const KeyEstimateConfig& cfg);

struct ResonanceConfig {
  int samples = 10000;
  std::uint64_t seed = 1;
  double max_frequency = 64.0;
  double tolerance = 1e-9;
  void validate() const;
};
/// Random real and random lattice triples with random tau splittings.
EstimateReport verify_resonance(const ResonanceConfig& cfg);

struct RegionConfig {
  int samples = 10000;
  std::uint64_t seed = 1;
  double c0 = 4.0;
  int max_frequency = 64;
  void validate() const;
};
/// Partition check on random triples and the resonance inequality on R4.
EstimateReport verify_regions(const RegionConfig& cfg);

}  // namespace zk
