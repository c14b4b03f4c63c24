#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "zklab/estimates.hpp"
#include "zklab/rng.hpp"
#include "zklab/symmetrizer.hpp"

namespace zk {

namespace {

double bracket(double a) { return std::sqrt(1.0 + a * a); }

}  // namespace

FrequencyTriple FrequencyTriple::from_factors(double xi1, double eta1, double tau1, double xi2,
                                              double eta2, double tau2) {
  return {xi1 + xi2, eta1 + eta2, tau1 + tau2, xi1, eta1, tau1, xi2, eta2, tau2};
}

FrequencyTriple FrequencyTriple::on_surface(double xi1, double eta1, double xi2, double eta2,
                                            double sigma1, double sigma2) {
  return from_factors(xi1, eta1, symbol_symmetric(xi1, eta1) + sigma1, xi2, eta2,
                      symbol_symmetric(xi2, eta2) + sigma2);
}

double FrequencyTriple::sigma0() const { return tau - symbol_symmetric(xi, eta); }
double FrequencyTriple::sigma1() const { return tau1 - symbol_symmetric(xi1, eta1); }
double FrequencyTriple::sigma2() const { return tau2 - symbol_symmetric(xi2, eta2); }

double FrequencyTriple::constraint_defect() const {
  const std::array<double, 3> d = {std::abs(xi - xi1 - xi2) / (1.0 + std::abs(xi1) + std::abs(xi2)),
                                   std::abs(eta - eta1 - eta2) / (1.0 + std::abs(eta1) + std::abs(eta2)),
                                   std::abs(tau - tau1 - tau2) / (1.0 + std::abs(tau1) + std::abs(tau2))};
  return *std::max_element(d.begin(), d.end());
}

FrequencyTriple FrequencyTriple::symmetry_reduced() const {
  if (std::abs(eta) <= std::abs(xi)) return *this;
  return {eta, xi, tau, eta1, xi1, tau1, eta2, xi2, tau2};
}

ResonanceCheck resonance_check(const FrequencyTriple& t) {
  if (!(t.constraint_defect() < 1e-12))
    throw std::invalid_argument("resonance_check: convolution constraint violated");
  ResonanceCheck r;
  r.signed_difference = t.sigma0() - t.sigma1() - t.sigma2();
  r.lhs = std::abs(r.signed_difference);
  r.rhs = 3.0 * std::abs(t.xi * t.xi1 * t.xi2 + t.eta * t.eta1 * t.eta2);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::outside: return "outside";
  }
  return "outside";
}

Region region_classify(const FrequencyTriple& t, double c0) {
  if (!(c0 >= 1.0)) throw std::invalid_argument("region_classify: c0 must be >= 1");
  if (std::abs(t.eta) > std::abs(t.xi))
    throw std::invalid_argument("region_classify: requires |eta| <= |xi| (apply symmetry_reduced)");
  const double a = std::abs(t.xi);
  if (a <= c0 * std::abs(t.xi1 - t.xi2)) return Region::R1;
  if (std::abs(t.eta1) >= a / c0) return Region::R2;
  if (std::abs(t.eta2) >= a / c0) return Region::R3;
  auto comparable = [c0](double u, double v) { return u <= c0 * v && v <= c0 * u; };
  const double a1 = std::abs(t.xi1), a2 = std::abs(t.xi2);
  if (comparable(a, a1) && comparable(a, a2) && comparable(a1, a2)) return Region::R4;
  return Region::outside;
}

double resonance_inequality_check(const FrequencyTriple& t, double c0) {
  if (region_classify(t, c0) != Region::R4)
    throw std::invalid_argument("resonance_inequality_check: triple is not in region R4");
  const double a = std::abs(t.xi);
  return (bracket(t.sigma0()) + bracket(t.sigma1()) + bracket(t.sigma2())) / (a * a * a);
}

void ResonanceConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("resonance: samples must be >= 1");
  if (!(max_frequency > 0.0) || !std::isfinite(max_frequency))
    throw std::invalid_argument("resonance: max_frequency must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("resonance: tolerance must be positive");
}

EstimateReport verify_resonance(const ResonanceConfig& cfg) {
  cfg.validate();
  EstimateReport rep;
  rep.name = "resonance";
  rep.seed = cfg.seed;
  rep.ensemble_size = 2 * cfg.samples;
  rep.params = {{"samples", cfg.samples}, {"max_frequency", cfg.max_frequency}};

  const double F = cfg.max_frequency;
  const int lattice_bound = static_cast<int>(std::floor(F));
  std::mt19937_64 rng = make_stream(cfg.seed, 0, Stream::triple);
  std::uniform_real_distribution<double> freq(-F, F);
  std::uniform_real_distribution<double> modulation(-F * F * F, F * F * F);
  std::uniform_int_distribution<int> lattice(-lattice_bound, lattice_bound);

  double worst_scaled = 0.0, worst_abs = 0.0, worst_lattice = 0.0;
  rep.ratios.reserve(rep.ensemble_size);
  for (int n = 0; n < rep.ensemble_size; ++n) {
    const bool on_lattice = n >= cfg.samples;
    FrequencyTriple t;
    if (on_lattice) {
      const int x1 = lattice(rng), y1 = lattice(rng), x2 = lattice(rng), y2 = lattice(rng);
      t = FrequencyTriple::on_surface(x1, y1, x2, y2, lattice(rng), lattice(rng));
    } else {
      const double x1 = freq(rng), y1 = freq(rng), x2 = freq(rng), y2 = freq(rng);
      t = FrequencyTriple::on_surface(x1, y1, x2, y2, modulation(rng), modulation(rng));
    }
    const ResonanceCheck c = resonance_check(t);
    const double scale = 1.0 + std::pow(std::abs(t.xi), 3) + std::pow(std::abs(t.eta), 3);
    worst_scaled = std::max(worst_scaled, c.residual / scale);
    worst_abs = std::max(worst_abs, c.residual);
    if (on_lattice) worst_lattice = std::max(worst_lattice, c.residual);
    rep.ratios.push_back(c.rhs > 0.0 ? c.lhs / c.rhs : (c.lhs == 0.0 ? 1.0 : 0.0));
  }

  // Aligned family: |sigma0 - sigma1 - sigma2| = 6 k^3 for xi1 = xi2 = k.
  double family_defect = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const ResonanceCheck c = resonance_check(FrequencyTriple::on_surface(k, 0, k, 0));
    family_defect = std::max(family_defect, std::abs(c.lhs - 6.0 * k * k * k));
  }

  rep.metrics = {{"max_scaled_residual", worst_scaled},
                 {"max_abs_residual", worst_abs},
                 {"max_lattice_residual", worst_lattice},
                 {"aligned_family_defect", family_defect}};
  rep.finalize();
  rep.checks.push_back(make_check("max_scaled_residual", worst_scaled, "<", cfg.tolerance));
  rep.checks.push_back(make_check("aligned_family_defect", family_defect, "<=", 0.0));
  rep.notes.push_back("sign: sigma0 - sigma1 - sigma2 = -3 (xi xi1 xi2 + eta eta1 eta2); compared in magnitude");
  rep.notes.push_back("residual scaled by 1 + |xi|^3 + |eta|^3");
  return rep;
}

void RegionConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("regions: samples must be >= 1");
  if (!(c0 > 1.0)) throw std::invalid_argument("regions: c0 must be > 1");
  if (max_frequency < 2) throw std::invalid_argument("regions: max_frequency must be >= 2");
}

EstimateReport verify_regions(const RegionConfig& cfg) {
  cfg.validate();
  EstimateReport rep;
  rep.name = "regions";
  rep.seed = cfg.seed;
  rep.ensemble_size = cfg.samples;
  rep.params = {{"samples", cfg.samples}, {"c0", cfg.c0}, {"max_frequency", cfg.max_frequency}};

  const int F = cfg.max_frequency;
  std::mt19937_64 rng = make_stream(cfg.seed, 0, Stream::region);
  std::uniform_int_distribution<int> lattice(-F, F);
  std::uniform_int_distribution<int> small(-F / 8, F / 8);
  const double mod_bound = static_cast<double>(F) * F * F;
  std::uniform_real_distribution<double> modulation(-mod_bound, mod_bound);

  std::array<int, 5> counts{};
  int labelled = 0;
  double min_r4 = std::numeric_limits<double>::infinity();
  for (int n = 0; n < cfg.samples; ++n) {
    FrequencyTriple t;
    if (n % 2 == 0) {
      t = FrequencyTriple::on_surface(lattice(rng), lattice(rng), lattice(rng), lattice(rng),
                                      modulation(rng), modulation(rng));
    } else {
      // Nearly parallel large x-frequencies with small y-frequencies; mostly R4.
      const int base = lattice(rng);
      const int x1 = base + small(rng), x2 = base + small(rng);
      t = FrequencyTriple::on_surface(x1, small(rng), x2, small(rng), modulation(rng), modulation(rng));
    }
    t = t.symmetry_reduced();
    const Region r = region_classify(t, cfg.c0);
    ++counts[static_cast<int>(r)];
    ++labelled;
    if (r == Region::R4) {
      const double ratio = resonance_inequality_check(t, cfg.c0);
      rep.ratios.push_back(ratio);
      min_r4 = std::min(min_r4, ratio);
    }
  }
  if (rep.ratios.empty()) min_r4 = 0.0;

  const double c2 = cfg.c0 * cfg.c0;
  const double analytic = 3.0 * (c2 - 5.0) / (4.0 * c2);
  rep.metrics = {{"count_R1", counts[0]},       {"count_R2", counts[1]},
                 {"count_R3", counts[2]},       {"count_R4", counts[3]},
                 {"count_outside", counts[4]},  {"min_ratio_R4", min_r4},
                 {"analytic_bound_R4", analytic}, {"stated_bound_R4", 1.0 / (3.0 * c2 * cfg.c0)}};
  rep.finalize();
  rep.checks.push_back(make_check("labels_partition", labelled, ">=", cfg.samples));
  rep.checks.push_back(make_check("r4_samples", counts[3], ">", 0));
  rep.checks.push_back(make_check("min_ratio_R4", min_r4, ">=", 1.0 / (3.0 * c2 * cfg.c0)));
  rep.notes.push_back("ratios are (<sigma0> + <sigma1> + <sigma2>) / |xi|^3 over the R4 samples");
  return rep;
}

}  // namespace zk
