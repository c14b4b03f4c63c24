// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.
// Optional arguments select criteria by number. The lines are also written to
// acceptance.txt in the working directory, since ctest hides passing output.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "support.hpp"
#include "zklab/cli.hpp"
#include "zklab/estimates.hpp"
#include "zklab/norms.hpp"
#include "zklab/propagator.hpp"
#include "zklab/solver.hpp"
#include "zklab/spectral.hpp"
#include "zklab/symmetrizer.hpp"

using namespace zk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g", detail.empty() ? "" : ", ", what.c_str(), value);
    detail += buf;
    ok = ok && cond;
  }
  void note(const std::string& what, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s[%s=%.3g]", detail.empty() ? "" : ", ", what.c_str(), value);
    detail += buf;
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> body;
};

Field2 cos_cos(const Grid2& g, double a) {
  return Field2::from_function(g, [&](double x, double y) { return a * std::cos(x) * std::cos(y); });
}

// ---------------------------------------------------------------------------

Outcome symmetrizer_algebra() {
  Outcome o;
  const auto c = SymmetrizerConstants<double>::standard();
  o.require(std::abs(c.symmetric_coefficient() - 1.0) <= 1e-14, "|mu^3+mu*lambda^2-1|",
            std::abs(c.symmetric_coefficient() - 1.0));
  o.require(std::abs(c.mixed_coefficient()) <= 1e-14, "|3mu^3-mu*lambda^2|", std::abs(c.mixed_coefficient()));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const double a = d(rng), b = d(rng);
    const auto [xi, eta] = dual_map(a, b);
    const double orig = symbol_original(xi, eta), sym = symbol_symmetric(a, b);
    worst = std::max(worst, std::abs(orig - sym) / std::max(std::abs(a * a * a) + std::abs(b * b * b), 1e-300));
  }
  o.require(worst < 1e-10, "symbol_rel_err", worst);
  return o;
}

Outcome resonance() {
  Outcome o;
  ResonanceConfig cfg;
  cfg.samples = 20000;
  cfg.tolerance = 1e-9;
  const EstimateReport rep = verify_resonance(cfg);
  double worst = 0.0;
  for (const auto& c : rep.checks)
    if (c.name == "max_scaled_residual") worst = c.value;
  o.require(worst < 1e-9, "max_residual", worst);
  double defect = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const ResonanceCheck r = resonance_check(FrequencyTriple::on_surface(k, 0, k, 0));
    defect = std::max(defect, std::abs(r.lhs - 6.0 * k * k * k));
  }
  o.require(defect == 0.0, "k_family_defect", defect);
  return o;
}

Outcome propagator() {
  Outcome o;
  const Grid2 g(64, 64);
  const Propagator U(g);
  const SpecField2 F = fft_forward(test::TrigPoly::random(21, 21, 3).sample(g));
  const double n0 = l2_norm(F);
  double unit = 0.0;
  for (double t = -10.0; t <= 10.0; t += 0.25) unit = std::max(unit, std::abs(l2_norm(U.evolve(F, t)) - n0) / n0);
  o.require(unit < 1e-12, "unitarity", unit);
  double group = 0.0;
  for (auto [s, t] : {std::pair{0.2, 0.3}, {1.7, -0.4}, {-3.0, 5.5}})
    group = std::max(group, l2_norm(U.evolve(U.evolve(F, s), t) - U.evolve(F, s + t)) / n0);
  o.require(group < 1e-12, "group_law", group);
  const double rev = l2_norm(U.evolve(U.evolve(F, 7.25), -7.25) - F) / n0;
  o.require(rev < 1e-12, "reversal", rev);
  return o;
}

Outcome solver_cross_validation() {
  Outcome o;
  SolveConfig c;
  c.grid = Grid2(32, 32);
  c.T = 0.5;
  c.nt = 64;
  const Field2 phi = cos_cos(c.grid, 0.05);
  const SolveResult p = picard_solve(phi, c), r = reference_solve(phi, c);
  double diff = 0.0;
  for (int n = 0; n < p.trajectory.nt(); ++n)
    diff = std::max(diff, l2_norm(p.trajectory.slices[n] - r.trajectory.slices[n]));
  o.require(p.status == SolveStatus::converged, "picard_converged", p.status == SolveStatus::converged);
  o.require(diff < 1e-6, "sup_t_L2_diff", diff);
  double ratio = 0.0;
  const auto& res = p.picard_residuals;
  for (std::size_t i = 1; i < res.size(); ++i)
    if (res[i - 1] < 1.0 && res[i] > 1e-14) ratio = std::max(ratio, res[i] / res[i - 1]);
  o.require(ratio < 0.5, "max_residual_ratio", ratio);

  auto run = [&](int nt) {
    SolveConfig s = c;
    s.nt = nt;
    return reference_solve(phi, s).trajectory.slices.back();
  };
  const Field2 a = run(32), b = run(64), f = run(128);
  const double order = std::log2(l2_norm(a - b) / l2_norm(b - f));
  o.require(std::abs(order - 4.0) <= 0.5, "rk4_order", order);
  return o;
}

Outcome conservation() {
  Outcome o;
  SolveConfig c;
  c.grid = Grid2(64, 64);
  c.T = 1.0;
  c.nt = 128;
  const Field2 phi = cos_cos(c.grid, 0.05);
  const SolveResult r = reference_solve(phi, c);
  o.require(r.l2_drift < 1e-8, "rk4_l2_drift", r.l2_drift);
  o.require(r.energy_drift < 1e-6, "rk4_energy_drift", r.energy_drift);
  const SolveResult p = picard_solve(phi, c);
  o.require(p.l2_drift < 1e-8, "picard_l2_drift", p.l2_drift);
  o.require(p.energy_drift < 1e-6, "picard_energy_drift", p.energy_drift);
  return o;
}

Outcome xsb_consistency() {
  Outcome o;
  const Grid2 g(32, 32);
  const TimeCutoff cutoff(0.5);
  const auto win = TemporalProfile::window(cutoff);
  const Ensemble e{20, 1, 8, 8};
  const NormSpec spec{0.6, 0.55};
  double worst = 0.0;
  for (int i = 0; i < e.size; ++i) {
    const Field2 phi = random_field(g, e, static_cast<std::uint64_t>(i));
    const FreeWave w(phi);
    const int nt = required_time_samples(2.2, w.bandwidth()) + 1;
    const SpaceTimeField u = sample_free_solution(w, win, -1.1, 1.1, nt);
    const double direct = xsb_norm_direct(u, spec), fact = xsb_norm_factorized(phi, cutoff, spec);
    worst = std::max(worst, std::abs(direct - fact) / fact);
  }
  o.require(worst < 0.02, "max_rel_gap_band8", worst);

  // s = b = 0: both paths are the space-time L2 norm
  const Field2 phi = random_field(g, e, 99);
  const FreeWave w(phi);
  const SpaceTimeField u = sample_free_solution(w, win, -1.1, 1.1, required_time_samples(2.2, w.bandwidth()) + 1);
  double l2 = 0.0;
  for (const auto& f : u.slices) l2 += std::pow(l2_norm(f), 2);
  l2 = std::sqrt(l2 * u.dt);
  const double exact = std::abs(xsb_norm_direct(u, NormSpec{}) - l2) / l2;
  o.require(exact <= 1e-12, "s=b=0_direct", exact);
  const double fexact =
      std::abs(xsb_norm_factorized(phi, cutoff, NormSpec{}) - temporal_weighted_norm(win, 0.0) * l2_norm(phi)) /
      l2_norm(phi);
  o.require(fexact <= 1e-12, "s=b=0_factorized", fexact);
  return o;
}

Outcome strichartz() {
  Outcome o;
  for (auto f : {StrichartzFamily::str1, StrichartzFamily::str2, StrichartzFamily::l4, StrichartzFamily::lpq}) {
    const EstimateReport rep = verify_strichartz(StrichartzConfig::defaults(f));
    o.require(std::isfinite(rep.max_ratio), to_string(f) + "_max_ratio", rep.max_ratio);
    o.require(rep.refinement_drift < 0.1, to_string(f) + "_drift", rep.refinement_drift);
  }
  return o;
}

double psi4_integral(double T) {
  const TimeCutoff c(T);
  const int n = 400000;
  const double h = 4 * T / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(c(-2 * T + i * h), 4);
  return s * h;
}

Outcome bilinear() {
  Outcome o;
  // closed form: cos(3x + 2y), cos(x + 5y) give sqrt 8 * u v
  {
    BilinearConfig cfg;
    cfg.which = BilinearFamily::bil3;
    cfg.k_min = 3;
    cfg.k_max = 3;
    const Grid2 g(48, 96);
    auto mode = [&](int k, int m) {
      return Field2::from_function(g, [&](double x, double y) { return std::cos(k * x + m * y); });
    };
    const double expect = std::sqrt(8.0 * g.area() / 4 * psi4_integral(cfg.T));
    const double got = bilinear_windowed_lhs(mode(3, 2), mode(1, 5), cfg)[0];
    o.require(std::abs(got - expect) / expect <= 1e-10, "closed_form_rel_err", std::abs(got - expect) / expect);
  }
  // pseudoproduct against the brute-force convolution on 8x8
  {
    const Grid2 g(8, 8);
    const Field2 f = test::TrigPoly::random(2, 2, 41).sample(g), h = test::TrigPoly::random(2, 2, 42).sample(g);
    const SpecField2 F = test::naive_dft(f), H = test::naive_dft(h);
    double err = 0.0;
    for (auto sym : {BilinearSymbol::x_minus, BilinearSymbol::x_plus, BilinearSymbol::y_minus, BilinearSymbol::y_plus}) {
      const SpecField2 P = fft_forward(bilinear_pseudoproduct(f, h, sym, 0.5));
      for (int k = -2; k <= 2; ++k)
        for (int m = -2; m <= 2; ++m) {
          std::complex<double> acc = 0.0;
          for (int k1 = -4; k1 < 4; ++k1)
            for (int m1 = -4; m1 < 4; ++m1) {
              const int k2 = k - k1, m2 = m - m1;
              if (k2 < -4 || k2 > 3 || m2 < -4 || m2 > 3) continue;
              const bool x_axis = sym == BilinearSymbol::x_minus || sym == BilinearSymbol::x_plus;
              acc += bilinear_symbol(sym, x_axis ? k1 : m1, x_axis ? k2 : m2, 0.5) * F.at(k1, m1) * H.at(k2, m2);
            }
          err = std::max(err, std::abs(P.at(k, m) - acc / g.area()));
        }
    }
    o.require(err <= 1e-12, "pseudoproduct_oracle", err);
  }
  for (auto f : {BilinearFamily::bil1, BilinearFamily::bil2, BilinearFamily::bil3}) {
    BilinearConfig cfg;
    cfg.which = f;
    const EstimateReport rep = verify_bilinear(cfg);
    o.require(rep.scaling_slope && *rep.scaling_slope <= 0.6, to_string(f) + "_slope", rep.scaling_slope.value_or(NAN));
    o.note(to_string(f) + "_drift", rep.refinement_drift);
  }
  {
    BilinearConfig cfg;
    cfg.which = BilinearFamily::bil4;
    cfg.s0 = cfg.s1 = cfg.s2 = 0.2;
    const EstimateReport rep = verify_bilinear(cfg);
    o.require(std::isfinite(rep.max_ratio), "bil4_max_ratio", rep.max_ratio);
  }
  return o;
}

Outcome key_estimate() {
  Outcome o;
  const KeyEstimateConfig cfg;
  const EstimateReport rep = verify_key_estimate(cfg);
  o.require(std::isfinite(rep.max_ratio), "max_ratio", rep.max_ratio);
  o.require(rep.refinement_drift < 0.2, "drift", rep.refinement_drift);
  const Field2 a = random_field(cfg.base, cfg.ensemble, 0), b = random_field(cfg.base, cfg.ensemble, 1);
  const KeyEstimateSample s = key_estimate_sample(a, 40.0, b, -25.0, cfg);
  const KeyEstimateSample t = key_estimate_sample(3.5 * a, 40.0, 0.125 * b, -25.0, cfg);
  const double inv = std::abs(t.lhs / t.rhs - s.lhs / s.rhs) / (s.lhs / s.rhs);
  o.require(inv <= 1e-12, "rescaling_invariance", inv);
  return o;
}

Outcome linear_lemma() {
  Outcome o;
  const LinearLemmaConfig cfg;
  const EstimateReport rep = verify_linear_lemma(cfg);
  const double expected = 1.0 - cfg.spec.b + cfg.spec.b_prime;
  const double slope = rep.scaling_slope.value_or(NAN);
  o.require(std::abs(slope - expected) <= 0.15, "slope", slope);
  o.note("expected", expected);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "zklab-acceptance-determinism";
  fs::remove_all(root);
  bool same = true;
  for (const nlohmann::json& base :
       {nlohmann::json{{"command", "verify"}, {"family", "l4"}, {"ensemble", 8}, {"seed", 7}},
        nlohmann::json{{"command", "resonance"}, {"samples", 2000}, {"seed", 7}}}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      nlohmann::json j = base;
      j["output_dir"] = (root / std::to_string(rep)).string();
      std::ostringstream out, err;
      run(RunConfig::from_json(j), out, err);
      const std::string text = slurp(root / std::to_string(rep) / "report.json");
      if (rep == 0) first = text;
      same = same && !text.empty() && text == first;
    }
  }
  fs::remove_all(root);
  o.require(same, "byte_identical", same);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "symmetrizer algebra", 1.0, symmetrizer_algebra},
      {2, "resonance identity", 1.0, resonance},
      {3, "propagator unitarity, group law, reversal", 5.0, propagator},
      {4, "picard vs rk4 cross-validation", 60.0, solver_cross_validation},
      {5, "conservation over T = 1 at 64x64", 120.0, conservation},
      {6, "X^{s,b} direct vs factorized", 60.0, xsb_consistency},
      {7, "strichartz suite", 600.0, strichartz},
      {8, "bilinear suite", 600.0, bilinear},
      {9, "key estimate", 900.0, key_estimate},
      {10, "linear lemma T-scaling", 300.0, linear_lemma},
      {11, "determinism", 60.0, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  std::ofstream log("acceptance.txt");
  auto emit = [&](const char* fmt, auto... args) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, fmt, args...);
    std::fputs(buf, stdout);
    std::fflush(stdout);
    log << buf << std::flush;
  };
  int failed = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    if (!in_time) o.detail += ", over time limit";
    const bool ok = o.ok && in_time;
    failed += ok ? 0 : 1;
    emit("%s %2d %s: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
         secs, c.limit_s);
  }
  emit("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
