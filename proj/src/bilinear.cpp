#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "zklab/estimates.hpp"
#include "zklab/fft.hpp"
#include "zklab/parallel.hpp"
#include "zklab/spectral.hpp"

namespace zk {

namespace {

using RowArray = Eigen::ArrayXcd;

std::string grid_label(const Grid2& g) { return std::to_string(g.nx) + "x" + std::to_string(g.ny); }

double dyadic_bound(int k) { return std::ldexp(1.0, k); }

// Free wave in the mixed representation: Fourier in x, physical in y. Row k
// holds G(k, y) = sum_m F(k, m) e^{i m y} / ly, so f = sum_k G(k, y) e^{i k x} / lx.
class RowWave {
 public:
  struct Mode {
    int j;  // y storage index
    std::complex<double> coeff;
    double omega;
  };
  struct Row {
    int k;
    std::vector<Mode> modes;
  };

  RowWave(const Field2& phi) : grid_(phi.grid) {
    const SpecField2 F = fft_forward(phi);
    const double peak = F.coeffs.abs().maxCoeff();
    if (peak == 0.0) return;
    for (int i = 0; i < grid_.nx; ++i) {
      Row row{Grid2::wavenumber(i, grid_.nx), {}};
      for (int j = 0; j < grid_.ny; ++j) {
        const std::complex<double> c = F.coeffs(i, j);
        if (std::abs(c) <= 1e-14 * peak) continue;
        const double xi = grid_.xi_odd(i), eta = grid_.eta_odd(j);
        row.modes.push_back({j, c, xi * xi * xi + eta * eta * eta});
      }
      if (!row.modes.empty()) rows_.push_back(std::move(row));
    }
  }

  [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }

  /// Rows of U(t) phi, keeping only |eta| <= eta_max when eta_max >= 0.
  void evaluate(double t, double eta_max, std::vector<RowArray>& out) const {
    out.resize(rows_.size());
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(grid_.ny)), scratch;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::fill(buf.begin(), buf.end(), std::complex<double>(0.0));
      for (const Mode& m : rows_[r].modes) {
        if (eta_max >= 0.0 && std::abs(grid_.eta(m.j)) > eta_max) continue;
        buf[m.j] = m.coeff * std::polar(1.0, t * m.omega);
      }
      detail::dft_inplace<double>(buf, true, scratch);
      out[r] = Eigen::Map<RowArray>(buf.data(), grid_.ny) / grid_.dy();
    }
  }

 private:
  Grid2 grid_;
  std::vector<Row> rows_;
};

// |xi1^2 - xi2^2|^{1/2} / lx: the symbol of I_x^{1/2} I_{x,-}^{1/2} with the
// mixed-representation normalization.
double pair_weight(const Grid2& g, int k1, int k2) {
  const double xi1 = 2.0 * std::numbers::pi * k1 / g.lx, xi2 = 2.0 * std::numbers::pi * k2 / g.lx;
  return std::sqrt(std::abs(xi1 * xi1 - xi2 * xi2)) / g.lx;
}

// Output rows indexed by K + offset.
struct OutputRows {
  int offset = 0;
  std::vector<RowArray> rows;
  std::vector<char> live;
};

void accumulate_product(const Grid2& g, const RowWave& u, const std::vector<RowArray>& gu,
                        const RowWave& v, const std::vector<RowArray>& gv, OutputRows& out) {
  for (auto& r : out.rows) r.setZero();
  std::fill(out.live.begin(), out.live.end(), 0);
  for (std::size_t a = 0; a < gu.size(); ++a)
    for (std::size_t b = 0; b < gv.size(); ++b) {
      const int k1 = u.rows()[a].k, k2 = v.rows()[b].k;
      const double w = pair_weight(g, k1, k2);
      if (w == 0.0) continue;
      const int K = k1 + k2 + out.offset;
      out.rows[K] += w * gu[a] * gv[b];
      out.live[K] = 1;
    }
}

// Spatial L2^2 of the output rows after a y-multiplier; `weights` is indexed by
// y storage index. With no weights the physical-space sum is used.
double output_norm2(const Grid2& g, OutputRows& out, const std::vector<double>* weights) {
  double sum = 0.0;
  if (!weights) {
    for (std::size_t K = 0; K < out.rows.size(); ++K)
      if (out.live[K]) sum += out.rows[K].abs2().sum();
    return sum * g.dy() / g.lx;
  }
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(g.ny)), scratch;
  for (std::size_t K = 0; K < out.rows.size(); ++K) {
    if (!out.live[K]) continue;
    std::copy(out.rows[K].data(), out.rows[K].data() + g.ny, buf.begin());
    detail::dft_inplace<double>(buf, false, scratch);
    for (int j = 0; j < g.ny; ++j) sum += (*weights)[j] * std::norm(buf[j] * g.dy());
  }
  return sum / (g.ly * g.lx);
}

// Per k (one entry for bil4): the left side and the product of the spatial
// data norms entering the right side.
struct BilinearSample {
  std::vector<double> lhs;
  std::vector<double> rhs_spatial;
};

BilinearSample bilinear_sample(const Field2& phi1, const Field2& phi2, const BilinearConfig& cfg) {
  require_same_grid(phi1.grid, phi2.grid, "bilinear_sample");
  const Grid2& g = phi1.grid;
  const RowWave u(phi1), v(phi2);
  const TimeCutoff cutoff(cfg.T);
  const double t0 = -cutoff.support_radius();
  const double dt = 2.0 * cutoff.support_radius() / (cfg.nt - 1);
  const bool bil4 = cfg.which == BilinearFamily::bil4;
  const int nk = bil4 ? 1 : cfg.k_max - cfg.k_min + 1;

  const int max_k = g.nx / 2;
  auto reach = [](const RowWave& w) {
    int r = 0;
    for (const auto& row : w.rows()) r = std::max(r, std::abs(row.k));
    return r;
  };
  if (reach(u) + reach(v) > max_k)
    throw std::invalid_argument("bilinear: x-bands of the factors must add up to at most nx/2");
  OutputRows out;
  out.offset = max_k;
  out.rows.assign(2 * max_k + 1, RowArray::Zero(g.ny));
  out.live.assign(out.rows.size(), 0);

  // y-multipliers applied to the output: P_{y,k} for bil3, J_y^{-s0} for bil4.
  std::vector<std::vector<double>> out_weights;
  if (cfg.which == BilinearFamily::bil3) {
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      std::vector<double> w(g.ny);
      for (int j = 0; j < g.ny; ++j) w[j] = std::abs(g.eta(j)) <= dyadic_bound(k) ? 1.0 : 0.0;
      out_weights.push_back(std::move(w));
    }
  } else if (bil4) {
    std::vector<double> w(g.ny);
    for (int j = 0; j < g.ny; ++j) w[j] = std::pow(1.0 + g.eta(j) * g.eta(j), -cfg.s0);
    out_weights.push_back(std::move(w));
  }

  std::vector<double> acc(nk, 0.0);
  std::vector<RowArray> gu, gv;
  for (int n = 0; n < cfg.nt; ++n) {
    const double t = t0 + n * dt;
    const double env = cutoff(t);
    if (env == 0.0) continue;
    const double w = (n == 0 || n == cfg.nt - 1 ? 0.5 : 1.0) * std::pow(env, 4);
    switch (cfg.which) {
      case BilinearFamily::bil1:
        v.evaluate(t, -1.0, gv);
        for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
          u.evaluate(t, dyadic_bound(k), gu);
          accumulate_product(g, u, gu, v, gv, out);
          acc[k - cfg.k_min] += w * output_norm2(g, out, nullptr);
        }
        break;
      case BilinearFamily::bil2:
        u.evaluate(t, -1.0, gu);
        for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
          v.evaluate(t, dyadic_bound(k), gv);
          accumulate_product(g, u, gu, v, gv, out);
          acc[k - cfg.k_min] += w * output_norm2(g, out, nullptr);
        }
        break;
      case BilinearFamily::bil3:
      case BilinearFamily::bil4:
        u.evaluate(t, -1.0, gu);
        v.evaluate(t, -1.0, gv);
        accumulate_product(g, u, gu, v, gv, out);
        for (int k = 0; k < nk; ++k) acc[k] += w * output_norm2(g, out, &out_weights[k]);
        break;
    }
  }

  BilinearSample s;
  for (int k = 0; k < nk; ++k) s.lhs.push_back(std::sqrt(acc[k] * dt));
  const SpecField2 F1 = fft_forward(phi1), F2 = fft_forward(phi2);
  auto projected = [](const SpecField2& F, int k) { return l2_norm(dyadic_project(F, Axis::y, Dyadic::P_k, k)); };
  for (int k = cfg.k_min; k < cfg.k_min + nk; ++k) {
    switch (cfg.which) {
      case BilinearFamily::bil1: s.rhs_spatial.push_back(projected(F1, k) * l2_norm(F2)); break;
      case BilinearFamily::bil2: s.rhs_spatial.push_back(l2_norm(F1) * projected(F2, k)); break;
      case BilinearFamily::bil3: s.rhs_spatial.push_back(l2_norm(F1) * l2_norm(F2)); break;
      case BilinearFamily::bil4:
        s.rhs_spatial.push_back(l2_norm(apply_potential(F1, Potential::bessel_y, cfg.s1)) *
                                l2_norm(apply_potential(F2, Potential::bessel_y, cfg.s2)));
        break;
    }
  }
  return s;
}

}  // namespace

std::string to_string(BilinearFamily f) {
  switch (f) {
    case BilinearFamily::bil1: return "bil1";
    case BilinearFamily::bil2: return "bil2";
    case BilinearFamily::bil3: return "bil3";
    case BilinearFamily::bil4: return "bil4";
  }
  return "bil1";
}

void BilinearConfig::validate() const {
  if (ensemble.size < 1) throw std::invalid_argument("bilinear: ensemble size must be >= 1");
  if (!(b > 0.5)) throw std::invalid_argument("bilinear: requires b > 1/2 (got b = " + std::to_string(b) + ")");
  if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("bilinear: need 0 < T <= 1");
  if (nt < 16) throw std::invalid_argument("bilinear: nt must be >= 16");
  for (const Grid2* g : {&base, &refined}) {
    g->validate();
    if (6 * ensemble.band_x > g->nx || 6 * ensemble.band_y > g->ny)
      throw std::invalid_argument("bilinear: grid " + grid_label(*g) +
                                  " must hold the full product band (nx >= 6 band_x, ny >= 6 band_y)");
  }
  if (which == BilinearFamily::bil4) {
    if (s0 < 0.0 || s1 < 0.0 || s2 < 0.0 || !(s0 + s1 + s2 > 0.5))
      throw std::invalid_argument("bil4: requires s0, s1, s2 >= 0 and s0 + s1 + s2 > 1/2");
    return;
  }
  if (k_max < k_min) throw std::invalid_argument("bilinear: empty k range");
  if (k_min < 0) throw std::invalid_argument("bilinear: k must be >= 0");
  const int top = static_cast<int>(std::floor(std::log2(std::min(base.ny, refined.ny) / 2.0)));
  if (k_max > top)
    throw std::invalid_argument("bilinear: k_max exceeds the dyadic range of the grid (max " +
                                std::to_string(top) + ")");
}

EstimateReport verify_bilinear(const BilinearConfig& cfg) {
  cfg.validate();
  const bool bil4 = cfg.which == BilinearFamily::bil4;
  EstimateReport rep;
  rep.name = to_string(cfg.which);
  rep.seed = cfg.ensemble.seed;
  rep.ensemble_size = cfg.ensemble.size;
  rep.params = {{"b", cfg.b},   {"T", cfg.T},   {"nt", cfg.nt},
                {"band_x", cfg.ensemble.band_x}, {"band_y", cfg.ensemble.band_y}};
  if (bil4) {
    rep.params["s0"] = cfg.s0;
    rep.params["s1"] = cfg.s1;
    rep.params["s2"] = cfg.s2;
  } else {
    rep.params["k_min"] = cfg.k_min;
    rep.params["k_max"] = cfg.k_max;
  }
  rep.grids = {{"base", grid_label(cfg.base)}, {"refined", grid_label(cfg.refined)}};

  // ||psi_T U phi||_{0,b} = ||<.>^b psi_T^|| ||phi||: the temporal factor is shared.
  const double temporal = temporal_weighted_norm(TemporalProfile::window(TimeCutoff(cfg.T)), cfg.b);
  const int nk = bil4 ? 1 : cfg.k_max - cfg.k_min + 1;

  auto run = [&](const Grid2& g) {
    return parallel_map(cfg.ensemble.size,
                        [&](int i) {
                          const auto idx = static_cast<std::uint64_t>(i);
                          return bilinear_sample(random_field(g, cfg.ensemble, 2 * idx),
                                                 random_field(g, cfg.ensemble, 2 * idx + 1), cfg);
                        });
  };
  const std::vector<BilinearSample> base = run(cfg.base);
  const std::vector<BilinearSample> refined = run(cfg.refined);

  // normalized = lhs / (||u||_{0,b} ||v||_{0,b}); ratio = normalized / 2^{k/2}.
  auto normalized = [&](const BilinearSample& s, int k) {
    const double rhs = temporal * temporal * s.rhs_spatial[k];
    return rhs > 0.0 ? s.lhs[k] / rhs : 0.0;
  };
  auto scale = [&](int k) { return bil4 ? 1.0 : std::sqrt(dyadic_bound(cfg.k_min + k)); };

  std::vector<double> max_base(nk, 0.0), max_refined(nk, 0.0), max_norm(nk, 0.0);
  for (int i = 0; i < cfg.ensemble.size; ++i)
    for (int k = 0; k < nk; ++k) {
      const double r = normalized(base[i], k) / scale(k);
      rep.ratios.push_back(r);
      max_base[k] = std::max(max_base[k], r);
      max_norm[k] = std::max(max_norm[k], normalized(base[i], k));
      max_refined[k] = std::max(max_refined[k], normalized(refined[i], k) / scale(k));
    }
  rep.finalize();

  double drift = 0.0;
  for (int k = 0; k < nk; ++k) {
    drift = std::max(drift, relative_drift(max_base[k], max_refined[k]));
    if (!bil4) {
      const std::string tag = "_k" + std::to_string(cfg.k_min + k);
      rep.metrics["max_ratio" + tag] = max_base[k];
      rep.metrics["max_normalized_lhs" + tag] = max_norm[k];
    }
  }
  rep.refinement_drift = drift;
  rep.checks.push_back(make_check("max_ratio_finite", rep.max_ratio, "<", 1e300));
  rep.checks.push_back(make_check("refinement_drift", drift, "<", cfg.drift_tolerance));

  if (!bil4 && nk >= 2) {
    std::vector<double> ks, logs;
    for (int k = 0; k < nk; ++k) {
      ks.push_back(cfg.k_min + k);
      logs.push_back(std::log2(max_norm[k]));
    }
    rep.scaling_slope = fitted_slope(ks, logs);
    rep.checks.push_back(make_check("scaling_slope", *rep.scaling_slope, "<=", cfg.slope_bound));
    if (nk >= 3) {
      ks.pop_back();
      logs.pop_back();
      const double shorter = fitted_slope(ks, logs);
      rep.metrics["slope_without_last_k"] = shorter;
      rep.checks.push_back(
          make_check("slope_stability", std::abs(*rep.scaling_slope - shorter), "<=", cfg.slope_stability));
    }
  }

  if (bil4) {
    rep.notes.push_back("lhs: ||J_y^{-s0} I_x^{1/2} I_{x,-}^{1/2}(u, v)||; rhs: ||J_y^{s1} u||_{0,b} ||J_y^{s2} v||_{0,b}");
  } else {
    rep.notes.push_back("ratios ordered sample-major over k; ratio = lhs / (2^{k/2} ||u||_{0,b} ||v||_{0,b}) with the "
                        "projected factor's norm on the right");
    rep.notes.push_back("scaling_slope: fit of log2 max_k(lhs / (||u||_{0,b} ||v||_{0,b})) against k");
  }
  rep.notes.push_back("u = psi_T U phi1, v = psi_T U phi2; covers windowed free solutions only");
  return rep;
}

std::vector<double> bilinear_windowed_lhs(const Field2& phi1, const Field2& phi2, const BilinearConfig& cfg) {
  return bilinear_sample(phi1, phi2, cfg).lhs;
}

double bilinear_lhs(const SpaceTimeField& u, const SpaceTimeField& v, BilinearFamily which, int k, double s0) {
  u.validate();
  v.validate();
  require_same_grid(u.grid, v.grid, "bilinear_lhs");
  if (u.nt() != v.nt() || std::abs(u.dt - v.dt) > 1e-14 * u.dt || std::abs(u.t0 - v.t0) > 1e-14)
    throw std::invalid_argument("bilinear_lhs: time grids differ");
  double acc = 0.0;
  for (int n = 0; n < u.nt(); ++n) {
    SpecField2 U = fft_forward(u.slices[n]), V = fft_forward(v.slices[n]);
    if (which == BilinearFamily::bil1) U = dyadic_project(U, Axis::y, Dyadic::P_k, k);
    if (which == BilinearFamily::bil2) V = dyadic_project(V, Axis::y, Dyadic::P_k, k);
    const Field2 prod = bilinear_pseudoproduct(fft_inverse(U), fft_inverse(V), BilinearSymbol::x_minus, 0.5);
    SpecField2 W = apply_potential(fft_forward(prod), Potential::riesz_x, 0.5);
    if (which == BilinearFamily::bil3) W = dyadic_project(W, Axis::y, Dyadic::P_k, k);
    if (which == BilinearFamily::bil4) W = apply_potential(W, Potential::bessel_y, -s0);
    const double w = (n == 0 || n == u.nt() - 1) ? 0.5 : 1.0;
    acc += w * std::pow(l2_norm(W), 2);
  }
  return std::sqrt(acc * u.dt);
}

}  // namespace zk
