#include "zklab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zklab/fft.hpp"
#include "zklab/spectral.hpp"
#include "zklab/symmetrizer.hpp"

namespace zk {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGLNodes = {-0.9602898564975363, -0.7966664774136267,
                                            -0.5255324099163290, -0.1834346424956498,
                                            0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights = {0.1012285362903763, 0.2223810344533745,
                                              0.3137066458778873, 0.3626837833783620,
                                              0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

template <typename F>
double gauss_legendre(F&& f, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < kGLNodes.size(); ++k) sum += kGLWeights[k] * f(mid + half * kGLNodes[k]);
  return half * sum;
}

template <typename F>
double composite_gauss_legendre(F&& f, double a, double b, double max_panel) {
  if (a == b) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_panel)));
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += gauss_legendre(f, a + p * h, a + (p + 1) * h);
  return sum;
}

double smooth_step_kernel(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double spatial_weight(const Grid2& g, int i, int j, double s, SpatialWeight w) {
  if (s == 0.0) return 1.0;
  const double xi = g.xi(i), eta = g.eta(j);
  const double r2 = w == SpatialWeight::full ? xi * xi + eta * eta : xi * xi;
  return std::pow(1.0 + r2, 0.5 * s);
}

// Angular frequency of temporal storage index n on a period of nt samples.
// The Nyquist entry is mapped to 0 so the symbol stays even in (tau, xi, eta).
double tau_of(int n, int nt, double period) {
  if (nt % 2 == 0 && n == nt / 2) return 0.0;
  return 2.0 * kPi * Grid2::wavenumber(n, nt) / period;
}

// Space-time spectrum: rows index time samples, columns index spatial modes
// (mode = i + nx * j). Returns column activity flags.
struct SpaceTimeSpectrum {
  Eigen::ArrayXXcd data;
  std::vector<char> active;
  double omega_active = 0.0;
};

SpaceTimeSpectrum space_time_spectrum(const SpaceTimeField& u) {
  u.validate();
  const Grid2& g = u.grid;
  const int nt = u.nt();
  const int modes = g.nx * g.ny;
  SpaceTimeSpectrum st;
  st.data.resize(nt, modes);
  for (int n = 0; n < nt; ++n) {
    const SpecField2 F = fft_forward(u.slices[n]);
    st.data.row(n) = Eigen::Map<const Eigen::ArrayXcd>(F.coeffs.data(), modes).transpose();
  }
  const Eigen::ArrayXd col_max = st.data.abs().colwise().maxCoeff().transpose();
  const double global = col_max.size() ? col_max.maxCoeff() : 0.0;
  st.active.assign(modes, 0);
  const double threshold = 1e-10 * global;
  for (int m = 0; m < modes; ++m) {
    if (global > 0.0 && col_max(m) > threshold) {
      st.active[m] = 1;
      const int i = m % g.nx, j = m / g.nx;
      st.omega_active = std::max(
          st.omega_active, std::abs(symbol_symmetric(g.xi_odd(i), g.eta_odd(j))));
    }
  }
  std::vector<std::complex<double>> scratch;
  for (int m = 0; m < modes; ++m) {
    if (!st.active[m]) continue;
    detail::dft_inplace<double>({st.data.col(m).data(), static_cast<std::size_t>(nt)}, false,
                                scratch);
  }
  st.data *= u.dt;
  return st;
}

// sum |v|^q, with repeated multiplication for small integer q.
double power_sum(const Eigen::ArrayXXd& v, double q) {
  if (q == 2.0) return v.square().sum();
  if (q == 4.0) return v.square().square().sum();
  if (q == std::floor(q) && q >= 1.0 && q <= 8.0) {
    const Eigen::ArrayXXd a = v.abs();
    Eigen::ArrayXXd acc = a;
    for (int k = 1; k < static_cast<int>(q); ++k) acc *= a;
    return acc.sum();
  }
  return v.abs().pow(q).sum();
}

void check_resolution(const SpaceTimeField& u, double bandwidth) {
  const double window = u.t1() - u.t0;
  const int required = required_time_samples(window, bandwidth);
  if (u.nt() < required)
    throw ResolutionError("X^{s,b}: time grid too coarse; need nt >= " + std::to_string(required) +
                              " (have " + std::to_string(u.nt()) + ")",
                          required);
}

}  // namespace

double TimeCutoff::profile(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = smooth_step_kernel(2.0 - a);
  return up / (up + smooth_step_kernel(a - 1.0));
}

std::vector<double> TemporalProfile::sample(double t_start, double dt, int count) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  const double delta = delta_;
  const TimeCutoff& c = cutoff_;
  auto forcing = [&](double s) { return std::cos(delta * s) * c(s); };
  switch (kind_) {
    case Kind::window:
      for (int n = 0; n < count; ++n) out[n] = c(t_start + n * dt);
      break;
    case Kind::modulated:
      for (int n = 0; n < count; ++n) out[n] = forcing(t_start + n * dt);
      break;
    case Kind::duhamel: {
      const double max_panel = c.T() / 32.0;
      double primitive = composite_gauss_legendre(forcing, 0.0, t_start, max_panel);
      for (int n = 0; n < count; ++n) {
        const double t = t_start + n * dt;
        if (n > 0) primitive += composite_gauss_legendre(forcing, t - dt, t, max_panel);
        out[n] = c(t) * primitive;
      }
      break;
    }
  }
  return out;
}

int required_time_samples(double window_length, double temporal_bandwidth) {
  return static_cast<int>(std::ceil(4.0 * window_length * temporal_bandwidth / (2.0 * kPi) - 1e-9));
}

double weighted_spatial_norm(const Field2& phi, double s, SpatialWeight weight) {
  const SpecField2 F = fft_forward(phi);
  const Grid2& g = phi.grid;
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double w = spatial_weight(g, i, j, s, weight);
      sum += w * w * std::norm(F.coeffs(i, j));
    }
  return std::sqrt(sum / g.area());
}

double sobolev_norm(const Field2& phi, double s) {
  return weighted_spatial_norm(phi, s, SpatialWeight::full);
}

double mixed_norm(const SpaceTimeField& u, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("mixed_norm: need p, q >= 1");
  u.validate();
  const double dA = u.grid.cell_area();
  double outer = 0.0;
  for (int n = 0; n < u.nt(); ++n) {
    const double inner = std::pow(power_sum(u.slices[n].values, q) * dA, 1.0 / q);
    const double w = (n == 0 || n == u.nt() - 1) ? 0.5 : 1.0;
    outer += w * std::pow(inner, p);
  }
  return std::pow(outer * u.dt, 1.0 / p);
}

double temporal_weighted_norm(const TemporalProfile& g, double b) {
  constexpr int M = 1 << 16;
  const double period = 16.0 * g.support_radius();
  const double dt = period / M;
  const std::vector<double> samples = g.sample(-0.5 * period, dt, M);
  std::vector<std::complex<double>> data(samples.begin(), samples.end());
  std::vector<std::complex<double>> scratch;
  detail::dft_inplace<double>(data, false, scratch);
  double sum = 0.0;
  for (int n = 0; n < M; ++n) {
    const double tau = 2.0 * kPi * Grid2::wavenumber(n, M) / period;
    const double w = b == 0.0 ? 1.0 : std::pow(1.0 + tau * tau, b);
    sum += w * std::norm(data[n] * dt);
  }
  return std::sqrt(sum / period);
}

XsbAnalysis xsb_analysis(const SpaceTimeField& u, const NormSpec& spec,
                         std::optional<double> temporal_bandwidth) {
  SpaceTimeSpectrum st = space_time_spectrum(u);
  XsbAnalysis out;
  out.temporal_bandwidth = temporal_bandwidth.value_or(st.omega_active);
  out.required_nt = required_time_samples(u.t1() - u.t0, out.temporal_bandwidth);
  check_resolution(u, out.temporal_bandwidth);

  const Grid2& g = u.grid;
  const int nt = u.nt();
  const double period = nt * u.dt;
  out.mode_energy = Eigen::ArrayXXd::Zero(g.nx, g.ny);
  std::vector<double> tau(nt);
  for (int n = 0; n < nt; ++n) tau[n] = tau_of(n, nt, period);

  double total = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int m = i + g.nx * j;
      if (!st.active[m]) continue;
      const double omega = symbol_symmetric(g.xi_odd(i), g.eta_odd(j));
      const double ws = spatial_weight(g, i, j, spec.s, spec.spatial_weight);
      double sum = 0.0;
      for (int n = 0; n < nt; ++n) {
        const double sigma = tau[n] - omega;
        const double wb = spec.b == 0.0 ? 1.0 : std::pow(1.0 + sigma * sigma, spec.b);
        sum += wb * std::norm(st.data(n, m));
      }
      const double e = ws * ws * sum / (period * g.area());
      out.mode_energy(i, j) = e;
      total += e;
    }
  out.norm = std::sqrt(total);
  return out;
}

double xsb_norm_direct(const SpaceTimeField& u, const NormSpec& spec,
                       std::optional<double> temporal_bandwidth) {
  return xsb_analysis(u, spec, temporal_bandwidth).norm;
}

double xsb_norm_factorized(const Field2& phi, const TemporalProfile& profile, const NormSpec& spec) {
  return temporal_weighted_norm(profile, spec.b) * weighted_spatial_norm(phi, spec.s, spec.spatial_weight);
}

double xsb_norm_factorized(const Field2& phi, const TimeCutoff& cutoff, const NormSpec& spec) {
  return xsb_norm_factorized(phi, TemporalProfile::window(cutoff), spec);
}

SpaceTimeField modulation_weight(const SpaceTimeField& u, double b,
                                 std::optional<double> temporal_bandwidth) {
  SpaceTimeSpectrum st = space_time_spectrum(u);
  check_resolution(u, temporal_bandwidth.value_or(st.omega_active));
  if (b == 0.0) return u;

  const Grid2& g = u.grid;
  const int nt = u.nt();
  const double period = nt * u.dt;
  std::vector<std::complex<double>> scratch;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int m = i + g.nx * j;
      if (!st.active[m]) continue;
      const double omega = symbol_symmetric(g.xi_odd(i), g.eta_odd(j));
      for (int n = 0; n < nt; ++n) {
        const double sigma = tau_of(n, nt, period) - omega;
        st.data(n, m) *= std::pow(1.0 + sigma * sigma, 0.5 * b);
      }
      detail::dft_inplace<double>({st.data.col(m).data(), static_cast<std::size_t>(nt)}, true,
                                  scratch);
    }
  st.data /= u.dt;

  SpaceTimeField out = u;
  const int modes = g.nx * g.ny;
  for (int n = 0; n < nt; ++n) {
    SpecField2 F(g);
    for (int m = 0; m < modes; ++m) F.coeffs(m % g.nx, m / g.nx) = st.active[m] ? st.data(n, m) : 0.0;
    out.slices[n] = fft_inverse(F);
  }
  return out;
}

double bilinear_symbol(BilinearSymbol symbol, double first, double second, double s) {
  double a = 0.0;
  switch (symbol) {
    case BilinearSymbol::x_minus:
    case BilinearSymbol::y_minus: a = first - second; break;
    case BilinearSymbol::x_plus:
    case BilinearSymbol::y_plus: a = first + 2.0 * second; break;
  }
  return s == 0.0 ? 1.0 : std::pow(std::abs(a), s);
}

namespace {

void require_band_limited(const Field2& f, const char* which) {
  const SpecField2 F = fft_forward(f);
  const double scale = F.coeffs.abs().maxCoeff();
  const double outside = (F - dealias(F)).coeffs.abs().maxCoeff();
  if (outside > 1e-10 * scale)
    throw std::invalid_argument(std::string("bilinear_pseudoproduct: ") + which +
                                " has content outside the two-thirds band");
}

// x-axis version; y symbols are handled by transposing.
Eigen::ArrayXXd pseudoproduct_x(const Eigen::ArrayXXd& f, const Eigen::ArrayXXd& g, double lx,
                                BilinearSymbol symbol, double s) {
  const int nx = static_cast<int>(f.rows());
  const int ny = static_cast<int>(f.cols());
  Eigen::ArrayXXcd fx = f.cast<std::complex<double>>();
  Eigen::ArrayXXcd gx = g.cast<std::complex<double>>();
  detail::dft_axis_x<double>(fx, false);
  detail::dft_axis_x<double>(gx, false);

  // Frequencies that carry content in some column.
  const double scale = std::max(fx.abs().maxCoeff(), gx.abs().maxCoeff());
  std::vector<int> f_live, g_live;
  for (int i = 0; i < nx; ++i) {
    if (fx.row(i).abs().maxCoeff() > 1e-14 * scale) f_live.push_back(i);
    if (gx.row(i).abs().maxCoeff() > 1e-14 * scale) g_live.push_back(i);
  }

  const double dxi = 2.0 * kPi / lx;
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(nx, ny);
  for (int i1 : f_live) {
    const int k1 = Grid2::wavenumber(i1, nx);
    for (int i2 : g_live) {
      const int k2 = Grid2::wavenumber(i2, nx);
      const double a = bilinear_symbol(symbol, dxi * k1, dxi * k2, s) / nx;
      if (a == 0.0) continue;
      const int i = Grid2::storage_index(k1 + k2, nx);
      out.row(i) += a * fx.row(i1) * gx.row(i2);
    }
  }
  detail::dft_axis_x<double>(out, true);
  return out.real();
}

}  // namespace

Field2 bilinear_pseudoproduct(const Field2& f, const Field2& g, BilinearSymbol symbol, double s) {
  require_same_grid(f.grid, g.grid, "bilinear_pseudoproduct");
  require_band_limited(f, "first factor");
  require_band_limited(g, "second factor");
  const Grid2& grid = f.grid;
  Eigen::ArrayXXd raw;
  if (symbol == BilinearSymbol::x_minus || symbol == BilinearSymbol::x_plus) {
    raw = pseudoproduct_x(f.values, g.values, grid.lx, symbol, s);
  } else {
    const Eigen::ArrayXXd ft = f.values.transpose(), gt = g.values.transpose();
    raw = pseudoproduct_x(ft, gt, grid.ly, symbol, s).transpose();
  }
  return fft_inverse(dealias(fft_forward(Field2(grid, std::move(raw)))));
}

}  // namespace zk
