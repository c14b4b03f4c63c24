#include "zklab/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "zklab/fft.hpp"
#include "zklab/propagator.hpp"
#include "zklab/spectral.hpp"
#include "zklab/symmetrizer.hpp"

namespace zk {

namespace {

const double kNonlinCoeff = SymmetrizerConstants<double>::standard().nonlin_coeff;

SpecField2 nonlinearity_spectral(const SpecField2& V) {
  const Field2 v = fft_inverse(V);
  const SpecField2 sq = dealias(fft_forward(Field2(v.grid, v.values.square())));
  const Grid2& g = V.grid;
  return apply_multiplier(sq, [&](int i, int j) {
    return std::complex<double>(0.0, kNonlinCoeff * (g.xi_odd(i) + g.eta_odd(j)));
  });
}

void require_finite(const SpecField2& F, const char* where) {
  if (!F.coeffs.isFinite().all())
    throw std::runtime_error(std::string(where) + ": non-finite values (overflow); reduce T or the data");
}

double relative_drift(double initial, double final) {
  const double diff = std::abs(final - initial);
  return initial != 0.0 ? diff / std::abs(initial) : diff;
}

void fill_diagnostics(SolveResult& r, const Field2& phi) {
  const Field2& last = r.trajectory.slices.back();
  const double m0 = std::pow(l2_norm(phi), 2), m1 = std::pow(l2_norm(last), 2);
  r.l2_drift = relative_drift(m0, m1);
  r.energy_drift = relative_drift(energy(phi), energy(last));
}

SpaceTimeField to_trajectory(const SolveConfig& cfg, const std::vector<SpecField2>& spec) {
  std::vector<Field2> slices;
  slices.reserve(spec.size());
  for (const auto& F : spec) slices.push_back(fft_inverse(F));
  return SpaceTimeField(cfg.grid, 0.0, cfg.dt(), std::move(slices));
}

// I(u)(t_n) for every n from pulled-back integrand samples U(-t_j) N(u(t_j)).
std::vector<SpecField2> duhamel_all(const Propagator& prop, const std::vector<SpecField2>& pulled,
                                    double dt) {
  const int count = static_cast<int>(pulled.size());
  std::vector<SpecField2> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) {
    const QuadratureWeights q = quadrature_weights(n);
    SpecField2 acc(prop.grid());
    for (int j = 0; j <= n; ++j) acc.coeffs += q.weights[j] * pulled[j].coeffs;
    acc.coeffs *= dt;
    out.push_back(prop.evolve(std::move(acc), n * dt));
  }
  return out;
}

std::vector<SpecField2> pulled_back_forcing(const Propagator& prop,
                                            const std::vector<SpecField2>& u, double dt) {
  std::vector<SpecField2> g;
  g.reserve(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    g.push_back(prop.evolve(nonlinearity_spectral(u[j]), -static_cast<double>(j) * dt));
  return g;
}

}  // namespace

void SolveConfig::validate() const {
  grid.validate();
  if (!(T > 0.0) || T > 4.0) throw std::invalid_argument("SolveConfig: need 0 < T <= 4");
  if (nt < 2 || nt % 2 != 0) throw std::invalid_argument("SolveConfig: nt must be even and >= 2");
  if (max_picard_iters < 1) throw std::invalid_argument("SolveConfig: max_picard_iters must be >= 1");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("SolveConfig: picard_tol must be positive");
}

Field2 nonlinearity(const Field2& v) { return fft_inverse(nonlinearity_spectral(fft_forward(v))); }

double energy(const Field2& v) {
  const SpecField2 V = fft_forward(v);
  const Grid2& g = v.grid;
  double quadratic = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double xi = g.xi(i), eta = g.eta(j);
      quadratic += (xi * xi - xi * eta + eta * eta) * std::norm(V.coeffs(i, j));
    }
  quadratic *= 0.5 / g.area();
  // int v^3 = int v * P(v^2); exact whenever v itself is two-thirds band limited.
  const SpecField2 sq = fft_forward(Field2(g, v.values.square()));
  const double cubic = (V.coeffs * sq.coeffs.conjugate()).real().sum() / g.area();
  return quadratic + kNonlinCoeff * cubic / 3.0;
}

SolveResult picard_solve(const Field2& phi, const SolveConfig& cfg) {
  cfg.validate();
  require_same_grid(cfg.grid, phi.grid, "picard_solve");
  const Propagator prop(cfg.grid);
  const double dt = cfg.dt();
  const SpecField2 phi_hat = fft_forward(phi);

  std::vector<SpecField2> linear;
  for (int n = 0; n <= cfg.nt; ++n) linear.push_back(prop.evolve(phi_hat, n * dt));

  SolveResult r;
  r.method = "picard";
  r.status = SolveStatus::divergent;
  std::vector<SpecField2> u = linear;
  const double blowup = 1e8 * (1.0 + l2_norm(phi_hat));
  for (int it = 0; it < cfg.max_picard_iters; ++it) {
    std::vector<SpecField2> next = linear;
    if (cfg.nonlinearity_on) {
      const auto duh = duhamel_all(prop, pulled_back_forcing(prop, u, dt), dt);
      for (int n = 0; n <= cfg.nt; ++n) next[n].coeffs += duh[n].coeffs;
    }
    double residual = 0.0;
    for (int n = 0; n <= cfg.nt; ++n) {
      require_finite(next[n], "picard_solve");
      residual = std::max(residual, l2_norm(next[n] - u[n]));
    }
    r.picard_residuals.push_back(residual);
    u = std::move(next);
    if (residual < cfg.picard_tol) {
      r.status = SolveStatus::converged;
      break;
    }
    if (residual > blowup) break;
  }
  r.trajectory = to_trajectory(cfg, u);
  fill_diagnostics(r, phi);
  return r;
}

SolveResult reference_solve(const Field2& phi, const SolveConfig& cfg) {
  cfg.validate();
  require_same_grid(cfg.grid, phi.grid, "reference_solve");
  const Propagator prop(cfg.grid);
  const double h = cfg.dt();

  // Interaction picture w = U(-t) v, dw/dt = U(-t) N(U(t) w).
  auto rhs = [&](double t, const SpecField2& w) {
    if (!cfg.nonlinearity_on) return SpecField2(cfg.grid);
    return prop.evolve(nonlinearity_spectral(prop.evolve(w, t)), -t);
  };

  std::vector<SpecField2> v;
  v.reserve(cfg.nt + 1);
  SpecField2 w = fft_forward(phi);
  v.push_back(w);
  for (int n = 0; n < cfg.nt; ++n) {
    const double t = n * h;
    const SpecField2 k1 = rhs(t, w);
    const SpecField2 k2 = rhs(t + 0.5 * h, SpecField2(cfg.grid, w.coeffs + 0.5 * h * k1.coeffs));
    const SpecField2 k3 = rhs(t + 0.5 * h, SpecField2(cfg.grid, w.coeffs + 0.5 * h * k2.coeffs));
    const SpecField2 k4 = rhs(t + h, SpecField2(cfg.grid, w.coeffs + h * k3.coeffs));
    w.coeffs += (h / 6.0) * (k1.coeffs + 2.0 * k2.coeffs + 2.0 * k3.coeffs + k4.coeffs);
    require_finite(w, "reference_solve");
    v.push_back(prop.evolve(w, (n + 1) * h));
  }

  SolveResult r;
  r.method = "if-rk4";
  r.trajectory = to_trajectory(cfg, v);
  fill_diagnostics(r, phi);
  return r;
}

double fixed_point_defect(const SpaceTimeField& u, const Field2& phi) {
  u.validate();
  if (std::abs(u.t0) > 1e-12) throw std::invalid_argument("fixed_point_defect: trajectory must start at t = 0");
  const Propagator prop(u.grid);
  std::vector<SpecField2> spec;
  for (const auto& s : u.slices) spec.push_back(fft_forward(s));
  const auto duh = duhamel_all(prop, pulled_back_forcing(prop, spec, u.dt), u.dt);
  const SpecField2 phi_hat = fft_forward(phi);
  double worst = 0.0;
  for (int n = 0; n < u.nt(); ++n) {
    SpecField2 d = spec[n] - prop.evolve(phi_hat, u.time(n)) - duh[n];
    worst = std::max(worst, l2_norm(d));
  }
  return worst;
}

}  // namespace zk
