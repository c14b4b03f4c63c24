#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "zklab/estimates.hpp"
#include "zklab/fft.hpp"
#include "zklab/rng.hpp"
#include "zklab/symmetrizer.hpp"

namespace zk {

Field2 random_field(const Grid2& g, const Ensemble& e, std::uint64_t index) {
  g.validate();
  if (e.band_x < 0 || e.band_y < 0) throw std::invalid_argument("random_field: negative band");
  if (3 * e.band_x > g.nx || 3 * e.band_y > g.ny)
    throw std::invalid_argument("random_field: band exceeds the two-thirds limit of the grid");
  std::mt19937_64 rng = make_stream(e.seed, index, Stream::field);
  std::normal_distribution<double> normal;
  SpecField2 F(g);
  for (int k = 0; k <= e.band_x; ++k)
    for (int m = -e.band_y; m <= e.band_y; ++m) {
      if (k == 0 && m < 0) continue;
      const double re = normal(rng), im = normal(rng);
      const double decay = 1.0 / (1.0 + k * k + m * m);
      const std::complex<double> c =
          k == 0 && m == 0 ? std::complex<double>(re * decay, 0.0)
                           : std::complex<double>(re, im) * (decay / std::numbers::sqrt2);
      F.at(k, m) = c;
      F.at(-k, -m) = std::conj(c);
    }
  Field2 f = fft_inverse(F);
  const double norm = l2_norm(f);
  if (norm > 0.0) f *= 1.0 / norm;
  return f;
}

FreeWave::FreeWave(const Field2& phi) : grid_(phi.grid) {
  const SpecField2 F = fft_forward(phi);
  const double peak = F.coeffs.abs().maxCoeff();
  if (peak == 0.0) return;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      const std::complex<double> c = F.coeffs(i, j);
      if (std::abs(c) <= 1e-14 * peak) continue;
      const long double omega = symbol_symmetric<long double>(grid_.xi_odd(i), grid_.eta_odd(j));
      modes_.push_back({i, j, c, omega});
      bandwidth_ = std::max(bandwidth_, static_cast<double>(std::abs(omega)));
    }
}

SpecField2 FreeWave::spectrum(double t) const {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  SpecField2 F(grid_);
  for (const Mode& m : modes_) {
    const long double theta = std::fmod(static_cast<long double>(t) * m.omega, two_pi);
    F.coeffs(m.i, m.j) = m.coeff * std::complex<double>(static_cast<double>(std::cos(theta)),
                                                        static_cast<double>(std::sin(theta)));
  }
  return F;
}

Field2 FreeWave::field(double t) const { return fft_inverse(spectrum(t)); }

SpaceTimeField sample_free_solution(const FreeWave& w, const TemporalProfile& g, double t0, double t1,
                                    int nt) {
  if (nt < 2 || !(t1 > t0)) throw std::invalid_argument("sample_free_solution: bad time window");
  const double dt = (t1 - t0) / (nt - 1);
  const std::vector<double> env = g.sample(t0, dt, nt);
  std::vector<Field2> slices;
  slices.reserve(nt);
  for (int n = 0; n < nt; ++n) {
    if (env[n] == 0.0) {
      slices.emplace_back(w.grid());
      continue;
    }
    Field2 f = w.field(t0 + n * dt);
    f *= env[n];
    slices.push_back(std::move(f));
  }
  return SpaceTimeField(w.grid(), t0, dt, std::move(slices));
}

}  // namespace zk
