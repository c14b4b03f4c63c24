#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "zklab/grid.hpp"

namespace zk::test {

// Real trig polynomial sum a_km cos(k x + m y + p_km) over |k| <= bx, |m| <= by,
// sampled directly (no transforms involved).
struct TrigPoly {
  struct Term {
    int k, m;
    double a, p;
  };
  std::vector<Term> terms;

  static TrigPoly random(int bx, int by, std::uint64_t seed, bool with_mean = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    TrigPoly t;
    for (int k = 0; k <= bx; ++k)
      for (int m = -by; m <= by; ++m) {
        if (k == 0 && m < 0) continue;
        if (k == 0 && m == 0 && !with_mean) continue;
        t.terms.push_back({k, m, n(rng) / (1.0 + k * k + m * m), k == 0 && m == 0 ? 0.0 : ph(rng)});
      }
    return t;
  }

  [[nodiscard]] double operator()(double x, double y) const {
    double v = 0.0;
    for (const auto& e : terms) v += e.a * std::cos(e.k * x + e.m * y + e.p);
    return v;
  }
  [[nodiscard]] Field2 sample(const Grid2& g) const { return Field2::from_function(g, *this); }
};

// Fourier coefficients by the defining sum, O(n^4).
inline SpecField2 naive_dft(const Field2& f) {
  const Grid2& g = f.grid;
  SpecField2 F(g);
  for (int jj = 0; jj < g.ny; ++jj)
    for (int ii = 0; ii < g.nx; ++ii) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          acc += f.values(i, j) * std::polar(1.0, -(g.xi(ii) * g.x(i) + g.eta(jj) * g.y(j)));
      F.coeffs(ii, jj) = acc * g.cell_area();
    }
  return F;
}

inline double max_abs_diff(const Field2& a, const Field2& b) { return (a.values - b.values).abs().maxCoeff(); }
inline double max_abs_diff(const SpecField2& a, const SpecField2& b) {
  return (a.coeffs - b.coeffs).abs().maxCoeff();
}

}  // namespace zk::test
