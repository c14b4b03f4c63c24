#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "support.hpp"
#include "zklab/norms.hpp"
#include "zklab/propagator.hpp"
#include "zklab/spectral.hpp"

using namespace zk;
using zk::test::TrigPoly;

namespace {

const double pi = std::numbers::pi;

// g(t) U(t) phi at nt points on [t0, t1], by per-slice propagation.
SpaceTimeField envelope_wave(const Field2& phi, const TemporalProfile& prof, double t0, double t1, int nt) {
  const Propagator U(phi.grid);
  const SpecField2 F = fft_forward(phi);
  const double dt = (t1 - t0) / (nt - 1);
  const std::vector<double> env = prof.sample(t0, dt, nt);
  std::vector<Field2> slices;
  for (int n = 0; n < nt; ++n) slices.push_back(env[n] * fft_inverse(U.evolve(F, t0 + n * dt)));
  return SpaceTimeField(phi.grid, t0, dt, std::move(slices));
}

double dense_l2(auto&& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * f(a + i * h) * f(a + i * h);
  return std::sqrt(s * h);
}

}  // namespace

TEST_CASE("cutoff profile") {
  for (double t = -3.0; t <= 3.0; t += 0.01) {
    const double v = TimeCutoff::profile(t);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == TimeCutoff::profile(-t));
    if (std::abs(t) <= 1.0) CHECK(v == 1.0);
    if (std::abs(t) >= 2.0) CHECK(v == 0.0);
  }
  // flat to all orders at the junctions
  CHECK(1.0 - TimeCutoff::profile(1.04) < 1e-8);
  CHECK(TimeCutoff::profile(1.96) < 1e-8);
  const TimeCutoff c(0.25);
  CHECK(c(0.5) == doctest::Approx(TimeCutoff::profile(2.0)));
  CHECK(c.support_radius() == 0.5);
  CHECK_THROWS_AS(TimeCutoff(0.0), std::invalid_argument);
}

TEST_CASE("temporal weighted norm at b = 0 is the L2 norm of the envelope") {
  for (double T : {0.25, 1.0}) {
    const TimeCutoff c(T);
    CHECK(temporal_weighted_norm(TemporalProfile::window(c), 0.0) ==
          doctest::Approx(dense_l2([&](double t) { return c(t); }, -2 * T, 2 * T)).epsilon(1e-8));
    auto mod = [&](double t) { return std::cos(7.0 * t) * c(t); };
    CHECK(temporal_weighted_norm(TemporalProfile::modulated(c, 7.0), 0.0) ==
          doctest::Approx(dense_l2(mod, -2 * T, 2 * T)).epsilon(1e-8));
  }
}

TEST_CASE("temporal weighted norm grows with b") {
  const auto p = TemporalProfile::window(TimeCutoff(0.5));
  double prev = 0.0;
  for (double b : {-0.5, 0.0, 0.3, 0.55, 1.0}) {
    const double v = temporal_weighted_norm(p, b);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("sobolev norms") {
  const Grid2 g(32, 32);
  const Field2 f = TrigPoly::random(8, 8, 5).sample(g);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  double prev = 0.0;
  for (double s : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    CHECK(sobolev_norm(f, s) >= prev);
    prev = sobolev_norm(f, s);
  }
  // cos(2x + 3y) has L2 norm sqrt(area / 2)
  const Field2 m = Field2::from_function(g, [&](double x, double y) { return std::cos(2 * x + 3 * y); });
  const Field2 unit = (1.0 / std::sqrt(g.area() / 2)) * m;
  CHECK(sobolev_norm(unit, 0.7) == doctest::Approx(std::pow(14.0, 0.35)).epsilon(1e-12));
  CHECK(weighted_spatial_norm(unit, 0.7, SpatialWeight::x_only) == doctest::Approx(std::pow(5.0, 0.35)).epsilon(1e-12));
}

TEST_CASE("mixed norms") {
  const Grid2 g(16, 16, 2.0, 3.0);
  const double V = g.area();
  // constant field: W^{1/p} V^{1/q}
  {
    const int nt = 11;
    const auto u = SpaceTimeField(g, 0.0, 0.5 / (nt - 1),
                                  std::vector<Field2>(nt, Field2::from_function(g, [](double, double) { return 1.0; })));
    for (auto [p, q] : {std::pair{2.0, 2.0}, {4.0, 4.0}, {6.0, 3.0}, {5.0, 5.0}})
      CHECK(mixed_norm(u, p, q) == doctest::Approx(std::pow(0.5, 1 / p) * std::pow(V, 1 / q)).epsilon(1e-12));
  }
  // separable a(t) b(x, y): L4 norms factor (trapezoid in t, grid sum in space)
  const Field2 b = TrigPoly::random(4, 4, 3).sample(g);
  const int nt = 41;
  const double dt = 1.0 / (nt - 1);
  std::vector<Field2> slices;
  std::vector<double> a;
  for (int n = 0; n < nt; ++n) {
    a.push_back(std::sin(3 * n * dt) + 0.2);
    slices.push_back(a.back() * b);
  }
  const SpaceTimeField u(g, 0.0, dt, slices);
  double at4 = 0.0, at2 = 0.0;
  for (int n = 0; n < nt; ++n) {
    const double w = (n == 0 || n == nt - 1 ? 0.5 : 1.0) * dt;
    at4 += w * std::pow(a[n], 4);
    at2 += w * a[n] * a[n];
  }
  const double bx4 = std::pow((b.values.pow(4)).sum() * g.cell_area(), 0.25);
  CHECK(mixed_norm(u, 4, 4) == doctest::Approx(std::pow(at4, 0.25) * bx4).epsilon(1e-10));
  CHECK(mixed_norm(u, 2, 2) == doctest::Approx(std::sqrt(at2) * l2_norm(b)).epsilon(1e-12));
}

TEST_CASE("direct X^{s,b} norm at s = b = 0 is the space-time L2 norm") {
  const Grid2 g(16, 16);
  const Field2 phi = TrigPoly::random(4, 4, 2).sample(g);
  const TimeCutoff c(0.5);
  const SpaceTimeField u = envelope_wave(phi, TemporalProfile::window(c), -1.1, 1.1, 512);
  double s = 0.0;
  for (const auto& f : u.slices) s += std::pow(l2_norm(f), 2);
  CHECK(xsb_norm_direct(u, NormSpec{}) == doctest::Approx(std::sqrt(s * u.dt)).epsilon(1e-12));
  CHECK(xsb_norm_factorized(phi, c, NormSpec{}) ==
        doctest::Approx(temporal_weighted_norm(TemporalProfile::window(c), 0.0) * l2_norm(phi)).epsilon(1e-12));
}

TEST_CASE("direct path enforces the tau resolution rule") {
  const Grid2 g(32, 32);
  const Field2 phi = TrigPoly::random(8, 8, 2).sample(g);
  const SpaceTimeField u = envelope_wave(phi, TemporalProfile::window(TimeCutoff(0.5)), -1.1, 1.1, 256);
  CHECK_THROWS_AS(xsb_norm_direct(u, NormSpec{0.5, 0.5}), ResolutionError);
  CHECK(required_time_samples(2.2, 1024.0) == static_cast<int>(std::ceil(4 * 2.2 * 1024 / (2 * pi))));
}

TEST_CASE("direct and factorized X^{s,b} agree on band-8 windowed free waves") {
  const Grid2 g(32, 32);
  const TimeCutoff c(0.5);
  const NormSpec spec{0.6, 0.55};
  const int nt = 2048;  // >= 4 * 2.2 * 1024 / (2 pi)
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field2 phi = TrigPoly::random(8, 8, seed).sample(g);
    const SpaceTimeField u = envelope_wave(phi, TemporalProfile::window(c), -1.1, 1.1, nt);
    const double direct = xsb_norm_direct(u, spec), fact = xsb_norm_factorized(phi, c, spec);
    worst = std::max(worst, std::abs(direct - fact) / fact);
  }
  CHECK(worst < 0.02);
}

TEST_CASE("modulated and Duhamel envelopes factorize too") {
  const Grid2 g(16, 16);
  const TimeCutoff c(0.5);
  const Field2 phi = TrigPoly::random(4, 4, 77).sample(g);
  const NormSpec spec{0.5, -1.0 / 3.0};
  for (const auto& prof : {TemporalProfile::modulated(c, 40.0), TemporalProfile::duhamel(c, 8.0)}) {
    const double bw = 128.0 + 40.0 + 20.0;
    const int nt = required_time_samples(2.4, bw) + 64;
    const SpaceTimeField u = envelope_wave(phi, prof, -1.2, 1.2, nt);
    const double direct = xsb_norm_direct(u, spec, bw), fact = xsb_norm_factorized(phi, prof, spec);
    CHECK(std::abs(direct - fact) / fact < 0.02);
  }
}

TEST_CASE("Duhamel envelope matches the Duhamel integral of the modulated forcing") {
  // psi_T(t) int_0^t U(t - s) cos(d s) psi_T(s) U(s) g ds = h(t) U(t) g
  const Grid2 g(16, 16);
  const Propagator U(g);
  const TimeCutoff c(0.5);
  const double d = 6.0, t1 = 1.0;
  const int panels = 400;
  const Field2 g0 = TrigPoly::random(3, 3, 4).sample(g);
  const auto forcing_env = TemporalProfile::modulated(c, d).sample(0.0, t1 / panels, panels + 1);
  std::vector<Field2> slices;
  for (int n = 0; n <= panels; ++n) slices.push_back(forcing_env[n] * U.evolve(g0, n * t1 / panels));
  const SpaceTimeField f(g, 0.0, t1 / panels, slices);
  const auto h = TemporalProfile::duhamel(c, d).sample(0.0, t1 / panels, panels + 1);
  for (int n : {50, 200, 333, 400}) {
    const double t = n * t1 / panels;
    const Field2 expect = h[n] * U.evolve(g0, t);
    CHECK(test::max_abs_diff(c(t) * duhamel(f, t).value, expect) < 1e-9);
  }
}

TEST_CASE("T^{1/2} scaling of the factorized norm at b = 0") {
  const Grid2 g(16, 16);
  const Field2 phi = TrigPoly::random(4, 4, 6).sample(g);
  std::vector<double> x, y;
  for (double T : {0.25, 0.5, 1.0}) {
    x.push_back(std::log(T));
    y.push_back(std::log(xsb_norm_factorized(phi, TimeCutoff(T), NormSpec{0.5, 0.0})));
  }
  const double slope = (y[2] - y[0]) / (x[2] - x[0]);
  CHECK(slope == doctest::Approx(0.5).epsilon(0.04));
  CHECK((y[1] - y[0]) / (x[1] - x[0]) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("monotone in b and homogeneous") {
  const Grid2 g(16, 16);
  const Field2 phi = TrigPoly::random(4, 4, 8).sample(g);
  const TimeCutoff c(0.5);
  const SpaceTimeField u = envelope_wave(phi, TemporalProfile::window(c), -1.1, 1.1, 512);
  double prev = 0.0;
  for (double b : {-0.4, 0.0, 0.3, 0.6}) {
    const double v = xsb_norm_direct(u, NormSpec{0.2, b});
    CHECK(v > prev);
    prev = v;
  }
  SpaceTimeField v = u;
  v *= -2.5;
  CHECK(xsb_norm_direct(v, NormSpec{0.2, 0.4}) == doctest::Approx(2.5 * xsb_norm_direct(u, NormSpec{0.2, 0.4})).epsilon(1e-12));
  CHECK(mixed_norm(v, 4, 4) == doctest::Approx(2.5 * mixed_norm(u, 4, 4)).epsilon(1e-12));
  CHECK(xsb_norm_factorized(-2.5 * phi, c, NormSpec{0.2, 0.4}) ==
        doctest::Approx(2.5 * xsb_norm_factorized(phi, c, NormSpec{0.2, 0.4})).epsilon(1e-12));
  CHECK(sobolev_norm(-2.5 * phi, 0.7) == doctest::Approx(2.5 * sobolev_norm(phi, 0.7)).epsilon(1e-12));
}

TEST_CASE("modulation weight") {
  const Grid2 g(16, 16);
  const Field2 phi = TrigPoly::random(4, 4, 10).sample(g);
  const SpaceTimeField u = envelope_wave(phi, TemporalProfile::window(TimeCutoff(0.5)), -1.1, 1.1, 512);
  const SpaceTimeField same = modulation_weight(u, 0.0);
  for (int n = 0; n < u.nt(); ++n) CHECK(test::max_abs_diff(same.slices[n], u.slices[n]) < 1e-12);

  const SpaceTimeField up = modulation_weight(u, 0.5);
  auto l2 = [](const SpaceTimeField& w) {
    double s = 0.0;
    for (const auto& f : w.slices) s += std::pow(l2_norm(f), 2);
    return std::sqrt(s * w.dt);
  };
  CHECK(l2(up) > l2(u));
  CHECK(l2(up) == doctest::Approx(xsb_norm_direct(u, NormSpec{0.0, 0.5})).epsilon(1e-10));

  const SpaceTimeField back = modulation_weight(up, -0.5, 64.0);
  double err = 0.0, scale = 0.0;
  for (int n = 0; n < u.nt(); ++n) {
    err = std::max(err, test::max_abs_diff(back.slices[n], u.slices[n]));
    scale = std::max(scale, u.slices[n].values.abs().maxCoeff());
  }
  CHECK(err < 1e-10 * scale);
}

TEST_CASE("bilinear pseudoproduct: unit symbol is the dealiased product") {
  const Grid2 g(24, 24);
  const Field2 f = TrigPoly::random(8, 8, 1).sample(g), h = TrigPoly::random(8, 8, 2).sample(g);
  const Field2 p = bilinear_pseudoproduct(f, h, BilinearSymbol::x_minus, 0.0);
  CHECK(test::max_abs_diff(p, dealiased_product(f, h)) < 1e-12);
}

TEST_CASE("bilinear pseudoproduct: single modes") {
  const Grid2 g(16, 16);
  SpecField2 F(g), G(g);
  F.at(2, 0) = F.at(-2, 0) = g.area() / 2;  // cos 2x
  G.at(-1, 0) = G.at(1, 0) = g.area() / 2;  // cos x
  const SpecField2 P = fft_forward(bilinear_pseudoproduct(fft_inverse(F), fft_inverse(G), BilinearSymbol::x_minus, 0.5));
  // (2, -1) -> 1 with |2 - (-1)|^{1/2}; (2, 1) -> 3 with 1; mirrored pairs likewise
  const double quarter = g.area() / 4;
  CHECK(std::abs(P.at(1, 0) - std::complex<double>(quarter * std::sqrt(3.0))) < 1e-12 * g.area());
  CHECK(std::abs(P.at(3, 0) - std::complex<double>(quarter * 1.0)) < 1e-12 * g.area());
  CHECK(std::abs(P.at(-1, 0) - std::complex<double>(quarter * std::sqrt(3.0))) < 1e-12 * g.area());
}

TEST_CASE("bilinear pseudoproduct matches the quadruple loop on 8x8") {
  const Grid2 g(8, 8);
  const Field2 f = TrigPoly::random(2, 2, 41).sample(g), h = TrigPoly::random(2, 2, 42).sample(g);
  const SpecField2 F = test::naive_dft(f), H = test::naive_dft(h);
  for (auto sym : {BilinearSymbol::x_minus, BilinearSymbol::x_plus, BilinearSymbol::y_minus, BilinearSymbol::y_plus})
    for (double s : {0.5, 1.0, 0.3}) {
      const SpecField2 P = fft_forward(bilinear_pseudoproduct(f, h, sym, s));
      double err = 0.0;
      for (int k = -4; k < 4; ++k)
        for (int m = -4; m < 4; ++m) {
          std::complex<double> acc = 0.0;
          if (std::abs(k) <= 2 && std::abs(m) <= 2)
            for (int k1 = -4; k1 < 4; ++k1)
              for (int m1 = -4; m1 < 4; ++m1)
                for (int k2 = -4; k2 < 4; ++k2)
                  for (int m2 = -4; m2 < 4; ++m2) {
                    if (k1 + k2 != k || m1 + m2 != m) continue;
                    const bool x_axis = sym == BilinearSymbol::x_minus || sym == BilinearSymbol::x_plus;
                    const bool minus = sym == BilinearSymbol::x_minus || sym == BilinearSymbol::y_minus;
                    const double a1 = x_axis ? k1 : m1, a2 = x_axis ? k2 : m2;
                    const double w = std::pow(std::abs(minus ? a1 - a2 : a1 + 2 * a2), s);
                    acc += w * F.at(k1, m1) * H.at(k2, m2);
                  }
          err = std::max(err, std::abs(P.at(k, m) - acc / g.area()));
        }
      CHECK(err < 1e-12);
    }
}

TEST_CASE("x_minus is symmetric, x_plus is not") {
  const Grid2 g(24, 24);
  const Field2 f = TrigPoly::random(7, 7, 11).sample(g), h = TrigPoly::random(7, 7, 12).sample(g);
  CHECK(test::max_abs_diff(bilinear_pseudoproduct(f, h, BilinearSymbol::x_minus, 0.5),
                           bilinear_pseudoproduct(h, f, BilinearSymbol::x_minus, 0.5)) < 1e-12);
  // cos x and 1: |1 + 2*0| vs |0 + 2*1|
  const Field2 c = Field2::from_function(g, [](double x, double) { return std::cos(x); });
  const Field2 one = Field2::from_function(g, [](double, double) { return 1.0; });
  const double gap = test::max_abs_diff(bilinear_pseudoproduct(c, one, BilinearSymbol::x_plus, 1.0),
                                        bilinear_pseudoproduct(one, c, BilinearSymbol::x_plus, 1.0));
  CHECK(gap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bilinear pseudoproduct rejects data outside the band") {
  const Grid2 g(16, 16);
  const Field2 f = Field2::from_function(g, [](double x, double) { return std::cos(7 * x); });
  CHECK_THROWS_AS(bilinear_pseudoproduct(f, f, BilinearSymbol::x_minus, 0.5), std::invalid_argument);
}
