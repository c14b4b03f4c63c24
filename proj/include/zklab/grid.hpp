#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace zk {

/// Rectangular periodic grid on [0,lx) x [0,ly) with nx x ny samples.
///
/// Storage for every field on the grid is an nx x ny Eigen array (rows index
/// x, columns index y). Spectral arrays use the usual FFT ordering: storage
/// index i holds the integer wavenumber i for i < n/2 and i - n otherwise, so
/// the lattice is {-n/2, ..., n/2 - 1} scaled by 2*pi/L.
struct Grid2 {
  int nx = 64;
  int ny = 64;
  double lx = 2.0 * std::numbers::pi;
  double ly = 2.0 * std::numbers::pi;

  Grid2() = default;
  Grid2(int nx_, int ny_, double lx_ = 2.0 * std::numbers::pi,
        double ly_ = 2.0 * std::numbers::pi)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    validate();
  }

  void validate() const {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
      throw std::invalid_argument("Grid2: nx and ny must be even and >= 8 (got " +
                                  std::to_string(nx) + "x" + std::to_string(ny) + ")");
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
      throw std::invalid_argument("Grid2: periods must be positive and finite");
  }

  [[nodiscard]] double dx() const { return lx / nx; }
  [[nodiscard]] double dy() const { return ly / ny; }
  [[nodiscard]] double cell_area() const { return dx() * dy(); }
  [[nodiscard]] double area() const { return lx * ly; }
  [[nodiscard]] double x(int i) const { return i * dx(); }
  [[nodiscard]] double y(int j) const { return j * dy(); }

  /// Signed integer wavenumber held at storage index i of an n-point axis.
  static constexpr int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }
  /// Storage index of signed wavenumber k (taken modulo n).
  static constexpr int storage_index(int k, int n) { return ((k % n) + n) % n; }

  [[nodiscard]] int kx(int i) const { return wavenumber(i, nx); }
  [[nodiscard]] int ky(int j) const { return wavenumber(j, ny); }
  [[nodiscard]] double dxi() const { return 2.0 * std::numbers::pi / lx; }
  [[nodiscard]] double deta() const { return 2.0 * std::numbers::pi / ly; }
  [[nodiscard]] double xi(int i) const { return dxi() * kx(i); }
  [[nodiscard]] double eta(int j) const { return deta() * ky(j); }

  // Frequencies for odd symbols. The Nyquist line -n/2 is its own mirror image
  // under k -> -k, so an odd symbol can only keep real fields real if it
  // vanishes there.
  [[nodiscard]] double xi_odd(int i) const { return i == nx / 2 ? 0.0 : xi(i); }
  [[nodiscard]] double eta_odd(int j) const { return j == ny / 2 ? 0.0 : eta(j); }

  friend bool operator==(const Grid2&, const Grid2&) = default;
};

inline void require_same_grid(const Grid2& a, const Grid2& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

/// Real samples on a Grid2.
template <typename Scalar>
struct Field2T {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Grid2 grid;
  Array values;

  Field2T() = default;
  explicit Field2T(const Grid2& g) : grid(g), values(Array::Zero(g.nx, g.ny)) {}
  Field2T(const Grid2& g, Array v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.nx || values.cols() != g.ny)
      throw std::invalid_argument("Field2: value array does not match grid");
  }

  /// Samples f(x, y) at the grid points.
  template <typename F>
  static Field2T from_function(const Grid2& g, F&& f) {
    Field2T out(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.values(i, j) = static_cast<Scalar>(f(g.x(i), g.y(j)));
    return out;
  }

  [[nodiscard]] bool all_finite() const { return values.isFinite().all(); }

  Field2T& operator+=(const Field2T& o) {
    require_same_grid(grid, o.grid, "Field2 +=");
    values += o.values;
    return *this;
  }
  Field2T& operator-=(const Field2T& o) {
    require_same_grid(grid, o.grid, "Field2 -=");
    values -= o.values;
    return *this;
  }
  Field2T& operator*=(Scalar c) {
    values *= c;
    return *this;
  }
  friend Field2T operator+(Field2T a, const Field2T& b) { return a += b; }
  friend Field2T operator-(Field2T a, const Field2T& b) { return a -= b; }
  friend Field2T operator*(Scalar c, Field2T a) { return a *= c; }
};

/// Fourier coefficients on a Grid2, normalized so that sums approximate the
/// continuum transform: F(xi, eta) = dx*dy * sum f(x, y) exp(-i(xi x + eta y)).
template <typename Scalar>
struct SpecField2T {
  using Complex = std::complex<Scalar>;
  using Array = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  Grid2 grid;
  Array coeffs;

  SpecField2T() = default;
  explicit SpecField2T(const Grid2& g) : grid(g), coeffs(Array::Zero(g.nx, g.ny)) {}
  SpecField2T(const Grid2& g, Array c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.rows() != g.nx || coeffs.cols() != g.ny)
      throw std::invalid_argument("SpecField2: coefficient array does not match grid");
  }

  /// Coefficient at signed wavenumbers (k, m).
  [[nodiscard]] Complex& at(int k, int m) {
    return coeffs(Grid2::storage_index(k, grid.nx), Grid2::storage_index(m, grid.ny));
  }
  [[nodiscard]] const Complex& at(int k, int m) const {
    return coeffs(Grid2::storage_index(k, grid.nx), Grid2::storage_index(m, grid.ny));
  }

  SpecField2T& operator+=(const SpecField2T& o) {
    require_same_grid(grid, o.grid, "SpecField2 +=");
    coeffs += o.coeffs;
    return *this;
  }
  SpecField2T& operator-=(const SpecField2T& o) {
    require_same_grid(grid, o.grid, "SpecField2 -=");
    coeffs -= o.coeffs;
    return *this;
  }
  SpecField2T& operator*=(Complex c) {
    coeffs *= c;
    return *this;
  }
  friend SpecField2T operator+(SpecField2T a, const SpecField2T& b) { return a += b; }
  friend SpecField2T operator-(SpecField2T a, const SpecField2T& b) { return a -= b; }
  friend SpecField2T operator*(Complex c, SpecField2T a) { return a *= c; }
};

using Field2 = Field2T<double>;
using SpecField2 = SpecField2T<double>;

/// Continuum L2 norm of the samples (rectangle rule, exact for trig polynomials).
template <typename Scalar>
Scalar l2_norm(const Field2T<Scalar>& f) {
  return std::sqrt(f.values.square().sum() * static_cast<Scalar>(f.grid.cell_area()));
}

/// L2 norm computed from coefficients; equals l2_norm of the inverse transform.
template <typename Scalar>
Scalar l2_norm(const SpecField2T<Scalar>& F) {
  return std::sqrt(F.coeffs.abs2().sum() / static_cast<Scalar>(F.grid.area()));
}

}  // namespace zk
