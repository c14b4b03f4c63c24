#pragma once

#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>
#ifdef EIGEN_FFTW_DEFAULT
#include <fftw3.h>
#endif

#include "zklab/grid.hpp"

namespace zk {

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
#ifdef EIGEN_FFTW_DEFAULT
  // Engines plan lazily from several threads.
  static std::once_flag planner_flag;
  std::call_once(planner_flag, [] { fftw_make_planner_thread_safe(); });
#endif
  // Plans are cached per size inside the engine; one engine per thread.
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

/// Unnormalized forward DFT (inverse includes 1/n) of a contiguous sequence.
template <typename Scalar>
void dft_inplace(std::span<std::complex<Scalar>> data, bool inverse,
                 std::vector<std::complex<Scalar>>& scratch) {
  const auto n = static_cast<Eigen::Index>(data.size());
  scratch.resize(data.size());
  auto& fft = fft_engine<Scalar>();
  if (inverse)
    fft.inv(scratch.data(), data.data(), n);
  else
    fft.fwd(scratch.data(), data.data(), n);
  std::copy(scratch.begin(), scratch.end(), data.begin());
}

/// DFT along x (rows) of every column.
template <typename Scalar>
void dft_axis_x(Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a,
                bool inverse) {
  std::vector<std::complex<Scalar>> scratch;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    dft_inplace<Scalar>({a.col(j).data(), static_cast<std::size_t>(a.rows())}, inverse, scratch);
}

/// DFT along y (columns) of every row.
template <typename Scalar>
void dft_axis_y(Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a,
                bool inverse) {
  std::vector<std::complex<Scalar>> row(static_cast<std::size_t>(a.cols()));
  std::vector<std::complex<Scalar>> scratch;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) row[j] = a(i, j);
    dft_inplace<Scalar>(row, inverse, scratch);
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = row[j];
  }
}

/// 2D DFT of a column-major nx x ny array (inverse includes 1/(nx ny)).
template <typename Scalar>
void dft2_inplace(Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a,
                  bool inverse) {
#ifdef EIGEN_FFTW_DEFAULT
  using Array = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  thread_local Array scratch;
  scratch.resize(a.rows(), a.cols());
  auto& fft = fft_engine<Scalar>();
  // Column-major nx x ny is row-major ny x nx. The backend 2D transforms are
  // unscaled in both directions.
  const int n0 = static_cast<int>(a.cols()), n1 = static_cast<int>(a.rows());
  if (inverse) {
    fft.impl().inv2(scratch.data(), a.data(), n0, n1);
    scratch /= static_cast<Scalar>(n0) * static_cast<Scalar>(n1);
  } else {
    fft.impl().fwd2(scratch.data(), a.data(), n0, n1);
  }
  a.swap(scratch);
#else
  dft_axis_x<Scalar>(a, inverse);
  dft_axis_y<Scalar>(a, inverse);
#endif
}

}  // namespace detail

/// Forward transform with the integral normalization dx*dy*DFT.
/// Throws std::domain_error on non-finite samples.
template <typename Scalar>
SpecField2T<Scalar> fft_forward(const Field2T<Scalar>& f) {
  f.grid.validate();
  if (f.values.rows() != f.grid.nx || f.values.cols() != f.grid.ny)
    throw std::invalid_argument("fft_forward: value array does not match grid");
  if (!f.all_finite()) throw std::domain_error("fft_forward: non-finite sample values");
  typename SpecField2T<Scalar>::Array a = f.values.template cast<std::complex<Scalar>>();
  detail::dft2_inplace<Scalar>(a, false);
  a *= static_cast<Scalar>(f.grid.cell_area());
  return SpecField2T<Scalar>(f.grid, std::move(a));
}

/// Inverse of fft_forward. Returns the real part; for Hermitian-symmetric
/// input the discarded imaginary part is rounding noise.
template <typename Scalar>
Field2T<Scalar> fft_inverse(const SpecField2T<Scalar>& F) {
  F.grid.validate();
  if (!F.coeffs.isFinite().all()) throw std::domain_error("fft_inverse: non-finite coefficients");
  typename SpecField2T<Scalar>::Array a = F.coeffs;
  detail::dft2_inplace<Scalar>(a, true);
  return Field2T<Scalar>(F.grid, a.real() / static_cast<Scalar>(F.grid.cell_area()));
}

}  // namespace zk
