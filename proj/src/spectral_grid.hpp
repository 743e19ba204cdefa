// Internal FFTW wrappers.
#pragma once

#include <fftw3.h>

#include <complex>
#include <span>
#include <vector>

namespace qlnls::detail {

using Complex = std::complex<double>;

/// Smallest 2^a 3^b 5^c 7^d that is >= n.
int smooth_size_at_least(int n);

/// In-place complex FFT of fixed length. Forward uses e^{-2 pi i jk/M}, unnormalised.
class Fft {
 public:
  explicit Fft(int size);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return size_; }
  std::span<Complex> buffer() { return {data_, static_cast<std::size_t>(size_)}; }
  void forward();
  void backward();

 private:
  int size_;
  Complex* data_;
  fftw_plan forward_;
  fftw_plan backward_;
};

/// Zero-padded physical grid for a lattice [-N, N]; grid size M >= 4N + 2, so
/// cubic products are alias-free on [-N, N] and quartic means are exact.
class PaddedGrid {
 public:
  explicit PaddedGrid(int truncation);

  int truncation() const { return truncation_; }
  int grid_size() const { return fft_.size(); }

  /// q(x_j) = sum_n u(n) e^{i n x_j}, x_j = 2 pi j / M.
  void to_physical(std::span<const Complex> coeffs);
  /// u(n) = (1/M) sum_j q_j e^{-i n x_j}, truncated to [-N, N].
  void to_modes(std::span<Complex> coeffs);
  std::span<Complex> physical() { return fft_.buffer(); }

 private:
  int truncation_;
  Fft fft_;
};

/// Applies out(o) = sum_i in(i) / (o - i), skipping o == i, for integer
/// input range [in_lo, in_hi] and output range [out_lo, out_hi] by FFT.
class CauchyConvolver {
 public:
  CauchyConvolver(long in_lo, long in_hi, long out_lo, long out_hi);

  void apply(std::span<const Complex> in, std::span<Complex> out);

 private:
  long in_lo_, in_hi_, out_lo_, out_hi_;
  Fft fft_;
  std::vector<Complex> kernel_hat_;
};

}  // namespace qlnls::detail
