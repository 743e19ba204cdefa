#include "spectral_grid.hpp"

#include <mutex>
#include <stdexcept>

namespace qlnls::detail {

namespace {
// FFTW planner is not thread-safe
std::mutex planner_mutex;
}  // namespace

int smooth_size_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

Fft::Fft(int size) : size_(size) {
  if (size <= 0) throw std::invalid_argument("Fft: size must be positive");
  data_ = reinterpret_cast<Complex*>(fftw_alloc_complex(static_cast<std::size_t>(size)));
  auto* raw = reinterpret_cast<fftw_complex*>(data_);
  std::lock_guard lock(planner_mutex);
  forward_ = fftw_plan_dft_1d(size, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_1d(size, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(backward_);
  fftw_free(data_);
}

void Fft::forward() { fftw_execute(forward_); }
void Fft::backward() { fftw_execute(backward_); }

PaddedGrid::PaddedGrid(int truncation)
    : truncation_(truncation), fft_(smooth_size_at_least(4 * truncation + 2)) {}

void PaddedGrid::to_physical(std::span<const Complex> coeffs) {
  auto buf = fft_.buffer();
  std::fill(buf.begin(), buf.end(), Complex{});
  const int m = grid_size();
  for (int n = -truncation_; n <= truncation_; ++n) {
    buf[static_cast<std::size_t>((n + m) % m)] = coeffs[static_cast<std::size_t>(n + truncation_)];
  }
  fft_.backward();
}

void PaddedGrid::to_modes(std::span<Complex> coeffs) {
  fft_.forward();
  auto buf = fft_.buffer();
  const int m = grid_size();
  const double scale = 1.0 / m;
  for (int n = -truncation_; n <= truncation_; ++n) {
    coeffs[static_cast<std::size_t>(n + truncation_)] = scale * buf[static_cast<std::size_t>((n + m) % m)];
  }
}

namespace {
int cauchy_length(long in_lo, long in_hi, long out_lo, long out_hi) {
  // kernel offsets z = o - i span [out_lo - in_hi, out_hi - in_lo]
  const long span = (out_hi - in_lo) - (out_lo - in_hi) + 1;
  return smooth_size_at_least(static_cast<int>(span));
}
}  // namespace

CauchyConvolver::CauchyConvolver(long in_lo, long in_hi, long out_lo, long out_hi)
    : in_lo_(in_lo), in_hi_(in_hi), out_lo_(out_lo), out_hi_(out_hi),
      fft_(cauchy_length(in_lo, in_hi, out_lo, out_hi)) {
  // Circular layout: input i sits at slot (i - in_lo), output o is read from slot
  // (o - out_lo + (in_hi - in_lo)); the kernel slot k holds z = k + out_lo - in_hi.
  auto buf = fft_.buffer();
  std::fill(buf.begin(), buf.end(), Complex{});
  const long z_lo = out_lo_ - in_hi_;
  const long z_hi = out_hi_ - in_lo_;
  for (long z = z_lo; z <= z_hi; ++z) {
    if (z != 0) buf[static_cast<std::size_t>(z - z_lo)] = 1.0 / static_cast<double>(z);
  }
  fft_.forward();
  kernel_hat_.assign(buf.begin(), buf.end());
}

void CauchyConvolver::apply(std::span<const Complex> in, std::span<Complex> out) {
  auto buf = fft_.buffer();
  std::fill(buf.begin(), buf.end(), Complex{});
  for (long i = in_lo_; i <= in_hi_; ++i) {
    buf[static_cast<std::size_t>(i - in_lo_)] = in[static_cast<std::size_t>(i - in_lo_)];
  }
  fft_.forward();
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= kernel_hat_[k];
  fft_.backward();
  const double scale = 1.0 / fft_.size();
  for (long o = out_lo_; o <= out_hi_; ++o) {
    out[static_cast<std::size_t>(o - out_lo_)] =
        scale * buf[static_cast<std::size_t>(o - out_lo_ + in_hi_ - in_lo_)];
  }
}

}  // namespace qlnls::detail
