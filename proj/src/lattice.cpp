#include "qlnls/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "spectral_grid.hpp"

namespace qlnls {

std::string_view convention_tag(Convention c) {
  switch (c) {
    case Convention::kPdeSign:
      return "pde-sign: du/dt = -i n^sigma u + 2i g conv(u,u,conj u); "
             "comparison multiplier exp(it(-n^sigma+4P))";
  }
  return "unknown";
}

FourierState::FourierState(int truncation, Convention convention)
    : truncation_(truncation), convention_(convention) {
  if (truncation < 0) throw std::invalid_argument("FourierState: negative truncation");
  coeffs_.assign(static_cast<std::size_t>(2 * truncation + 1), Complex{});
}

FourierState::FourierState(int truncation, std::vector<Complex> coeffs, Convention convention)
    : truncation_(truncation), coeffs_(std::move(coeffs)), convention_(convention) {
  if (truncation < 0) throw std::invalid_argument("FourierState: negative truncation");
  if (coeffs_.size() != static_cast<std::size_t>(2 * truncation + 1)) {
    throw std::invalid_argument("FourierState: expected 2N+1 coefficients");
  }
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("FourierState: non-finite coefficient");
    }
  }
}

FourierState FourierState::single_mode(int truncation, int mode, Complex amplitude) {
  if (std::abs(mode) > truncation) throw std::invalid_argument("single_mode: mode outside lattice");
  std::vector<Complex> c(static_cast<std::size_t>(2 * truncation + 1));
  c[static_cast<std::size_t>(mode + truncation)] = amplitude;
  return FourierState(truncation, std::move(c));
}

FourierState FourierState::resized(int truncation) const {
  std::vector<Complex> c(static_cast<std::size_t>(2 * truncation + 1));
  for (int n = -truncation; n <= truncation; ++n) c[static_cast<std::size_t>(n + truncation)] = (*this)[n];
  return FourierState(truncation, std::move(c), convention_);
}

namespace {
void require_compatible(const FourierState& a, const FourierState& b) {
  if (!a.compatible(b)) {
    throw std::invalid_argument("FourierState: truncation or convention mismatch");
  }
}
}  // namespace

FourierState operator+(const FourierState& a, const FourierState& b) {
  require_compatible(a, b);
  auto c = a.to_vector();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs()[i];
  return FourierState(a.truncation(), std::move(c), a.convention());
}

FourierState operator-(const FourierState& a, const FourierState& b) {
  require_compatible(a, b);
  auto c = a.to_vector();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs()[i];
  return FourierState(a.truncation(), std::move(c), a.convention());
}

FourierState operator*(Complex factor, const FourierState& a) {
  auto c = a.to_vector();
  for (auto& x : c) x *= factor;
  return FourierState(a.truncation(), std::move(c), a.convention());
}

void NormSpec::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("NormSpec: delta must be >= 0");
}

double weighted_norm(const FourierState& state, const NormSpec& spec) {
  spec.validate();
  const int n_max = state.truncation();
  // Work with w(n) = |u(n)| e^{delta |n|}, scaled by its maximum to avoid overflow.
  std::vector<double> w(state.size());
  double top = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    double x = std::abs(state[n]) * std::exp(spec.delta * std::abs(n));
    w[static_cast<std::size_t>(n + n_max)] = x;
    top = std::max(top, x);
  }
  if (top == 0.0 || std::isinf(spec.p)) return top;
  double sum = 0.0;
  for (double x : w) sum += std::pow(x / top, spec.p);
  return top * std::pow(sum, 1.0 / spec.p);
}

double l2_distance(const FourierState& a, const FourierState& b) {
  require_compatible(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(sum);
}

double power(const FourierState& state) {
  double sum = 0.0;
  for (const auto& c : state.coeffs()) sum += std::norm(c);
  return sum;
}

double class_constant(const FourierState& state, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("class_constant: eps must lie in (0,1)");
  const double sup = weighted_norm(state, {kInf, delta});
  const double l1 = weighted_norm(state, {1.0, delta});
  return std::max(sup / std::sqrt(epsilon), l1 * std::sqrt(epsilon));
}

double Cutoff::operator()(double x) const {
  const double r = std::abs(x);
  if (r <= plateau) return 1.0;
  if (r >= taper_end) return 0.0;
  const double s = (r - plateau) / (taper_end - plateau);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

void InitialDataSpec::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("InitialDataSpec: eps must lie in (0,1)");
  if (!(cutoff.plateau > 0.0 && cutoff.plateau < cutoff.taper_end && cutoff.taper_end < std::numbers::pi)) {
    throw std::invalid_argument("InitialDataSpec: need 0 < plateau < taper_end < pi");
  }
  if (profile == Profile::kCustomSampled && !shape) {
    throw std::invalid_argument("InitialDataSpec: custom profile needs a shape function");
  }
  if (!std::isfinite(amplitude)) throw std::invalid_argument("InitialDataSpec: non-finite amplitude");
}

std::vector<Complex> sample_initial_data(const InitialDataSpec& spec, int grid_size) {
  spec.validate();
  std::vector<Complex> q(static_cast<std::size_t>(grid_size));
  const double scale = spec.amplitude / std::sqrt(spec.epsilon);
  for (int j = 0; j < grid_size; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / grid_size;
    const double h = spec.cutoff(x);
    if (h == 0.0) continue;
    const double y = x / spec.epsilon;
    const Complex f = spec.profile == Profile::kGaussian ? Complex{std::exp(-y * y)} : spec.shape(y);
    q[static_cast<std::size_t>(j)] = scale * f * h;
  }
  return q;
}

FourierState make_initial_data(const InitialDataSpec& spec, int truncation) {
  if (truncation < 0) throw std::invalid_argument("make_initial_data: negative truncation");
  const int m = detail::smooth_size_at_least(8 * (2 * truncation + 1));
  const auto samples = sample_initial_data(spec, m);

  detail::Fft fft(m);
  auto buf = fft.buffer();
  std::copy(samples.begin(), samples.end(), buf.begin());
  double total = 0.0;
  for (const auto& s : samples) total += std::norm(s);
  total /= m;  // discrete Parseval: equals the mass of all M grid modes
  fft.forward();

  std::vector<Complex> c(static_cast<std::size_t>(2 * truncation + 1));
  double kept = 0.0;
  for (int n = -truncation; n <= truncation; ++n) {
    // x_j starts at -pi, hence the (-1)^n shift factor
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex u = sign / m * buf[static_cast<std::size_t>((n + m) % m)];
    c[static_cast<std::size_t>(n + truncation)] = u;
    kept += std::norm(u);
  }
  if (total > 0.0 && (total - kept) > 1e-9 * total) {
    throw TruncationError("make_initial_data: truncation N=" + std::to_string(truncation) +
                          " leaves relative tail mass " + std::to_string((total - kept) / total));
  }
  return FourierState(truncation, std::move(c));
}

}  // namespace qlnls
