// Fourier-coefficient states on the truncated integer lattice, weighted
// sequence norms and the Gaussian pulse initial data.
#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlnls {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sign convention in force for a state. Only one convention is implemented:
///   du(n)/dt = -i n^sigma u(n) + 2i g sum_{m1+m2-m3=n} u(m1) u(m2) conj(u(m3)),
/// with comparison flow multiplier exp(it(-n^sigma + 4P)).
enum class Convention { kPdeSign };

std::string_view convention_tag(Convention c);

/// Raised when a finite-mode truncation cannot represent the requested data.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients u(n) for n in [-N, N]. Immutable once built.
class FourierState {
 public:
  FourierState() : FourierState(0) {}
  explicit FourierState(int truncation, Convention convention = Convention::kPdeSign);
  FourierState(int truncation, std::vector<Complex> coeffs,
               Convention convention = Convention::kPdeSign);

  static FourierState single_mode(int truncation, int mode, Complex amplitude);

  int truncation() const { return truncation_; }
  std::size_t size() const { return coeffs_.size(); }
  Convention convention() const { return convention_; }

  /// Coefficient of mode n; zero outside [-N, N].
  Complex operator[](int n) const {
    return (n < -truncation_ || n > truncation_) ? Complex{}
                                                 : coeffs_[static_cast<std::size_t>(n + truncation_)];
  }
  /// Storage order is n = -N, ..., N.
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::vector<Complex> to_vector() const { return coeffs_; }

  bool compatible(const FourierState& other) const {
    return truncation_ == other.truncation_ && convention_ == other.convention_;
  }

  /// Same coefficients embedded into (or cut down to) a different truncation.
  FourierState resized(int truncation) const;

 private:
  int truncation_;
  std::vector<Complex> coeffs_;
  Convention convention_;
};

FourierState operator+(const FourierState& a, const FourierState& b);
FourierState operator-(const FourierState& a, const FourierState& b);
FourierState operator*(Complex factor, const FourierState& a);

struct NormSpec {
  double p = 2.0;
  double delta = 0.0;

  void validate() const;
};

/// (sum_n |u(n)|^p e^{delta |n| p})^{1/p}, or the weighted sup for p = inf.
double weighted_norm(const FourierState& state, const NormSpec& spec);

/// Plain l2 distance; the states must be compatible.
double l2_distance(const FourierState& a, const FourierState& b);

/// P = sum_n |u(n)|^2, which equals ||q||_{L2}^2 / 2pi.
double power(const FourierState& state);

/// C = max(eps^{-1/2} ||u||_{inf,delta}, eps^{1/2} ||u||_{1,delta}).
double class_constant(const FourierState& state, double epsilon, double delta = 0.0);

enum class Profile { kGaussian, kCustomSampled };

/// Smooth even cutoff: 1 on |x| <= plateau, 0 on |x| >= taper_end, quintic
/// (C^2) smoothstep in between.
struct Cutoff {
  double plateau = 1.2;
  double taper_end = std::numbers::pi / 2 + 0.2;

  double operator()(double x) const;
};

struct InitialDataSpec {
  Profile profile = Profile::kGaussian;
  double epsilon = 0.1;
  double amplitude = 1.0;
  Cutoff cutoff{};
  /// Shape f for kCustomSampled: q(x) = amplitude eps^{-1/2} f(x/eps) h(x).
  std::function<Complex(double)> shape;

  void validate() const;
};

/// Fourier coefficients of amplitude * eps^{-1/2} f(x/eps) h(x) by trapezoidal
/// quadrature on an oversampled grid; f(y) = exp(-y^2) for the Gaussian.
/// Throws TruncationError if the mass outside [-N, N] exceeds 1e-9 of the total.
FourierState make_initial_data(const InitialDataSpec& spec, int truncation);

/// Physical-space samples q(x_j) of the initial data on x_j = -pi + 2 pi j / M.
std::vector<Complex> sample_initial_data(const InitialDataSpec& spec, int grid_size);

}  // namespace qlnls
