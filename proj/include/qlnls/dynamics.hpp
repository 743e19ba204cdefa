// Time integration of the truncated NLS mode system
//   du(n)/dt = -i n^sigma u(n) + i g N(u)(n),  N(u)(n) = 2 sum_{m1+m2-m3=n} u(m1) u(m2) conj(u(m3)),
// with g = +1 (focusing), -1 (defocusing) or 0.
#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "qlnls/lattice.hpp"

namespace qlnls {

enum class Scheme { kStrangSplitStep, kRk4InteractionPicture };
enum class Nonlinearity { kFocusing, kDefocusing, kNone };

double nonlinear_sign(Nonlinearity nl);

struct SchemeSpec {
  Scheme scheme = Scheme::kStrangSplitStep;
  double dt = 1e-3;
  int dispersion_exponent = 2;
  Nonlinearity nonlinearity = Nonlinearity::kFocusing;
  /// Split-step only: 2 is plain Strang; 4 and 6 compose symmetric Strang
  /// substeps (Suzuki 5-stage, Yoshida 7-stage). Every substep is exactly
  /// l2-preserving.
  int splitting_order = 6;

  void validate() const;
};

class StepInstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 2 sum_{m1+m2-m3=n} u(m1) u(m2) conj u(m3) for |n| <= N via a padded grid.
FourierState nonlinear_term(const FourierState& state);
/// The same sum by direct O(N^3) enumeration.
FourierState nonlinear_term_direct(const FourierState& state);

/// Reusable stepper: owns the padded grid and phase tables for one (N, spec).
class Stepper {
 public:
  Stepper(int truncation, const SchemeSpec& spec);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// One step of size `dt` (may be negative for backward integration).
  /// `reference_power` anchors the one-step l2 drift check.
  FourierState step(const FourierState& state, double dt, double reference_power);
  const SchemeSpec& spec() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One forward step of size scheme.dt. Throws StepInstabilityError if the
/// l2 power drifts by more than 1e-6 relative to P in one step.
FourierState step(const FourierState& state, const SchemeSpec& scheme, double P);

struct ConservedQuantities {
  double power = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FourierState> states;
  std::vector<ConservedQuantities> conserved;
  SchemeSpec scheme;
};

enum class Direction { kForward, kBackward };

/// round(T / dt) uniform steps; a snapshot every `snapshot_every` steps plus
/// the first and last. Backward runs report times as positive elapsed time.
Trajectory evolve(const FourierState& state, double T, const SchemeSpec& scheme, int snapshot_every = 1,
                  Direction direction = Direction::kForward);

/// sum n^sigma |u(n)|^2 - g sum_{l=0} u(m1) u(m2) conj u(m3) conj u(m4).
double hamiltonian_energy(const FourierState& state, int dispersion_exponent = 2,
                          Nonlinearity nonlinearity = Nonlinearity::kFocusing);

/// Multiplies mode n by exp(i t (-n^sigma + 4 P)).
FourierState linear_flow(const FourierState& state, double t, double P, int sigma = 2);

struct PlaneWaveSolution {
  FourierState state;
  /// ||state - linear_flow(initial, t, P)||_2 = 2|a| |sin((2P - g|a|^2) t)|.
  double deviation = 0.0;
};

/// Exact single-mode solution a exp(i t (-n0^sigma + 2 g |a|^2)); the natural
/// choice is P = |a|^2.
PlaneWaveSolution plane_wave_oracle(Complex a, int n0, double t, double P, int truncation, int sigma = 2,
                                    Nonlinearity nonlinearity = Nonlinearity::kFocusing);

struct OdeOracleOptions {
  int dispersion_exponent = 2;
  Nonlinearity nonlinearity = Nonlinearity::kFocusing;
  double min_step = 1e-12;
};

class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) on the full mode system with a direct
/// convolution right-hand side. N <= 16.
FourierState ode_oracle(const FourierState& state, double T, double tol, const OdeOracleOptions& options = {});

}  // namespace qlnls
