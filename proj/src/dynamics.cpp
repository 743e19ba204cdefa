#include "qlnls/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "spectral_grid.hpp"

namespace qlnls {

namespace {

double dispersion(int n, int sigma) {
  const double m = static_cast<double>(n);
  return sigma == 4 ? (m * m) * (m * m) : m * m;
}

void require_exponent(int sigma) {
  if (sigma != 2 && sigma != 4) throw std::invalid_argument("dispersion exponent must be 2 or 4");
}

// In-place: coeffs <- 2 |q|^2 q projected back to [-N, N].
void apply_cubic(detail::PaddedGrid& grid, std::span<const Complex> in, std::span<Complex> out) {
  grid.to_physical(in);
  for (auto& q : grid.physical()) q *= 2.0 * std::norm(q);
  grid.to_modes(out);
}

const std::vector<double>& composition_weights(int order) {
  static const std::vector<double> strang{1.0};
  static const std::vector<double> suzuki = [] {
    const double p = 1.0 / (4.0 - std::cbrt(4.0));
    return std::vector<double>{p, p, 1.0 - 4.0 * p, p, p};
  }();
  static const std::vector<double> yoshida = [] {
    const double w1 = -1.17767998417887, w2 = 0.235573213359357, w3 = 0.784513610477560;
    const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
    return std::vector<double>{w3, w2, w1, w0, w1, w2, w3};
  }();
  return order == 6 ? yoshida : order == 4 ? suzuki : strang;
}

}  // namespace

double nonlinear_sign(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::kFocusing:
      return 1.0;
    case Nonlinearity::kDefocusing:
      return -1.0;
    case Nonlinearity::kNone:
      return 0.0;
  }
  return 0.0;
}

void SchemeSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SchemeSpec: dt must be positive");
  require_exponent(dispersion_exponent);
  if (splitting_order != 2 && splitting_order != 4 && splitting_order != 6) {
    throw std::invalid_argument("SchemeSpec: splitting order must be 2, 4 or 6");
  }
}

FourierState nonlinear_term(const FourierState& state) {
  detail::PaddedGrid grid(state.truncation());
  std::vector<Complex> out(state.size());
  apply_cubic(grid, state.coeffs(), out);
  return FourierState(state.truncation(), std::move(out), state.convention());
}

FourierState nonlinear_term_direct(const FourierState& state) {
  const int n_max = state.truncation();
  std::vector<Complex> out(state.size());
  for (int m1 = -n_max; m1 <= n_max; ++m1) {
    for (int m2 = -n_max; m2 <= n_max; ++m2) {
      const Complex p = state[m1] * state[m2];
      for (int m3 = -n_max; m3 <= n_max; ++m3) {
        const int n = m1 + m2 - m3;
        if (n < -n_max || n > n_max) continue;
        out[static_cast<std::size_t>(n + n_max)] += 2.0 * p * std::conj(state[m3]);
      }
    }
  }
  return FourierState(n_max, std::move(out), state.convention());
}

// ---- Stepper ---------------------------------------------------------------

struct Stepper::Impl {
  int truncation;
  SchemeSpec spec;
  detail::PaddedGrid grid;
  double phase_dt = std::numeric_limits<double>::quiet_NaN();
  std::vector<Complex> half_phase;  // exp(-i n^sigma dt / 2)
  std::vector<Complex> k1, k2, k3, k4, tmp, a;

  Impl(int n, const SchemeSpec& s) : truncation(n), spec(s), grid(n) {
    const std::size_t len = static_cast<std::size_t>(2 * n + 1);
    for (auto* v : {&half_phase, &k1, &k2, &k3, &k4, &tmp, &a}) v->assign(len, Complex{});
  }

  void ensure_phases(double dt) {
    if (dt == phase_dt) return;
    for (int n = -truncation; n <= truncation; ++n) {
      half_phase[static_cast<std::size_t>(n + truncation)] =
          std::polar(1.0, -dispersion(n, spec.dispersion_exponent) * dt / 2.0);
    }
    phase_dt = dt;
  }

  void half_linear(std::vector<Complex>& v) const {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= half_phase[k];
  }

  // out = i g N(in)
  void rhs(std::span<const Complex> in, std::vector<Complex>& out) {
    const double g = nonlinear_sign(spec.nonlinearity);
    if (g == 0.0) {
      std::fill(out.begin(), out.end(), Complex{});
      return;
    }
    apply_cubic(grid, in, out);
    for (auto& x : out) x *= Complex(0.0, g);
  }

  void strang(std::vector<Complex>& u, double dt) {
    half_linear(u);
    const double g = nonlinear_sign(spec.nonlinearity);
    if (g != 0.0) {
      grid.to_physical(u);
      for (auto& q : grid.physical()) q *= std::polar(1.0, 2.0 * g * std::norm(q) * dt);
      grid.to_modes(u);
    }
    half_linear(u);
  }

  // Interaction-picture RK4: w(t) = exp(i n^sigma t) u(t), dw/dt = exp(...) i g N(u).
  void rk4(std::vector<Complex>& u, double dt) {
    const std::size_t len = u.size();
    rhs(u, k1);
    // k2 = N(E_h (u + dt/2 k1))
    for (std::size_t k = 0; k < len; ++k) tmp[k] = u[k] + 0.5 * dt * k1[k];
    half_linear(tmp);
    rhs(tmp, k2);
    // k3 = N(E_h u + dt/2 k2)
    a = u;
    half_linear(a);  // a = E_h u
    for (std::size_t k = 0; k < len; ++k) tmp[k] = a[k] + 0.5 * dt * k2[k];
    rhs(tmp, k3);
    // k4 = N(E_h^2 u + dt E_h k3)
    for (std::size_t k = 0; k < len; ++k) tmp[k] = a[k] + dt * k3[k];
    half_linear(tmp);
    rhs(tmp, k4);
    // u <- E_h^2 u + dt/6 (E_h^2 k1 + 2 E_h (k2 + k3) + k4)
    for (std::size_t k = 0; k < len; ++k) {
      const Complex e = half_phase[k];
      u[k] = e * e * u[k] + dt / 6.0 * (e * e * k1[k] + 2.0 * e * (k2[k] + k3[k]) + k4[k]);
    }
  }
};

Stepper::Stepper(int truncation, const SchemeSpec& spec) {
  spec.validate();
  impl_ = std::make_unique<Impl>(truncation, spec);
}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

const SchemeSpec& Stepper::spec() const { return impl_->spec; }

FourierState Stepper::step(const FourierState& state, double dt, double reference_power) {
  if (state.truncation() != impl_->truncation) throw std::invalid_argument("Stepper: truncation mismatch");
  auto u = state.to_vector();
  if (impl_->spec.scheme == Scheme::kStrangSplitStep) {
    const auto& weights = composition_weights(impl_->spec.splitting_order);
    for (double w : weights) {
      impl_->ensure_phases(w * dt);
      impl_->strang(u, w * dt);
    }
  } else {
    impl_->ensure_phases(dt);
    impl_->rk4(u, dt);
  }
  for (const auto& x : u) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw StepInstabilityError("step: non-finite state");
  }
  FourierState out(state.truncation(), std::move(u), state.convention());
  const double before = power(state);
  const double scale = std::max(reference_power, before);
  if (scale > 0.0 && std::abs(power(out) - before) > 1e-6 * scale) {
    throw StepInstabilityError("step: l2 power drifted by more than 1e-6 relative in one step");
  }
  return out;
}

FourierState step(const FourierState& state, const SchemeSpec& scheme, double P) {
  Stepper s(state.truncation(), scheme);
  return s.step(state, scheme.dt, P);
}

// ---- Trajectories ----------------------------------------------------------

Trajectory evolve(const FourierState& state, double T, const SchemeSpec& scheme, int snapshot_every,
                  Direction direction) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  if (snapshot_every < 1) throw std::invalid_argument("evolve: snapshot_every must be >= 1");
  scheme.validate();
  const long steps = std::max(1L, std::lround(T / scheme.dt));
  const double dt = direction == Direction::kForward ? scheme.dt : -scheme.dt;
  const double p0 = power(state);
  Stepper stepper(state.truncation(), scheme);

  Trajectory traj;
  traj.scheme = scheme;
  auto record = [&](long k, const FourierState& u) {
    traj.times.push_back(static_cast<double>(k) * scheme.dt);
    traj.states.push_back(u);
    traj.conserved.push_back({power(u), hamiltonian_energy(u, scheme.dispersion_exponent, scheme.nonlinearity)});
  };
  FourierState u = state;
  record(0, u);
  for (long k = 1; k <= steps; ++k) {
    u = stepper.step(u, dt, p0);
    if (k % snapshot_every == 0 || k == steps) record(k, u);
  }
  return traj;
}

double hamiltonian_energy(const FourierState& state, int dispersion_exponent, Nonlinearity nonlinearity) {
  require_exponent(dispersion_exponent);
  const int n_max = state.truncation();
  double quad = 0.0;
  for (int n = -n_max; n <= n_max; ++n) quad += dispersion(n, dispersion_exponent) * std::norm(state[n]);
  const double g = nonlinear_sign(nonlinearity);
  if (g == 0.0) return quad;
  detail::PaddedGrid grid(n_max);
  grid.to_physical(state.coeffs());
  double quartic = 0.0;
  for (const auto& q : grid.physical()) quartic += std::norm(q) * std::norm(q);
  quartic /= grid.grid_size();
  return quad - g * quartic;
}

FourierState linear_flow(const FourierState& state, double t, double P, int sigma) {
  require_exponent(sigma);
  const int n_max = state.truncation();
  auto c = state.to_vector();
  for (int n = -n_max; n <= n_max; ++n) {
    c[static_cast<std::size_t>(n + n_max)] *= std::polar(1.0, t * (-dispersion(n, sigma) + 4.0 * P));
  }
  return FourierState(n_max, std::move(c), state.convention());
}

PlaneWaveSolution plane_wave_oracle(Complex a, int n0, double t, double P, int truncation, int sigma,
                                    Nonlinearity nonlinearity) {
  require_exponent(sigma);
  const double g = nonlinear_sign(nonlinearity);
  const double a2 = std::norm(a);
  const Complex u = a * std::polar(1.0, t * (-dispersion(n0, sigma) + 2.0 * g * a2));
  PlaneWaveSolution sol{FourierState::single_mode(truncation, n0, u), 0.0};
  sol.deviation = 2.0 * std::abs(a) * std::abs(std::sin((2.0 * P - g * a2) * t));
  return sol;
}

// ---- Reference integrator ---------------------------------------------------

FourierState ode_oracle(const FourierState& state, double T, double tol, const OdeOracleOptions& options) {
  namespace ode = boost::numeric::odeint;
  using Vec = std::vector<Complex>;
  const int n_max = state.truncation();
  if (n_max > 16) throw std::invalid_argument("ode_oracle: N must be <= 16");
  if (!(tol > 0.0)) throw std::invalid_argument("ode_oracle: tol must be positive");
  require_exponent(options.dispersion_exponent);
  const double g = nonlinear_sign(options.nonlinearity);

  auto rhs = [&](const Vec& u, Vec& du, double) {
    const FourierState s(n_max, u);
    const auto nl = nonlinear_term_direct(s);
    for (int n = -n_max; n <= n_max; ++n) {
      const auto k = static_cast<std::size_t>(n + n_max);
      du[k] = Complex(0, -dispersion(n, options.dispersion_exponent)) * u[k] + Complex(0, g) * nl.coeffs()[k];
    }
  };

  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<Vec>>(tol, tol);
  Vec u = state.to_vector();
  double t = 0.0;
  double dt = std::min(T, 1e-3);
  long guard = 0;
  while (t < T) {
    if (t + dt > T) dt = T - t;
    if (stepper.try_step(rhs, u, t, dt) == ode::fail) {
      if (dt < options.min_step) throw ToleranceError("ode_oracle: step size collapsed below min_step");
    }
    if (++guard > 100000000L) throw ToleranceError("ode_oracle: step budget exhausted");
  }
  return FourierState(n_max, std::move(u), state.convention());
}

}  // namespace qlnls
