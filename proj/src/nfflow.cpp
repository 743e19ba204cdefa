#include "qlnls/nfflow.hpp"

#include <cmath>

#include "spectral_grid.hpp"

namespace qlnls {

FourierState f1_gradient(const FourierState& state) {
  const int big_n = state.truncation();
  const auto w = state.coeffs();
  std::vector<Complex> out(state.size());
  for (int n = -big_n; n <= big_n; ++n) {
    Complex acc{};
    for (int m1 = -big_n; m1 <= big_n; ++m1) {
      if (m1 == n) continue;
      const Complex w1 = w[static_cast<std::size_t>(m1 + big_n)];
      if (w1 == Complex{}) continue;
      // m3 = m1 + m2 - n must stay in the lattice
      const int lo = std::max(-big_n, -big_n + n - m1);
      const int hi = std::min(big_n, big_n + n - m1);
      Complex inner{};
      for (int m2 = lo; m2 <= hi; ++m2) {
        if (m2 == n) continue;
        const int m3 = m1 + m2 - n;
        inner += w[static_cast<std::size_t>(m2 + big_n)] * std::conj(w[static_cast<std::size_t>(m3 + big_n)]) /
                 static_cast<double>(m2 - n);
      }
      acc += w1 * inner / static_cast<double>(m1 - n);
    }
    out[static_cast<std::size_t>(n + big_n)] = acc;
  }
  return FourierState(big_n, std::move(out), state.convention());
}

// ---- F2 ---------------------------------------------------------------------

namespace {

struct F2Parts {
  std::vector<Complex> d_conj;  // dG/d conj(v(k))
  std::vector<Complex> d_v;     // dG/dv(k)
};

// G = sum_n sum_{x,y} gx_n(x) hy_n(y) / (x - y), with
//   gx_n(x) = sum_{m4+m5-m1=n, (m1-m4)(m1-m5)=x != 0} v(m1) conj v(m4) conj v(m5)
//   hy_n(y) = -1/(2y) sum_{m2+m3-m6=n, (m2-m6)(m3-m6)=y != 0} v(m2) v(m3) conj v(m6)
// (q = 2(x - y), and x = y is the resonant set). Phi_n(x) = sum_y hy(y)/(x-y),
// Psi_n(y) = sum_x gx(x)/(x-y).
F2Parts f2_parts(const FourierState& state) {
  const int big_n = state.truncation();
  const auto v = state.coeffs();
  const long sq = static_cast<long>(big_n) * big_n;
  const long lo = -4 * sq;
  const long hi = sq;
  const std::size_t range = static_cast<std::size_t>(hi - lo + 1);
  auto at = [&](int m) { return v[static_cast<std::size_t>(m + big_n)]; };
  auto slot = [&](long z) { return static_cast<std::size_t>(z - lo); };

  F2Parts parts;
  parts.d_conj.assign(state.size(), Complex{});
  parts.d_v.assign(state.size(), Complex{});
  if (big_n == 0) return parts;

  detail::CauchyConvolver conv(lo, hi, lo, hi);
  std::vector<Complex> gx(range), hy(range), phi(range), psi(range);

  for (int n = -big_n; n <= big_n; ++n) {
    std::fill(gx.begin(), gx.end(), Complex{});
    std::fill(hy.begin(), hy.end(), Complex{});
    bool any_g = false;
    bool any_h = false;
    for (int a = -big_n; a <= big_n; ++a) {
      const Complex va = at(a);
      for (int b = -big_n; b <= big_n; ++b) {
        const int c = n + a - b;
        if (c < -big_n || c > big_n) continue;
        // gx: m1 = a, m4 = b, m5 = c
        const long x = static_cast<long>(a - b) * (a - c);
        if (x != 0) {
          const Complex t = va * std::conj(at(b) * at(c));
          if (t != Complex{}) {
            gx[slot(x)] += t;
            any_g = true;
          }
        }
        // hy: m6 = a, m2 = b, m3 = n + m6 - m2 = c
        const long y = static_cast<long>(b - a) * (c - a);
        if (y != 0) {
          const Complex t = at(b) * at(c) * std::conj(va);
          if (t != Complex{}) {
            hy[slot(y)] += t * (-0.5 / static_cast<double>(y));
            any_h = true;
          }
        }
      }
    }
    if (!any_g && !any_h) continue;
    if (any_h) {
      conv.apply(hy, phi);
    } else {
      std::fill(phi.begin(), phi.end(), Complex{});
    }
    if (any_g) {
      conv.apply(gx, psi);
      for (auto& p : psi) p = -p;
    } else {
      std::fill(psi.begin(), psi.end(), Complex{});
    }

    for (int k = -big_n; k <= big_n; ++k) {
      Complex dc{};
      Complex dv{};
      for (int m = -big_n; m <= big_n; ++m) {
        const int r = n + m - k;  // partner index
        if (r >= -big_n && r <= big_n) {
          // m4 = k (times 2 for m5 = k), m1 = m, m5 = r
          const long x = static_cast<long>(m - k) * (m - r);
          if (x != 0) dc += 2.0 * at(m) * std::conj(at(r)) * phi[slot(x)];
          // m2 = k (times 2 for m3 = k), m6 = m, m3 = r
          const long y = static_cast<long>(k - m) * (r - m);
          if (y != 0) dv += 2.0 * at(r) * std::conj(at(m)) * (-0.5 / static_cast<double>(y)) * psi[slot(y)];
        }
        const int s = n + k - m;
        if (s >= -big_n && s <= big_n) {
          // m6 = k, m2 = m, m3 = s
          const long y = static_cast<long>(m - k) * (s - k);
          if (y != 0) dc += at(m) * at(s) * (-0.5 / static_cast<double>(y)) * psi[slot(y)];
          // m1 = k, m4 = m, m5 = s
          const long x = static_cast<long>(k - m) * (k - s);
          if (x != 0) dv += std::conj(at(m) * at(s)) * phi[slot(x)];
        }
      }
      parts.d_conj[static_cast<std::size_t>(k + big_n)] += dc;
      parts.d_v[static_cast<std::size_t>(k + big_n)] += dv;
    }
  }
  return parts;
}

}  // namespace

FourierState f2_gradient(const FourierState& state, bool allow_large) {
  if (state.truncation() > kF2ModeCap && !allow_large) {
    throw CostGuardError("f2_gradient: N = " + std::to_string(state.truncation()) + " exceeds the cap of " +
                         std::to_string(kF2ModeCap) + " (set the override to proceed)");
  }
  const auto parts = f2_parts(state);
  std::vector<Complex> out(state.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = parts.d_conj[k] - std::conj(parts.d_v[k]);
  return FourierState(state.truncation(), std::move(out), state.convention());
}

FourierState f2_gradient_direct(const FourierState& state) {
  const int big_n = state.truncation();
  if (big_n > 12) throw CostGuardError("f2_gradient_direct: N must be <= 12");
  auto at = [&](int m) { return state[m]; };
  auto in = [&](int m) { return m >= -big_n && m <= big_n; };
  std::vector<Complex> d_conj(state.size()), d_v(state.size());
  // Enumerate ordered sextuples through the contraction index n.
  for (int n = -big_n; n <= big_n; ++n) {
    for (int m1 = -big_n; m1 <= big_n; ++m1) {
      for (int m4 = -big_n; m4 <= big_n; ++m4) {
        const int m5 = n + m1 - m4;
        if (!in(m5) || m4 == m1 || m5 == m1) continue;
        for (int m6 = -big_n; m6 <= big_n; ++m6) {
          for (int m2 = -big_n; m2 <= big_n; ++m2) {
            const int m3 = n + m6 - m2;
            if (!in(m3) || m2 == m6 || m3 == m6) continue;
            const long q = static_cast<long>(m1) * m1 + m2 * m2 + m3 * m3 - m4 * m4 - m5 * m5 - m6 * m6;
            if (q == 0) continue;
            const double kcoef = 1.0 / (static_cast<double>(q) * (m2 - m6) * (m6 - m3));
            const int un[3] = {m1, m2, m3};
            const int cj[3] = {m4, m5, m6};
            for (int j = 0; j < 3; ++j) {
              Complex p = kcoef;
              for (int i = 0; i < 3; ++i) p *= at(un[i]);
              for (int i = 0; i < 3; ++i)
                if (i != j) p *= std::conj(at(cj[i]));
              d_conj[static_cast<std::size_t>(cj[j] + big_n)] += p;
              Complex r = kcoef;
              for (int i = 0; i < 3; ++i)
                if (i != j) r *= at(un[i]);
              for (int i = 0; i < 3; ++i) r *= std::conj(at(cj[i]));
              d_v[static_cast<std::size_t>(un[j] + big_n)] += r;
            }
          }
        }
      }
    }
  }
  std::vector<Complex> out(state.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = d_conj[k] - std::conj(d_v[k]);
  return FourierState(big_n, std::move(out), state.convention());
}

// ---- Flows ------------------------------------------------------------------

void FlowSpec::validate() const {
  if (substeps < 4) throw std::invalid_argument("FlowSpec: substeps must be >= 4");
  if (!(std::abs(s) <= 1.0)) throw std::invalid_argument("FlowSpec: |s| must be <= 1");
}

namespace {

FourierState gradient_of(Generator g, const FourierState& w, bool allow_large) {
  return g == Generator::kF1 ? f1_gradient(w) : f2_gradient(w, allow_large);
}

FourierState rk4_flow(const FourierState& w0, Generator g, double s, int substeps, bool allow_large) {
  const double h = s / substeps;
  FourierState w = w0;
  try {
    for (int k = 0; k < substeps; ++k) {
      const auto k1 = gradient_of(g, w, allow_large);
      const auto k2 = gradient_of(g, w + Complex(h / 2) * k1, allow_large);
      const auto k3 = gradient_of(g, w + Complex(h / 2) * k2, allow_large);
      const auto k4 = gradient_of(g, w + Complex(h) * k3, allow_large);
      w = w + Complex(h / 6) * (k1 + Complex(2.0) * (k2 + k3) + k4);
    }
  } catch (const std::invalid_argument&) {
    // FourierState rejects non-finite coefficients
    throw ConvergenceError("flow_F: integration diverged");
  }
  return w;
}

}  // namespace

FourierState flow_F(const FourierState& state, const FlowSpec& spec) {
  spec.validate();
  if (spec.generator == Generator::kF2 && state.truncation() > kF2ModeCap && !spec.allow_large) {
    throw CostGuardError("flow_F: F2 flow above the mode cap needs the override");
  }
  if (spec.s == 0.0) return state;
  const auto coarse = rk4_flow(state, spec.generator, spec.s, spec.substeps, spec.allow_large);
  if (!spec.convergence_check) return coarse;
  const auto fine = rk4_flow(state, spec.generator, spec.s, 2 * spec.substeps, spec.allow_large);
  const double diff = l2_distance(coarse, fine);
  if (diff > 1e-6) {
    throw ConvergenceError("flow_F: doubling substeps changed the result by " + std::to_string(diff));
  }
  return fine;
}

namespace {
FlowSpec flow_spec(Generator g, double s, int substeps, const NormalFormOptions& o) {
  FlowSpec f;
  f.generator = g;
  f.s = s;
  f.substeps = substeps;
  f.convergence_check = o.convergence_check;
  f.allow_large = o.allow_large;
  return f;
}
}  // namespace

FourierState u_to_v(const FourierState& u, const NormalFormOptions& o) {
  auto w = flow_F(u, flow_spec(Generator::kF1, -1.0, o.f1_substeps, o));
  if (o.include_f2) w = flow_F(w, flow_spec(Generator::kF2, -1.0, o.f2_substeps, o));
  return w;
}

FourierState v_to_u(const FourierState& v, const NormalFormOptions& o) {
  auto w = v;
  if (o.include_f2) w = flow_F(w, flow_spec(Generator::kF2, 1.0, o.f2_substeps, o));
  return flow_F(w, flow_spec(Generator::kF1, 1.0, o.f1_substeps, o));
}

// ---- Error term -------------------------------------------------------------

ResidualSeries residual_E(const Trajectory& traj, double P, const ResidualOptions& options) {
  const std::size_t count = traj.states.size();
  if (count < 3) throw std::invalid_argument("residual_E: need at least three snapshots");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t k = 1; k < count; ++k) {
    if (std::abs((traj.times[k] - traj.times[k - 1]) - h) > 1e-9 * std::max(1.0, h)) {
      throw std::invalid_argument("residual_E: snapshots must be uniformly spaced");
    }
  }
  if (!(h > 0.0) || h > 10.0 * traj.scheme.dt * (1.0 + 1e-12)) {
    throw std::invalid_argument("residual_E: snapshot spacing must satisfy 0 < h <= 10 dt");
  }
  const double g = nonlinear_sign(traj.scheme.nonlinearity);
  if (options.include_flows && traj.scheme.nonlinearity != Nonlinearity::kFocusing) {
    throw std::invalid_argument("residual_E: the normal form is built for the focusing equation");
  }
  const int sigma = traj.scheme.dispersion_exponent;
  const double p_eff = g * P;

  // w_k = exp(-i L t_k) v_k; linear_flow multiplies by exp(+i L t)
  // only snapshots adjacent to an interior centre are needed (all but the
  // middle one when there are exactly three)
  std::vector<FourierState> w(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (count == 3 && k == 1) continue;
    const auto v = options.include_flows ? u_to_v(traj.states[k], options.normal_form) : traj.states[k];
    w[k] = linear_flow(v, -traj.times[k], p_eff, sigma);
  }
  ResidualSeries out;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    out.times.push_back(traj.times[k]);
    out.values.push_back(Complex(1.0 / (2.0 * h)) * (w[k + 1] - w[k - 1]));
  }
  return out;
}

}  // namespace qlnls
