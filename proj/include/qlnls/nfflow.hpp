// Numeric normal-form transformations: gradients of the generators F1, F2,
// their time-s flows, trajectory pullback and the error term E(v).
//
// F1 = sum_{l=0} v1 v2 conj(v3 v4) / (2 (m1-m3)(m2-m3)),
// F2 = G - conj(G),  G = sum v1 v2 v3 conj(v4 v5 v6) / (q(m) (m2-m6)(m6-m3))
// with m4,m5 != m1, m2,m3 != m6, q(m) != 0 and the contraction index
// m4+m5-m1 = m2+m3-m6 inside the lattice. These agree exactly with the
// generators produced by the symbolic homological solver.
#pragma once

#include <stdexcept>
#include <vector>

#include "qlnls/dynamics.hpp"
#include "qlnls/lattice.hpp"

namespace qlnls {

enum class Generator { kF1, kF2 };

class CostGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kF2ModeCap = 64;

/// dF1/d conj(w(n)) = sum_{m1+m2-m3=n, m1,m2 != n} w1 w2 conj(w3) / ((m1-n)(m2-n)).
FourierState f1_gradient(const FourierState& state);

/// dF2/d conj(w(k)). Uses histogram Cauchy transforms in the resonance
/// variables, O(N^3 + N^3 log N). N > kF2ModeCap needs allow_large.
FourierState f2_gradient(const FourierState& state, bool allow_large = false);

/// Five-fold direct sum for dF2/d conj(w(k)); reference for small N only (N <= 12).
FourierState f2_gradient_direct(const FourierState& state);

struct FlowSpec {
  Generator generator = Generator::kF1;
  double s = 1.0;
  int substeps = 16;
  /// Repeat with 2*substeps and fail if the results differ by > 1e-6 in l2.
  bool convergence_check = true;
  bool allow_large = false;

  void validate() const;
};

/// Integrates dw/ds = dF/d conj(w) from 0 to s with classical RK4.
FourierState flow_F(const FourierState& state, const FlowSpec& spec);

struct NormalFormOptions {
  int f1_substeps = 16;
  /// F2 is a much smaller field; 4 substeps already agree with 8 to ~1e-14 on
  /// Gaussian data at N = 64, and the doubling check still runs.
  int f2_substeps = 4;
  bool include_f2 = true;
  bool convergence_check = true;
  bool allow_large = false;
};

/// v = X_{F2}^{-1}(X_{F1}^{-1}(u)).
FourierState u_to_v(const FourierState& u, const NormalFormOptions& options = {});
/// u = X_{F1}^{1}(X_{F2}^{1}(v)).
FourierState v_to_u(const FourierState& v, const NormalFormOptions& options = {});

struct ResidualOptions {
  NormalFormOptions normal_form{};
  /// When false the pullback is the identity map.
  bool include_flows = true;
};

struct ResidualSeries {
  /// Centre times t_k of the central differences (interior snapshots).
  std::vector<double> times;
  /// exp(-i L t_k) E(v)(t_k); moduli equal those of E.
  std::vector<FourierState> values;
};

/// Central differences of w(t) = v(t) exp(-i L t), v = u_to_v(u), with
/// L(n) = -n^sigma + 4 g P. Needs uniform snapshots with spacing <= 10 dt.
ResidualSeries residual_E(const Trajectory& traj, double P, const ResidualOptions& options = {});

}  // namespace qlnls
