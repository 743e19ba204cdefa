#include <random>

#include "doctest.h"
#include "qlnls/hambra.hpp"
#include "qlnls/nfflow.hpp"

using namespace qlnls;

namespace {

FourierState random_state(std::mt19937& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<Complex> c(static_cast<std::size_t>(2 * n + 1));
  for (auto& x : c) x = {g(rng), g(rng)};
  return FourierState(n, std::move(c));
}

double l2(const FourierState& s) { return weighted_norm(s, {2.0, 0.0}); }

}  // namespace

TEST_CASE("F1 gradient examples") {
  std::vector<Complex> c(5);
  c[2] = 0.1;  // mode 0
  c[3] = 0.1;  // mode 1
  const auto g = f1_gradient(FourierState(2, c));
  CHECK(std::abs(g[2]) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(l2(f1_gradient(FourierState::single_mode(5, 2, {0.4, 0.1}))) == 0.0);
  CHECK(l2(f1_gradient(FourierState(5))) == 0.0);
}

TEST_CASE("F2 gradient trivial cases and cost guard") {
  CHECK(l2(f2_gradient(FourierState::single_mode(6, -1, {0.4, 0.1}))) < 1e-15);
  CHECK(l2(f2_gradient(FourierState(6))) == 0.0);
  CHECK(l2(f2_gradient_direct(FourierState::single_mode(4, 2, {0.4, 0.1}))) == 0.0);
  CHECK_THROWS_AS(f2_gradient(FourierState(kF2ModeCap + 1)), CostGuardError);
  CHECK_NOTHROW(f2_gradient(FourierState(kF2ModeCap + 1), true));
}

TEST_CASE("gradients agree with the symbolic generators") {
  std::mt19937 rng(17);
  for (int n = 1; n <= 4; ++n) {
    const auto build = hambra::build_F1_F2(n);
    const hambra::CompiledPolynomial f1(build.f1);
    const hambra::CompiledPolynomial f2(build.f2);
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = random_state(rng, n, 0.5);
      const auto r1 = f1.gradient(s);
      const auto r2 = f2.gradient(s);
      // floors at the natural scales |s|^3 and |s|^5 guard near-cancelling cases
      const double s2 = l2(s);
      CHECK(l2_distance(f1_gradient(s), r1) <= 1e-12 * std::max(l2(r1), std::pow(s2, 3)));
      CHECK(l2_distance(f2_gradient(s), r2) <= 1e-12 * std::max(l2(r2), std::pow(s2, 5)));
      CHECK(l2_distance(f2_gradient_direct(s), r2) <= 1e-12 * std::max(l2(r2), std::pow(s2, 5)));
    }
  }
  // support on {0,1} inside a wider lattice
  std::vector<Complex> c(9);
  c[4] = {0.3, -0.2};
  c[5] = {0.1, 0.4};
  const FourierState s(4, c);
  const auto build = hambra::build_F1_F2(4);
  const auto r2 = hambra::gradient_eval(build.f2, s);
  CHECK(l2_distance(f2_gradient(s), r2) <= 1e-12 * std::max(l2(r2), std::pow(l2(s), 5)));
}

TEST_CASE("fast F2 gradient matches the direct sum at moderate N") {
  std::mt19937 rng(29);
  const auto s = random_state(rng, 10, 0.2);
  const auto direct = f2_gradient_direct(s);
  CHECK(l2_distance(f2_gradient(s), direct) <= 1e-11 * l2(direct));
}

TEST_CASE("flows: identity, group property, invariants") {
  std::mt19937 rng(4);
  const auto s = random_state(rng, 6, 0.2);
  for (auto gen : {Generator::kF1, Generator::kF2}) {
    FlowSpec spec;
    spec.generator = gen;
    spec.s = 0.0;
    CHECK(l2_distance(flow_F(s, spec), s) == 0.0);
    spec.s = 0.8;
    const auto fwd = flow_F(s, spec);
    spec.s = -0.8;
    const auto back = flow_F(fwd, spec);
    CHECK(l2_distance(back, s) < 1e-8);
    CHECK(std::abs(power(fwd) - power(s)) <= 1e-8 * power(s));
    CHECK(l2_distance(fwd, s) > 1e-6);

    const Complex phase = std::polar(1.0, 1.1);
    spec.s = 1.0;
    CHECK(l2_distance(flow_F(phase * s, spec), phase * flow_F(s, spec)) < 1e-10);
  }
  FlowSpec bad;
  bad.substeps = 3;
  CHECK_THROWS_AS(flow_F(s, bad), std::invalid_argument);
  bad.substeps = 16;
  bad.s = 1.5;
  CHECK_THROWS_AS(flow_F(s, bad), std::invalid_argument);
}

TEST_CASE("flow self-convergence failure is reported") {
  std::mt19937 rng(8);
  const auto big = random_state(rng, 4, 3.0);
  FlowSpec spec;
  spec.substeps = 4;
  CHECK_THROWS_AS(flow_F(big, spec), ConvergenceError);
}

TEST_CASE("normal form maps are mutual inverses") {
  std::mt19937 rng(12);
  const auto u = random_state(rng, 8, 0.15);
  const auto v = u_to_v(u);
  CHECK(l2_distance(v_to_u(v), u) < 1e-8);
  CHECK(std::abs(power(v) - power(u)) <= 1e-8 * power(u));
  CHECK(l2(u_to_v(FourierState(8))) == 0.0);
}

TEST_CASE("Lie series of the F1 transform") {
  // H o X_F^1 = H + {H,F} + 1/2 {{H,F},F} + ..., truncated after the degree-6
  // terms plus 1/2{{H4,F1},F1}; the remainder is O(a^8).
  using namespace hambra;
  const int n = 3;
  const auto b = build_F1_F2(n);
  const auto l2f = poisson_bracket(b.lambda2, b.f1);
  const auto h4f = poisson_bracket(b.h4, b.f1);
  const GaussianRational half(mpq_class(1, 2));
  const auto series = b.lambda2 + b.h4 + l2f + h4f + poisson_bracket(l2f, b.f1).scaled(half) +
                      poisson_bracket(h4f, b.f1).scaled(half);
  const CompiledPolynomial series_c(series);
  const CompiledPolynomial h_c(b.lambda2 + b.h4);

  std::mt19937 rng(2);
  const auto shape = random_state(rng, n, 1.0);
  std::vector<double> amps{0.1, 0.05, 0.025};
  std::vector<double> errs;
  for (double a : amps) {
    const auto v = Complex(a) * shape;
    FlowSpec spec;
    spec.substeps = 64;
    const auto w = flow_F(v, spec);
    errs.push_back(std::abs(h_c.evaluate(w) - series_c.evaluate(v)));
  }
  const double slope1 = std::log(errs[0] / errs[1]) / std::log(2.0);
  const double slope2 = std::log(errs[1] / errs[2]) / std::log(2.0);
  INFO("errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(slope1 >= 7.5);
  CHECK(slope2 >= 7.5);
}

TEST_CASE("error term extraction") {
  SUBCASE("vanishes for the linear equation without flows") {
    InitialDataSpec spec;
    spec.epsilon = 0.3;
    const auto u0 = make_initial_data(spec, 32);
    SchemeSpec scheme{Scheme::kStrangSplitStep, 1e-3, 2, Nonlinearity::kNone};
    const auto traj = evolve(u0, 0.01, scheme, 1);
    ResidualOptions opt;
    opt.include_flows = false;
    const auto e = residual_E(traj, power(u0), opt);
    REQUIRE(e.values.size() == 9);
    for (const auto& x : e.values) CHECK(weighted_norm(x, {kInf, 0.0}) < 1e-10);
  }
  SUBCASE("spacing is validated") {
    const auto u0 = FourierState::single_mode(4, 1, {0.1, 0.0});
    const auto traj = evolve(u0, 0.1, SchemeSpec{Scheme::kStrangSplitStep, 1e-3}, 20);
    CHECK_THROWS_AS(residual_E(traj, power(u0)), std::invalid_argument);
  }
  SUBCASE("matches the reference derivative to O(h^2)") {
    std::mt19937 rng(31);
    const int n = 8;
    const auto u0 = random_state(rng, n, 0.05);
    const double P = power(u0);
    NormalFormOptions nf;
    auto rhs = [&](const FourierState& u) {
      auto lin = u.to_vector();
      for (int k = -n; k <= n; ++k) lin[static_cast<std::size_t>(k + n)] *= Complex(0, -k * k);
      return FourierState(n, lin) + Complex(0, 1) * nonlinear_term(u);
    };
    std::vector<double> errs;
    for (double h : {2e-3, 1e-3}) {
      const auto u1 = ode_oracle(u0, h, 1e-14);
      const auto u2 = ode_oracle(u0, 2 * h, 1e-14);
      Trajectory traj;
      traj.times = {0.0, h, 2 * h};
      traj.states = {u0, u1, u2};
      traj.scheme = SchemeSpec{Scheme::kRk4InteractionPicture, h};
      const auto ext = residual_E(traj, P);

      const double eta = 1e-6;
      const auto f = rhs(u1);
      const auto dv = Complex(1.0 / (2 * eta)) * (u_to_v(u1 + Complex(eta) * f, nf) - u_to_v(u1 - Complex(eta) * f, nf));
      const auto v = u_to_v(u1, nf);
      auto lv = v.to_vector();
      for (int k = -n; k <= n; ++k) lv[static_cast<std::size_t>(k + n)] *= Complex(0, -k * k + 4 * P);
      const auto e_exact = dv - FourierState(n, lv);
      const auto rotated = linear_flow(e_exact, -h, P);
      errs.push_back(l2_distance(ext.values.front(), rotated) / l2(rotated));
    }
    INFO("relative errors " << errs[0] << " " << errs[1]);
    CHECK(errs[1] < 1e-2);
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.25));
  }
}
