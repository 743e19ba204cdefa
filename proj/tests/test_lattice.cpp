#include <cmath>
#include <random>

#include "doctest.h"
#include "qlnls/lattice.hpp"

using namespace qlnls;

namespace {

InitialDataSpec gaussian(double eps) {
  InitialDataSpec s;
  s.epsilon = eps;
  return s;
}

}  // namespace

TEST_CASE("state construction and arithmetic") {
  const FourierState z(3);
  CHECK(z.size() == 7);
  CHECK(power(z) == 0.0);
  const auto s = FourierState::single_mode(3, -2, {0.5, 0.5});
  CHECK(s[-2] == Complex(0.5, 0.5));
  CHECK(s[5] == Complex{});
  CHECK(power(s) == doctest::Approx(0.5));
  CHECK(l2_distance(s + s, Complex(2.0) * s) == 0.0);
  CHECK(l2_distance(s - s, z) == 0.0);
  CHECK_THROWS_AS(s + FourierState(4), std::invalid_argument);
  CHECK_THROWS_AS(FourierState(2, std::vector<Complex>(4)), std::invalid_argument);
  CHECK_THROWS_AS(FourierState(1, std::vector<Complex>{0.0, NAN, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(FourierState::single_mode(3, 4, 1.0), std::invalid_argument);
  const auto r = s.resized(5);
  CHECK(r.truncation() == 5);
  CHECK(r[-2] == s[-2]);
  CHECK(!convention_tag(Convention::kPdeSign).empty());
}

TEST_CASE("weighted norm examples") {
  const auto one = FourierState::single_mode(4, 0, 1.0);
  for (double p : {1.0, 2.0, 3.5, kInf}) {
    for (double d : {0.0, 0.3}) CHECK(weighted_norm(one, {p, d}) == doctest::Approx(1.0));
  }
  std::vector<Complex> c(5);
  c[1] = 1.0;
  c[3] = 1.0;
  const FourierState two(2, c);
  CHECK(weighted_norm(two, {1.0, std::log(2.0)}) == doctest::Approx(4.0));
  CHECK(weighted_norm(two, {kInf, std::log(2.0)}) == doctest::Approx(2.0));
  CHECK(weighted_norm(two, {2.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(weighted_norm(two, {0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_norm(two, {2.0, -0.1}), std::invalid_argument);
}

TEST_CASE("class constant examples") {
  const double eps = 0.3;
  CHECK(class_constant(FourierState::single_mode(4, 1, std::sqrt(eps)), eps) == doctest::Approx(1.0));
  CHECK(class_constant(FourierState(4), eps) == 0.0);
  CHECK_THROWS_AS(class_constant(FourierState(4), 1.5), std::invalid_argument);
}

TEST_CASE("Gaussian initial data against its Fourier integral") {
  const auto u = make_initial_data(gaussian(0.1), 256);
  const double sup = weighted_norm(u, {kInf, 0.0});
  CHECK(sup == doctest::Approx(0.2821 * std::sqrt(0.1)).epsilon(0.01));
  CHECK(weighted_norm(u, {1.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(0.1)).epsilon(0.02));
  // coefficient profile sqrt(pi)/(2 pi) eps^{1/2} exp(-eps^2 n^2/4)
  for (int n : {0, 5, 10, 20, 30}) {
    const double expect = std::sqrt(M_PI) / (2 * M_PI) * std::sqrt(0.1) * std::exp(-0.01 * n * n / 4.0);
    CHECK(std::abs(u[n]) == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(class_constant(u, 0.1) >= 0.9);
  CHECK(class_constant(u, 0.1) <= 1.1);
  // Parseval against the quadrature of the physical samples
  const int m = 4096;
  const auto q = sample_initial_data(gaussian(0.1), m);
  double integral = 0.0;
  for (const auto& x : q) integral += std::norm(x);
  integral *= 2 * M_PI / m;
  CHECK(weighted_norm(u, {2.0, 0.0}) == doctest::Approx(std::sqrt(integral / (2 * M_PI))).epsilon(1e-10));
  CHECK(power(u) == doctest::Approx(std::sqrt(M_PI / 2) / (2 * M_PI)).epsilon(0.005));
}

TEST_CASE("Gaussian family scaling in eps") {
  const auto a = make_initial_data(gaussian(0.2), 256);
  const auto b = make_initial_data(gaussian(0.1), 256);
  CHECK(weighted_norm(a, {kInf, 0.0}) / weighted_norm(b, {kInf, 0.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
  CHECK(weighted_norm(a, {1.0, 0.0}) / weighted_norm(b, {1.0, 0.0}) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.02));
  double lo = 1e9, hi = 0;
  for (double e : {0.4, 0.2, 0.1, 0.05}) {
    const double p = power(make_initial_data(gaussian(e), 256));
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  CHECK(hi / lo - 1.0 < 0.01);
}

TEST_CASE("initial data edge cases") {
  auto zero = gaussian(0.2);
  zero.amplitude = 0.0;
  const auto z = make_initial_data(zero, 64);
  CHECK(weighted_norm(z, {kInf, 0.0}) == 0.0);
  CHECK(weighted_norm(z, {1.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(make_initial_data(gaussian(0.05), 8), TruncationError);
  CHECK_THROWS_AS(make_initial_data(gaussian(1.2), 64), std::invalid_argument);
  CHECK_THROWS_AS(make_initial_data(gaussian(0.0), 64), std::invalid_argument);
  auto bad_cut = gaussian(0.2);
  bad_cut.cutoff.taper_end = 3.5;
  CHECK_THROWS_AS(make_initial_data(bad_cut, 64), std::invalid_argument);
  // deterministic, bit for bit
  const auto x = make_initial_data(gaussian(0.1), 128);
  const auto y = make_initial_data(gaussian(0.1), 128);
  CHECK(l2_distance(x, y) == 0.0);
  // custom shape reproduces the Gaussian
  auto custom = gaussian(0.1);
  custom.profile = Profile::kCustomSampled;
  custom.shape = [](double t) { return Complex(std::exp(-t * t)); };
  CHECK(l2_distance(make_initial_data(custom, 128), x) < 1e-14);
}

TEST_CASE("cutoff shape") {
  const Cutoff h;
  CHECK(h(0.0) == 1.0);
  CHECK(h(1.2) == 1.0);
  CHECK(h(-1.0) == 1.0);
  CHECK(h(M_PI / 2 + 0.2) == 0.0);
  CHECK(h(3.0) == 0.0);
  const double mid = h(0.5 * (1.2 + M_PI / 2 + 0.2));
  CHECK(mid == doctest::Approx(0.5));
  double prev = 1.0;
  for (double x = 1.2; x <= 1.8; x += 0.01) {
    CHECK(h(x) <= prev + 1e-15);
    prev = h(x);
  }
}

TEST_CASE("norm properties on random states") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 9;
    std::vector<Complex> c(static_cast<std::size_t>(2 * n + 1));
    for (auto& x : c) x = {g(rng), g(rng)};
    const FourierState s(n, c);
    const double l2 = weighted_norm(s, {2.0, 0.0});
    CHECK(power(s) == doctest::Approx(l2 * l2).epsilon(1e-12));
    const double eps = 0.05 + 0.9 * (trial % 7) / 7.0;
    const double cc = class_constant(s, eps);
    for (double p : {2.0, 3.0, 4.0}) {
      CHECK(weighted_norm(s, {p, 0.0}) <= cc * std::pow(eps, 0.5 - 1.0 / p) + 1e-12);
    }
    const Complex phase = std::polar(1.0, 0.7 * trial);
    CHECK(weighted_norm(phase * s, {1.0, 0.2}) == doctest::Approx(weighted_norm(s, {1.0, 0.2})).epsilon(1e-13));
  }
}
