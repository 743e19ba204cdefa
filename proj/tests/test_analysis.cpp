#include <cmath>

#include "doctest.h"
#include "qlnls/analysis.hpp"

using namespace qlnls;

TEST_CASE("scaling fit on exact power laws") {
  auto f = scaling_fit({{0.4, 0.4}, {0.2, 0.2}, {0.1, 0.1}});
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  f = scaling_fit({{0.4, 0.16}, {0.2, 0.04}, {0.1, 0.01}});
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));

  const std::vector<std::pair<double, double>> pts{{0.4, 0.3}, {0.2, 0.11}, {0.1, 0.06}, {0.05, 0.021}};
  const auto base = scaling_fit(pts);
  auto scaled = pts;
  for (auto& p : scaled) p.second *= 7.5;
  const auto s = scaling_fit(scaled);
  CHECK(std::abs(s.slope - base.slope) <= 1e-12);
  CHECK(std::abs(s.intercept - base.intercept - std::log(7.5)) <= 1e-12);
  CHECK(base.r2 < 1.0);
  CHECK(base.r2 > 0.9);
}

TEST_CASE("scaling fit rejects degenerate input") {
  CHECK_THROWS_AS(scaling_fit({{0.4, 1.0}, {0.2, 0.5}}), DegenerateInputError);
  CHECK_THROWS_AS(scaling_fit({{0.4, 1.0}, {0.2, 0.0}, {0.1, 0.3}}), DegenerateInputError);
  CHECK_THROWS_AS(scaling_fit({{0.4, 1.0}, {0.2, -1.0}, {0.1, 0.3}}), DegenerateInputError);
  CHECK_THROWS_AS(scaling_fit({{0.2, 1.0}, {0.2, 0.5}, {0.2, 0.3}}), DegenerateInputError);
  CHECK_THROWS_AS(scaling_fit({{0.4, 1.0}, {0.2, NAN}, {0.1, 0.3}}), DegenerateInputError);
}

TEST_CASE("deviation curve: trivial cases") {
  SUBCASE("linear equation with P = 0") {
    const auto u = make_initial_data(gaussian_spec(0.3), 32);
    SchemeSpec scheme{Scheme::kStrangSplitStep, 1e-3, 2, Nonlinearity::kNone};
    const auto traj = evolve(u, 0.2, scheme, 20);
    const auto rep = deviation_curve(traj, 0.0, {NormSpec{2.0, 0.0}, NormSpec{kInf, 0.0}});
    for (const auto& series : rep.values) {
      for (double d : series) CHECK(d < 1e-13);
    }
  }
  SUBCASE("plane wave closed form; p = 2 and p = inf coincide") {
    const Complex a = 0.3;
    const auto u = FourierState::single_mode(8, 3, a);
    const auto traj = evolve(u, 1.0, SchemeSpec{}, 100);
    const auto rep = deviation_curve(traj, std::norm(a), {NormSpec{2.0, 0.0}, NormSpec{kInf, 0.0}});
    CHECK(rep.values[0].front() == 0.0);
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
      CHECK(std::abs(rep.values[0][k] - 2 * 0.3 * std::abs(std::sin(0.09 * rep.times[k]))) < 1e-8);
      CHECK(rep.values[0][k] == rep.values[1][k]);
    }
    CHECK(rep.P == std::norm(a));
    CHECK(rep.truncation == 8);
  }
}

TEST_CASE("deviation curve: Gaussian run properties") {
  const auto u = make_initial_data(gaussian_spec(0.2), 64);
  const SchemeSpec scheme;
  const auto traj = evolve(u, 0.5, scheme, 50);
  const auto rep = deviation_curve(traj, power(u), NormSpec{2.0, 0.0});
  CHECK(rep.values[0].front() == 0.0);
  for (double d : rep.values[0]) CHECK(std::isfinite(d));
  CHECK(rep.values[0].back() > 0.0);
  CHECK(rep.times == traj.times);

  const Complex phase = std::polar(1.0, 2.3);
  const auto traj2 = evolve(phase * u, 0.5, scheme, 50);
  const auto rep2 = deviation_curve(traj2, power(u), NormSpec{2.0, 0.0});
  for (std::size_t k = 0; k < rep.times.size(); ++k) CHECK(std::abs(rep.values[0][k] - rep2.values[0][k]) < 1e-10);

  Trajectory empty;
  CHECK_THROWS_AS(deviation_curve(empty, 0.0, NormSpec{}), std::invalid_argument);
}

TEST_CASE("identity report") {
  const auto r0 = identity_report(0);
  CHECK(r0.all_zero());
  const auto r4 = identity_report(4);
  CHECK(r4.all_zero());
  CHECK(!r4.lines.empty());
  for (const auto& l : r4.lines) CHECK(l.max_residual == "0");
  CHECK(r4.to_text().find("PASS") != std::string::npos);
}

TEST_CASE("identity report flags a corrupted F1 coefficient") {
  auto b = hambra::build_F1_F2(3);
  const auto target = b.f1.terms()[b.f1.size() / 2];
  b.f1 = b.f1.with_coefficient(target.monomial, target.coeff + hambra::GaussianRational(mpq_class(1, 7)));
  const auto rep = identity_report(b);
  CHECK(!rep.all_zero());
  CHECK(rep.f1_closed_form_mismatches == 1);
  bool found = false;
  for (const auto& l : rep.lines) {
    if (l.name == "{Lambda2,F1} + H4^nr") {
      found = true;
      // {Lambda2, M} = i q M: the residual is the corrupted monomial alone
      REQUIRE(l.residual_terms == 1);
      CHECK(l.sample_monomials.front().rfind(target.monomial.to_string(), 0) == 0);
    }
    if (l.name == "{F1,Q}") CHECK(l.residual_terms == 0);
  }
  CHECK(found);
  CHECK(rep.to_text().find("NONZERO") != std::string::npos);
}

TEST_CASE("nearness report on zero data is degenerate") {
  NormalFormOptions nf;
  CHECK_THROWS_AS(nearness_report({0.4, 0.2, 0.1}, 16, {NormSpec{kInf, 0.0}}, nf, 0.0), DegenerateInputError);
}

TEST_CASE("nearness report on a small sweep") {
  NormalFormOptions nf;
  nf.include_f2 = false;
  const auto rep = nearness_report({0.8, 0.6, 0.45}, 48, {NormSpec{kInf, 0.0}, NormSpec{2.0, 0.0}}, nf);
  REQUIRE(rep.rows.size() == 3);
  REQUIRE(rep.fits.size() == 2);
  CHECK(rep.max_l2_mismatch < 1e-8);
  for (const auto& r : rep.rows) {
    CHECK(r.values[0] > 0.0);
    CHECK(r.values[0] <= r.values[1]);
  }
}
