#include "qlnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qlnls {

DeviationReport deviation_curve(const Trajectory& traj, double P, const std::vector<NormSpec>& norms) {
  if (traj.states.empty()) throw std::invalid_argument("deviation_curve: empty trajectory");
  for (const auto& n : norms) n.validate();
  DeviationReport r;
  r.times = traj.times;
  r.norms = norms;
  r.P = P;
  r.convention = traj.states.front().convention();
  r.truncation = traj.states.front().truncation();
  r.scheme = traj.scheme;
  r.values.assign(norms.size(), std::vector<double>(traj.times.size()));
  const auto& u0 = traj.states.front();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto diff = traj.states[k] - linear_flow(u0, traj.times[k], P, traj.scheme.dispersion_exponent);
    for (std::size_t j = 0; j < norms.size(); ++j) r.values[j][k] = weighted_norm(diff, norms[j]);
  }
  return r;
}

DeviationReport deviation_curve(const Trajectory& traj, double P, const NormSpec& norm) {
  return deviation_curve(traj, P, std::vector<NormSpec>{norm});
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw DegenerateInputError("scaling_fit: need at least 3 points");
  std::vector<double> x, y;
  for (const auto& [e, v] : points) {
    if (!(e > 0.0) || !(v > 0.0) || !std::isfinite(v)) {
      throw DegenerateInputError("scaling_fit: eps and values must be positive and finite");
    }
    x.push_back(std::log(e));
    y.push_back(std::log(v));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateInputError("scaling_fit: eps values must be distinct");
  ScalingFit f;
  f.points = points;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

// ---- Identity report -------------------------------------------------------

bool IdentityReport::all_zero() const {
  for (const auto& l : lines) {
    if (l.residual_terms != 0) return false;
  }
  return f1_closed_form_mismatches == 0;
}

std::string IdentityReport::to_text() const {
  std::ostringstream os;
  os << "identity suite, N_sym = " << truncation << "\n";
  for (const auto& [name, count] : monomial_counts) os << "  monomials " << name << ": " << count << "\n";
  for (const auto& l : lines) {
    os << "  " << (l.residual_terms == 0 ? "ZERO    " : "NONZERO ") << l.name << "  terms=" << l.residual_terms
       << "  max|c|=" << l.max_residual << "\n";
    for (const auto& m : l.sample_monomials) os << "      " << m << "\n";
  }
  os << "  F1 closed-form mismatches: " << f1_closed_form_mismatches << "\n";
  os << "  result: " << (all_zero() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

IdentityReport identity_report(const hambra::NormalFormBuild& b) {
  IdentityReport r;
  r.truncation = b.truncation;
  r.monomial_counts = {{"H4", b.h4.size()},     {"H4^nr", b.h4_nr.size()}, {"H4^r1", b.h4_r1.size()},
                       {"H4^r2", b.h4_r2.size()}, {"F1", b.f1.size()},       {"F2", b.f2.size()}};
  for (const auto& id : hambra::identity_suite(b)) {
    IdentityLine line;
    line.name = id.name;
    line.residual_terms = id.residual.size();
    mpq_class best = 0;
    for (const auto& t : id.residual.terms()) {
      const mpq_class n = t.coeff.norm();
      if (n > best) best = n;
      if (line.sample_monomials.size() < 5) {
        line.sample_monomials.push_back(t.monomial.to_string() + " * " + t.coeff.to_string());
      }
    }
    line.max_residual_value = std::sqrt(best.get_d());
    line.max_residual = best == 0 ? "0" : "sqrt(" + best.get_str() + ")";
    r.lines.push_back(std::move(line));
  }
  for (const auto& t : b.f1.terms()) {
    const auto u = t.monomial.unconj();
    const auto c = t.monomial.conj();
    const long q = 2L * (u[0] - c[0]) * (u[1] - c[0]);
    const long mult = t.monomial.multiplicity();
    if (q == 0) {
      ++r.f1_closed_form_mismatches;
      continue;
    }
    mpq_class expect(mult * mult, q * q);
    expect.canonicalize();
    if (t.coeff.norm() != expect) ++r.f1_closed_form_mismatches;
  }
  // every non-resonant quadruple needs its own F1 term
  if (b.f1.size() != b.h4_nr.size()) {
    r.f1_closed_form_mismatches += b.f1.size() > b.h4_nr.size() ? b.f1.size() - b.h4_nr.size()
                                                                : b.h4_nr.size() - b.f1.size();
  }
  return r;
}

IdentityReport identity_report(int truncation) { return identity_report(hambra::build_F1_F2(truncation)); }

// ---- Sweeps ----------------------------------------------------------------

InitialDataSpec gaussian_spec(double epsilon, double amplitude) {
  InitialDataSpec s;
  s.profile = Profile::kGaussian;
  s.epsilon = epsilon;
  s.amplitude = amplitude;
  return s;
}

namespace {
std::vector<ScalingFit> fit_columns(const std::vector<SweepRow>& rows, std::size_t columns) {
  std::vector<ScalingFit> fits;
  for (std::size_t j = 0; j < columns; ++j) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r.epsilon, r.values[j]);
    fits.push_back(scaling_fit(pts));
  }
  return fits;
}
}  // namespace

NearnessReport nearness_report(const std::vector<double>& eps, int truncation, const std::vector<NormSpec>& norms,
                               const NormalFormOptions& options, double amplitude) {
  NearnessReport r;
  r.norms = norms;
  for (double e : eps) {
    const auto u = make_initial_data(gaussian_spec(e, amplitude), truncation);
    const auto v = u_to_v(u, options);
    const auto d = u - v;
    SweepRow row{e, {}};
    for (const auto& n : norms) row.values.push_back(weighted_norm(d, n));
    r.rows.push_back(std::move(row));
    const double nu = std::sqrt(power(u));
    if (nu > 0.0) r.max_l2_mismatch = std::max(r.max_l2_mismatch, std::abs(std::sqrt(power(v)) - nu) / nu);
  }
  if (r.rows.size() >= 3) r.fits = fit_columns(r.rows, norms.size());
  return r;
}

ErrorTermReport error_term_report(const std::vector<double>& eps, int truncation, double h,
                                  const std::vector<NormSpec>& norms, const NormalFormOptions& options) {
  if (!(h > 0.0)) throw std::invalid_argument("error_term_report: h must be positive");
  ErrorTermReport r;
  r.norms = norms;
  r.h = h;
  for (double e : eps) {
    const auto u = make_initial_data(gaussian_spec(e), truncation);
    const auto traj = evolve(u, 2.0 * h, SchemeSpec{Scheme::kStrangSplitStep, h}, 1);
    ResidualOptions ro;
    ro.normal_form = options;
    const auto series = residual_E(traj, power(u), ro);
    SweepRow row{e, {}};
    for (const auto& n : norms) row.values.push_back(weighted_norm(series.values.front(), n));
    r.rows.push_back(std::move(row));
  }
  if (r.rows.size() >= 3) r.fits = fit_columns(r.rows, norms.size());
  return r;
}

DeviationSweep deviation_sweep(const std::vector<double>& eps, int truncation, double T, const SchemeSpec& scheme,
                               const NormSpec& norm) {
  DeviationSweep s;
  std::vector<std::pair<double, double>> pts;
  for (double e : eps) {
    const auto u = make_initial_data(gaussian_spec(e), truncation);
    const long steps = std::max(1L, std::lround(T / scheme.dt));
    const auto traj = evolve(u, T, scheme, static_cast<int>(steps));
    const auto rep = deviation_curve(traj, power(u), norm);
    s.rows.push_back({e, rep.values[0].back()});
    pts.emplace_back(e, rep.values[0].back());
  }
  s.fit = scaling_fit(pts);
  return s;
}

}  // namespace qlnls
