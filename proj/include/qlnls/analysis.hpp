// Deviation metrics, log-log scaling fits and verification reports.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlnls/dynamics.hpp"
#include "qlnls/hambra.hpp"
#include "qlnls/lattice.hpp"
#include "qlnls/nfflow.hpp"

namespace qlnls {

struct DeviationReport {
  std::vector<double> times;
  std::vector<NormSpec> norms;
  /// values[j][k]: norm j at times[k].
  std::vector<std::vector<double>> values;
  double P = 0.0;
  Convention convention = Convention::kPdeSign;
  double epsilon = 0.0;
  int truncation = 0;
  SchemeSpec scheme;

  const std::vector<double>& series(std::size_t norm_index) const { return values.at(norm_index); }
};

/// ||u(t) - linear_flow(u(0), t, P)|| per snapshot and per norm.
DeviationReport deviation_curve(const Trajectory& traj, double P, const std::vector<NormSpec>& norms);
DeviationReport deviation_curve(const Trajectory& traj, double P, const NormSpec& norm);

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScalingFit {
  std::vector<std::pair<double, double>> points;  // (eps, value)
  double slope = 0.0;
  double intercept = 0.0;  // log(value) = intercept + slope log(eps)
  double r2 = 0.0;
};

/// Least-squares line through (log eps, log value). Needs >= 3 points with
/// positive eps and value.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

struct IdentityLine {
  std::string name;
  std::size_t residual_terms = 0;
  /// max |coefficient| over the residual, exact, as text ("0" when clean)
  std::string max_residual;
  double max_residual_value = 0.0;
  /// at most a handful of offending monomials
  std::vector<std::string> sample_monomials;
};

struct IdentityReport {
  int truncation = 0;
  std::vector<IdentityLine> lines;
  std::vector<std::pair<std::string, std::size_t>> monomial_counts;
  /// F1 coefficients against 1/|2(m1-m3)(m2-m3)| per ordered tuple
  std::size_t f1_closed_form_mismatches = 0;
  bool all_zero() const;
  std::string to_text() const;
};

IdentityReport identity_report(int truncation);
IdentityReport identity_report(const hambra::NormalFormBuild& build);

InitialDataSpec gaussian_spec(double epsilon, double amplitude = 1.0);

struct SweepRow {
  double epsilon = 0.0;
  std::vector<double> values;  // one per norm
};

struct NearnessReport {
  std::vector<NormSpec> norms;
  std::vector<SweepRow> rows;
  std::vector<ScalingFit> fits;  // one per norm
  /// max_eps | ||u||_2 - ||v||_2 | / ||u||_2
  double max_l2_mismatch = 0.0;
};

/// ||u - u_to_v(u)|| for Gaussian data at each eps; slope fits when >= 3 eps.
NearnessReport nearness_report(const std::vector<double>& eps, int truncation, const std::vector<NormSpec>& norms,
                               const NormalFormOptions& options = {}, double amplitude = 1.0);

struct ErrorTermReport {
  std::vector<NormSpec> norms;
  std::vector<SweepRow> rows;
  std::vector<ScalingFit> fits;
  double h = 0.0;
};

/// ||E(v)|| at t = h from a three-snapshot trajectory with spacing h; fits as above.
ErrorTermReport error_term_report(const std::vector<double>& eps, int truncation, double h,
                                  const std::vector<NormSpec>& norms, const NormalFormOptions& options = {});

struct DeviationSweepRow {
  double epsilon = 0.0;
  double value = 0.0;
};

struct DeviationSweep {
  std::vector<DeviationSweepRow> rows;
  ScalingFit fit;
};

/// Final-time deviation at horizon T for Gaussian data at each eps.
DeviationSweep deviation_sweep(const std::vector<double>& eps, int truncation, double T, const SchemeSpec& scheme,
                               const NormSpec& norm);

}  // namespace qlnls
