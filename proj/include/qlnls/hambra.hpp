// Exact polynomial Hamiltonians on the truncated Fourier lattice.
//
// A monomial is prod_i v(m_i) prod_j conj(v(m'_j)) with an exact Gaussian-rational
// coefficient. Brackets follow
//   {A, B} = sum_n dA/dv(n) dB/dconj(v(n)) - dA/dconj(v(n)) dB/dv(n),
// and the quadratic part is Lambda2 = -i sum n^sigma |v(n)|^2 (see Convention).
#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlnls/lattice.hpp"

namespace qlnls::hambra {

/// a + b i with a, b arbitrary-precision rationals.
struct GaussianRational {
  mpq_class re;
  mpq_class im;

  GaussianRational() = default;
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  static GaussianRational i_unit() { return {0, 1}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  Complex to_complex() const { return {re.get_d(), im.get_d()}; }
  GaussianRational conj() const { return {re, -im}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re * re + im * im; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  std::string to_string() const;
};

class HambraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical key: unconjugated indices ascending, then conjugated ascending.
class Monomial {
 public:
  static constexpr int kMaxFactors = 16;

  Monomial() = default;
  Monomial(std::span<const int> unconj, std::span<const int> conj);

  std::span<const std::int8_t> unconj() const { return {idx_.data(), n_unconj_}; }
  std::span<const std::int8_t> conj() const { return {idx_.data() + n_unconj_, n_conj_}; }
  int degree() const { return n_unconj_ + n_conj_; }
  /// l(m) = sum unconj - sum conj.
  int momentum() const;
  bool is_balanced() const { return n_unconj_ == n_conj_; }
  /// The conjugate monomial (roles of v and conj(v) swapped).
  Monomial conjugate() const;
  /// Number of ordered index tuples represented by this key.
  long multiplicity() const;
  int max_abs_index() const;
  std::string to_string() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

  // Internal assembly for the bracket kernel.
  static Monomial from_sorted(std::span<const std::int8_t> unconj, std::span<const std::int8_t> conj);
  std::size_t hash() const;

 private:
  std::uint8_t n_unconj_ = 0;
  std::uint8_t n_conj_ = 0;
  std::array<std::int8_t, kMaxFactors> idx_{};
};

struct Term {
  Monomial monomial;
  GaussianRational coeff;
};

/// Sparse exact polynomial. Terms are sorted by monomial, nonzero, and every
/// monomial has zero momentum and indices inside [-N_sym, N_sym].
class PolyHamiltonian {
 public:
  static constexpr int kMaxTruncation = 60;

  explicit PolyHamiltonian(int truncation = 0) : truncation_(truncation) {}
  /// Accumulates duplicates and drops zero coefficients.
  PolyHamiltonian(int truncation, std::vector<Term> terms);

  int truncation() const { return truncation_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  int max_degree() const;
  GaussianRational coefficient(const Monomial& m) const;

  PolyHamiltonian operator+(const PolyHamiltonian& o) const;
  PolyHamiltonian operator-(const PolyHamiltonian& o) const;
  PolyHamiltonian scaled(const GaussianRational& c) const;
  /// Polynomial whose coefficient on `m` is replaced by `c` (added if absent).
  PolyHamiltonian with_coefficient(const Monomial& m, const GaussianRational& c) const;
  /// Largest |coefficient|^2 over all terms (zero for the zero polynomial).
  mpq_class max_coefficient_norm() const;
  /// True when conj(P(v)) == -P(v), i.e. Re P = 0 identically.
  bool is_anti_hermitian() const;

  friend bool operator==(const PolyHamiltonian&, const PolyHamiltonian&);

 private:
  int truncation_;
  std::vector<Term> terms_;
};

// ---- Standard pieces --------------------------------------------------------

/// -i sum_n n^sigma |v(n)|^2 over the given modes.
PolyHamiltonian lambda2(int truncation, int sigma = 2);
PolyHamiltonian lambda2(std::span<const int> modes, int truncation, int sigma = 2);
/// i sum_{l(m)=0} v(m1) v(m2) conj v(m3) conj v(m4), ordered tuples over the modes.
PolyHamiltonian quartic(int truncation);
PolyHamiltonian quartic(std::span<const int> modes, int truncation);
/// Q = sum_n |v(n)|^2.
PolyHamiltonian mass(int truncation);

PolyHamiltonian poisson_bracket(const PolyHamiltonian& a, const PolyHamiltonian& b);

/// Eigenvalue of {lambda2, .} on a monomial; lambda2 must be diagonal quadratic.
GaussianRational ad_eigenvalue(const PolyHamiltonian& lambda2, const Monomial& m);

struct ResonanceSplit {
  PolyHamiltonian nonresonant;
  PolyHamiltonian resonant;
};
ResonanceSplit resonance_split(const PolyHamiltonian& h, const PolyHamiltonian& lambda2);

/// Splits the resonant quartic part into r1 (diagonal |v(m)|^4 terms) and
/// r2 = 2 kappa Q^2, where kappa is the per-ordered-tuple coefficient.
std::pair<PolyHamiltonian, PolyHamiltonian> split_r1_r2(const PolyHamiltonian& resonant);

/// F with {lambda2, F} + source = 0, coefficientwise -c/lambda_M.
PolyHamiltonian solve_homological(const PolyHamiltonian& lambda2, const PolyHamiltonian& source);

struct IdentityResidual {
  std::string name;
  PolyHamiltonian residual;
};

struct NormalFormBuild {
  int truncation = 0;
  PolyHamiltonian lambda2;
  PolyHamiltonian h4;
  PolyHamiltonian h4_nr;
  PolyHamiltonian h4_r;
  PolyHamiltonian h4_r1;
  PolyHamiltonian h4_r2;
  PolyHamiltonian f1;
  /// 1/2 {H4^nr, F1}
  PolyHamiltonian half_bracket;
  PolyHamiltonian half_bracket_nr;
  PolyHamiltonian f2;
  PolyHamiltonian q;
};

/// Builds Lambda2, H4, its splits, F1 and F2 on [-N_sym, N_sym]. N_sym <= 12.
NormalFormBuild build_F1_F2(int truncation);

/// The exact identity suite; every residual is zero for a correct build.
std::vector<IdentityResidual> identity_suite(const NormalFormBuild& build);

/// dH/d conj(v(k)) for every k of the state's lattice, in floating point.
FourierState gradient_eval(const PolyHamiltonian& h, const FourierState& state);
Complex evaluate(const PolyHamiltonian& h, const FourierState& state);

/// Floating-point copy of a polynomial for repeated evaluation.
class CompiledPolynomial {
 public:
  explicit CompiledPolynomial(const PolyHamiltonian& h);
  FourierState gradient(const FourierState& state) const;
  Complex evaluate(const FourierState& state) const;
  int truncation() const { return truncation_; }

 private:
  struct Entry {
    Complex coeff;
    std::vector<int> unconj;
    std::vector<int> conj;
  };
  int truncation_;
  std::vector<Entry> entries_;
};

}  // namespace qlnls::hambra
