#include "qlnls/hambra.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace qlnls::hambra {

// ---- GaussianRational -------------------------------------------------------

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  if (sgn(a.im) == 0 && sgn(b.im) == 0) return {a.re * b.re, 0};
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  const mpq_class d = b.norm();
  if (sgn(d) == 0) throw HambraError("GaussianRational: division by zero");
  const GaussianRational num = a * b.conj();
  return {num.re / d, num.im / d};
}

std::string GaussianRational::to_string() const {
  std::ostringstream os;
  os << "(" << re.get_str() << ")+(" << im.get_str() << ")i";
  return os.str();
}

// ---- Monomial ---------------------------------------------------------------

Monomial::Monomial(std::span<const int> unconj, std::span<const int> conj) {
  if (unconj.size() + conj.size() > static_cast<std::size_t>(kMaxFactors)) {
    throw HambraError("Monomial: degree exceeds " + std::to_string(kMaxFactors));
  }
  n_unconj_ = static_cast<std::uint8_t>(unconj.size());
  n_conj_ = static_cast<std::uint8_t>(conj.size());
  std::size_t k = 0;
  for (int m : unconj) {
    if (std::abs(m) > PolyHamiltonian::kMaxTruncation) throw HambraError("Monomial: index out of range");
    idx_[k++] = static_cast<std::int8_t>(m);
  }
  for (int m : conj) {
    if (std::abs(m) > PolyHamiltonian::kMaxTruncation) throw HambraError("Monomial: index out of range");
    idx_[k++] = static_cast<std::int8_t>(m);
  }
  std::sort(idx_.begin(), idx_.begin() + n_unconj_);
  std::sort(idx_.begin() + n_unconj_, idx_.begin() + n_unconj_ + n_conj_);
}

Monomial Monomial::from_sorted(std::span<const std::int8_t> unconj, std::span<const std::int8_t> conj) {
  Monomial m;
  m.n_unconj_ = static_cast<std::uint8_t>(unconj.size());
  m.n_conj_ = static_cast<std::uint8_t>(conj.size());
  std::copy(unconj.begin(), unconj.end(), m.idx_.begin());
  std::copy(conj.begin(), conj.end(), m.idx_.begin() + m.n_unconj_);
  return m;
}

int Monomial::momentum() const {
  int l = 0;
  for (auto m : unconj()) l += m;
  for (auto m : conj()) l -= m;
  return l;
}

Monomial Monomial::conjugate() const { return from_sorted(conj(), unconj()); }

namespace {
long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long arrangements(std::span<const std::int8_t> sorted) {
  long denom = 1;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    denom *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return factorial(static_cast<int>(sorted.size())) / denom;
}
}  // namespace

long Monomial::multiplicity() const { return arrangements(unconj()) * arrangements(conj()); }

int Monomial::max_abs_index() const {
  int r = 0;
  for (int k = 0; k < degree(); ++k) r = std::max(r, std::abs(static_cast<int>(idx_[static_cast<std::size_t>(k)])));
  return r;
}

std::string Monomial::to_string() const {
  std::ostringstream os;
  os << "v(";
  for (std::size_t k = 0; k < unconj().size(); ++k) os << (k ? "," : "") << int(unconj()[k]);
  os << ") conj v(";
  for (std::size_t k = 0; k < conj().size(); ++k) os << (k ? "," : "") << int(conj()[k]);
  os << ")";
  return os.str();
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  mix(n_unconj_);
  mix(n_conj_);
  for (int k = 0; k < degree(); ++k) mix(static_cast<std::uint8_t>(idx_[static_cast<std::size_t>(k)]));
  return static_cast<std::size_t>(h);
}

namespace {
struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};
using Accumulator = std::unordered_map<Monomial, GaussianRational, MonomialHash>;

std::vector<Term> drain(Accumulator& acc) {
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (!c.is_zero()) out.push_back({m, std::move(c)});
  }
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  return out;
}
}  // namespace

// ---- PolyHamiltonian --------------------------------------------------------

PolyHamiltonian::PolyHamiltonian(int truncation, std::vector<Term> terms) : truncation_(truncation) {
  if (truncation < 0 || truncation > kMaxTruncation) throw HambraError("PolyHamiltonian: truncation out of range");
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  for (auto& t : terms) {
    if (t.monomial.momentum() != 0) {
      throw HambraError("PolyHamiltonian: monomial " + t.monomial.to_string() + " has nonzero momentum");
    }
    if (t.monomial.max_abs_index() > truncation) {
      throw HambraError("PolyHamiltonian: monomial " + t.monomial.to_string() + " exceeds truncation");
    }
    if (!terms_.empty() && terms_.back().monomial == t.monomial) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coeff.is_zero(); });
}

int PolyHamiltonian::max_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

GaussianRational PolyHamiltonian::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.monomial < key; });
  if (it != terms_.end() && it->monomial == m) return it->coeff;
  return {};
}

PolyHamiltonian PolyHamiltonian::operator+(const PolyHamiltonian& o) const {
  if (o.truncation_ != truncation_) throw HambraError("PolyHamiltonian: truncation mismatch");
  std::vector<Term> all(terms_.begin(), terms_.end());
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return PolyHamiltonian(truncation_, std::move(all));
}

PolyHamiltonian PolyHamiltonian::operator-(const PolyHamiltonian& o) const {
  return *this + o.scaled(GaussianRational(-1));
}

PolyHamiltonian PolyHamiltonian::scaled(const GaussianRational& c) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.monomial, t.coeff * c});
  return PolyHamiltonian(truncation_, std::move(out));
}

PolyHamiltonian PolyHamiltonian::with_coefficient(const Monomial& m, const GaussianRational& c) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (!(t.monomial == m)) out.push_back(t);
  }
  out.push_back({m, c});
  return PolyHamiltonian(truncation_, std::move(out));
}

mpq_class PolyHamiltonian::max_coefficient_norm() const {
  mpq_class best = 0;
  for (const auto& t : terms_) {
    mpq_class n = t.coeff.norm();
    if (n > best) best = n;
  }
  return best;
}

bool PolyHamiltonian::is_anti_hermitian() const {
  for (const auto& t : terms_) {
    if (!(coefficient(t.monomial.conjugate()) == -t.coeff.conj())) return false;
  }
  return true;
}

bool operator==(const PolyHamiltonian& a, const PolyHamiltonian& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (!(a.terms_[k].monomial == b.terms_[k].monomial) || !(a.terms_[k].coeff == b.terms_[k].coeff)) return false;
  }
  return true;
}

// ---- Standard pieces --------------------------------------------------------

namespace {
std::vector<int> full_lattice(int truncation) {
  std::vector<int> modes;
  for (int n = -truncation; n <= truncation; ++n) modes.push_back(n);
  return modes;
}

mpq_class integer_power(int n, int sigma) {
  mpz_class r = 1;
  for (int k = 0; k < sigma; ++k) r *= n;
  return mpq_class(r);
}
}  // namespace

PolyHamiltonian lambda2(std::span<const int> modes, int truncation, int sigma) {
  if (sigma != 2 && sigma != 4) throw HambraError("lambda2: dispersion exponent must be 2 or 4");
  std::vector<Term> terms;
  for (int n : modes) {
    const int one[] = {n};
    terms.push_back({Monomial(one, one), GaussianRational(0, -integer_power(n, sigma))});
  }
  return PolyHamiltonian(truncation, std::move(terms));
}

PolyHamiltonian lambda2(int truncation, int sigma) {
  const auto modes = full_lattice(truncation);
  return lambda2(modes, truncation, sigma);
}

PolyHamiltonian quartic(std::span<const int> modes, int truncation) {
  std::vector<Term> terms;
  for (int m1 : modes) {
    for (int m2 : modes) {
      for (int m3 : modes) {
        const int m4 = m1 + m2 - m3;
        if (std::find(modes.begin(), modes.end(), m4) == modes.end()) continue;
        const int u[] = {m1, m2};
        const int c[] = {m3, m4};
        terms.push_back({Monomial(u, c), GaussianRational::i_unit()});
      }
    }
  }
  return PolyHamiltonian(truncation, std::move(terms));
}

PolyHamiltonian quartic(int truncation) {
  const auto modes = full_lattice(truncation);
  return quartic(modes, truncation);
}

PolyHamiltonian mass(int truncation) {
  std::vector<Term> terms;
  for (int n = -truncation; n <= truncation; ++n) {
    const int one[] = {n};
    terms.push_back({Monomial(one, one), GaussianRational(1)});
  }
  return PolyHamiltonian(truncation, std::move(terms));
}

// ---- Bracket ----------------------------------------------------------------

namespace {

struct Occurrence {
  std::size_t term;
  int multiplicity;
};

// occurrences[n + N] lists the terms containing index n, with multiplicity.
std::vector<std::vector<Occurrence>> index_occurrences(const PolyHamiltonian& p, bool conjugated) {
  const int big_n = p.truncation();
  std::vector<std::vector<Occurrence>> occ(static_cast<std::size_t>(2 * big_n + 1));
  for (std::size_t t = 0; t < p.terms().size(); ++t) {
    const auto idx = conjugated ? p.terms()[t].monomial.conj() : p.terms()[t].monomial.unconj();
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j < idx.size() && idx[j] == idx[i]) ++j;
      occ[static_cast<std::size_t>(idx[i] + big_n)].push_back({t, static_cast<int>(j - i)});
      i = j;
    }
  }
  return occ;
}

// Writes sorted(a without one copy of `drop`) merged with sorted(b) into out.
std::size_t merge_dropping(std::span<const std::int8_t> a, std::int8_t drop, std::span<const std::int8_t> b,
                           std::int8_t* out) {
  std::array<std::int8_t, Monomial::kMaxFactors> tmp{};
  std::size_t na = 0;
  bool dropped = false;
  for (auto x : a) {
    if (!dropped && x == drop) {
      dropped = true;
      continue;
    }
    tmp[na++] = x;
  }
  std::merge(tmp.begin(), tmp.begin() + static_cast<long>(na), b.begin(), b.end(), out);
  return na + b.size();
}

void accumulate_products(const PolyHamiltonian& a, const PolyHamiltonian& b, bool a_unconj_side,
                         const std::vector<std::vector<Occurrence>>& b_occ, const GaussianRational& sign,
                         Accumulator& acc) {
  const int big_n = b.truncation();
  for (const auto& ta : a.terms()) {
    const auto a_side = a_unconj_side ? ta.monomial.unconj() : ta.monomial.conj();
    std::size_t i = 0;
    while (i < a_side.size()) {
      std::size_t j = i;
      while (j < a_side.size() && a_side[j] == a_side[i]) ++j;
      const std::int8_t n = a_side[i];
      const int ma = static_cast<int>(j - i);
      i = j;
      if (std::abs(n) > big_n) continue;
      for (const auto& ob : b_occ[static_cast<std::size_t>(n + big_n)]) {
        const auto& tb = b.terms()[ob.term];
        if (ta.monomial.degree() + tb.monomial.degree() - 2 > Monomial::kMaxFactors) {
          throw HambraError("poisson_bracket: product degree exceeds capacity");
        }
        std::array<std::int8_t, Monomial::kMaxFactors> un{};
        std::array<std::int8_t, Monomial::kMaxFactors> cj{};
        std::size_t nu = 0;
        std::size_t nc = 0;
        if (a_unconj_side) {
          // dA/dv(n) * dB/dconj(v(n))
          nu = merge_dropping(ta.monomial.unconj(), n, tb.monomial.unconj(), un.data());
          nc = merge_dropping(tb.monomial.conj(), n, ta.monomial.conj(), cj.data());
        } else {
          // dA/dconj(v(n)) * dB/dv(n)
          nu = merge_dropping(tb.monomial.unconj(), n, ta.monomial.unconj(), un.data());
          nc = merge_dropping(ta.monomial.conj(), n, tb.monomial.conj(), cj.data());
        }
        const auto key = Monomial::from_sorted({un.data(), nu}, {cj.data(), nc});
        GaussianRational c = ta.coeff * tb.coeff;
        const int mult = ma * ob.multiplicity;
        c.re *= mult;
        c.im *= mult;
        if (sign.re < 0) {
          acc[key] -= c;
        } else {
          acc[key] += c;
        }
      }
    }
  }
}

}  // namespace

PolyHamiltonian poisson_bracket(const PolyHamiltonian& a, const PolyHamiltonian& b) {
  if (a.truncation() != b.truncation()) throw HambraError("poisson_bracket: truncation mismatch");
  Accumulator acc;
  accumulate_products(a, b, true, index_occurrences(b, true), GaussianRational(1), acc);
  accumulate_products(a, b, false, index_occurrences(b, false), GaussianRational(-1), acc);
  auto terms = drain(acc);
  for (const auto& t : terms) {
    // Balanced inputs cannot leave the lattice; guard the invariant anyway.
    if (t.monomial.max_abs_index() > a.truncation()) throw HambraError("poisson_bracket: truncation overflow");
  }
  return PolyHamiltonian(a.truncation(), std::move(terms));
}

// ---- Resonances and the homological equation -------------------------------

namespace {

// Diagonal entries c_n of lambda2 = sum c_n |v(n)|^2, indexed by n + N.
std::vector<GaussianRational> diagonal_of(const PolyHamiltonian& lambda2) {
  std::vector<GaussianRational> diag(static_cast<std::size_t>(2 * lambda2.truncation() + 1));
  for (const auto& t : lambda2.terms()) {
    const auto u = t.monomial.unconj();
    const auto c = t.monomial.conj();
    if (u.size() != 1 || c.size() != 1 || u[0] != c[0]) {
      throw HambraError("lambda2 must be diagonal quadratic, found " + t.monomial.to_string());
    }
    diag[static_cast<std::size_t>(u[0] + lambda2.truncation())] = t.coeff;
  }
  return diag;
}

GaussianRational eigenvalue(const std::vector<GaussianRational>& diag, int truncation, const Monomial& m) {
  GaussianRational lam;
  for (auto n : m.conj()) {
    if (std::abs(n) <= truncation) lam += diag[static_cast<std::size_t>(n + truncation)];
  }
  for (auto n : m.unconj()) {
    if (std::abs(n) <= truncation) lam -= diag[static_cast<std::size_t>(n + truncation)];
  }
  return lam;
}

}  // namespace

GaussianRational ad_eigenvalue(const PolyHamiltonian& lambda2, const Monomial& m) {
  return eigenvalue(diagonal_of(lambda2), lambda2.truncation(), m);
}

ResonanceSplit resonance_split(const PolyHamiltonian& h, const PolyHamiltonian& lambda2) {
  const auto diag = diagonal_of(lambda2);
  std::vector<Term> nr;
  std::vector<Term> r;
  for (const auto& t : h.terms()) {
    if (!t.monomial.is_balanced()) throw HambraError("resonance_split: unbalanced monomial " + t.monomial.to_string());
    (eigenvalue(diag, lambda2.truncation(), t.monomial).is_zero() ? r : nr).push_back(t);
  }
  return {PolyHamiltonian(h.truncation(), std::move(nr)), PolyHamiltonian(h.truncation(), std::move(r))};
}

std::pair<PolyHamiltonian, PolyHamiltonian> split_r1_r2(const PolyHamiltonian& resonant) {
  const int big_n = resonant.truncation();
  if (resonant.empty()) return {PolyHamiltonian(big_n), PolyHamiltonian(big_n)};

  std::vector<int> modes;
  GaussianRational kappa;
  bool have_cross = false;
  bool have_diag = false;
  GaussianRational diag_coeff;
  for (const auto& t : resonant.terms()) {
    const auto u = t.monomial.unconj();
    const auto c = t.monomial.conj();
    // A quartic term is resonant exactly when it has the form |v(a)|^2 |v(b)|^2.
    if (u.size() != 2 || c.size() != 2 || !std::equal(u.begin(), u.end(), c.begin())) {
      throw HambraError("split_r1_r2: input-not-resonant monomial " + t.monomial.to_string());
    }
    for (auto m : u) {
      if (std::find(modes.begin(), modes.end(), int(m)) == modes.end()) modes.push_back(m);
    }
    if (u[0] != u[1]) {
      GaussianRational k = t.coeff / GaussianRational(4);
      if (have_cross && !(k == kappa)) throw HambraError("split_r1_r2: non-uniform resonant coefficients");
      kappa = k;
      have_cross = true;
    } else {
      if (!have_diag) diag_coeff = t.coeff;
      have_diag = true;
    }
  }
  if (!have_cross) {
    for (const auto& t : resonant.terms()) {
      if (!(t.coeff == diag_coeff)) throw HambraError("split_r1_r2: non-uniform resonant coefficients");
    }
    kappa = diag_coeff;
  }
  std::sort(modes.begin(), modes.end());

  // r2 = 2 kappa sum_{m1, m2} |v(m1)|^2 |v(m2)|^2
  std::vector<Term> r2;
  const GaussianRational two_kappa = kappa * GaussianRational(2);
  for (int a : modes) {
    for (int b : modes) {
      const int pair[] = {a, b};
      r2.push_back({Monomial(pair, pair), two_kappa});
    }
  }
  PolyHamiltonian r2_poly(big_n, std::move(r2));
  return {resonant - r2_poly, r2_poly};
}

PolyHamiltonian solve_homological(const PolyHamiltonian& lambda2, const PolyHamiltonian& source) {
  const auto diag = diagonal_of(lambda2);
  std::vector<Term> out;
  out.reserve(source.size());
  std::vector<std::string> offenders;
  for (const auto& t : source.terms()) {
    const auto lam = eigenvalue(diag, lambda2.truncation(), t.monomial);
    if (lam.is_zero()) {
      offenders.push_back(t.monomial.to_string());
      continue;
    }
    out.push_back({t.monomial, -(t.coeff / lam)});
  }
  if (!offenders.empty()) {
    std::string msg = "solve_homological: resonant source monomials:";
    for (std::size_t k = 0; k < offenders.size() && k < 10; ++k) msg += " " + offenders[k];
    if (offenders.size() > 10) msg += " ... (" + std::to_string(offenders.size()) + " total)";
    throw HambraError(msg);
  }
  return PolyHamiltonian(source.truncation(), std::move(out));
}

// ---- Normal form construction ----------------------------------------------

NormalFormBuild build_F1_F2(int truncation) {
  if (truncation < 0 || truncation > 12) throw HambraError("build_F1_F2: N_sym must lie in [0, 12]");
  NormalFormBuild b;
  b.truncation = truncation;
  b.lambda2 = lambda2(truncation);
  b.h4 = quartic(truncation);
  auto split = resonance_split(b.h4, b.lambda2);
  b.h4_nr = std::move(split.nonresonant);
  b.h4_r = std::move(split.resonant);
  std::tie(b.h4_r1, b.h4_r2) = split_r1_r2(b.h4_r);
  b.f1 = solve_homological(b.lambda2, b.h4_nr);
  b.half_bracket = poisson_bracket(b.h4_nr, b.f1).scaled(GaussianRational(mpq_class(1, 2)));
  b.half_bracket_nr = resonance_split(b.half_bracket, b.lambda2).nonresonant;
  b.f2 = solve_homological(b.lambda2, b.half_bracket_nr);
  b.q = mass(truncation);
  return b;
}

std::vector<IdentityResidual> identity_suite(const NormalFormBuild& b) {
  std::vector<IdentityResidual> out;
  const GaussianRational half(mpq_class(1, 2));
  out.push_back({"H4 - (H4^nr + H4^r1 + H4^r2)", b.h4 - (b.h4_nr + b.h4_r1 + b.h4_r2)});
  out.push_back({"{Lambda2,F1} + H4^nr", poisson_bracket(b.lambda2, b.f1) + b.h4_nr});
  const auto half_nr = resonance_split(poisson_bracket(b.h4_nr, b.f1).scaled(half), b.lambda2).nonresonant;
  out.push_back({"{Lambda2,F2} + 1/2{H4^nr,F1}^nr", poisson_bracket(b.lambda2, b.f2) + half_nr});
  out.push_back({"{H4^r2,F1}", poisson_bracket(b.h4_r2, b.f1)});
  out.push_back({"{H4^r2,F2}", poisson_bracket(b.h4_r2, b.f2)});
  out.push_back({"{F1,Q}", poisson_bracket(b.f1, b.q)});
  out.push_back({"{F2,Q}", poisson_bracket(b.f2, b.q)});
  return out;
}

// ---- Floating-point evaluation ---------------------------------------------

CompiledPolynomial::CompiledPolynomial(const PolyHamiltonian& h) : truncation_(h.truncation()) {
  entries_.reserve(h.size());
  for (const auto& t : h.terms()) {
    Entry e;
    e.coeff = t.coeff.to_complex();
    for (auto m : t.monomial.unconj()) e.unconj.push_back(m);
    for (auto m : t.monomial.conj()) e.conj.push_back(m);
    entries_.push_back(std::move(e));
  }
}

Complex CompiledPolynomial::evaluate(const FourierState& state) const {
  Complex sum{};
  for (const auto& e : entries_) {
    Complex p = e.coeff;
    for (int m : e.unconj) p *= state[m];
    for (int m : e.conj) p *= std::conj(state[m]);
    sum += p;
  }
  return sum;
}

FourierState CompiledPolynomial::gradient(const FourierState& state) const {
  if (state.truncation() < truncation_) throw HambraError("gradient_eval: state truncation below N_sym");
  const int big_n = state.truncation();
  std::vector<Complex> g(state.size());
  for (const auto& e : entries_) {
    // product rule over the conjugated factors
    for (std::size_t k = 0; k < e.conj.size(); ++k) {
      if (k > 0 && e.conj[k] == e.conj[k - 1]) continue;
      int mult = 0;
      for (int m : e.conj) mult += (m == e.conj[k]);
      Complex p = e.coeff * static_cast<double>(mult);
      for (int m : e.unconj) p *= state[m];
      bool skipped = false;
      for (int m : e.conj) {
        if (!skipped && m == e.conj[k]) {
          skipped = true;
          continue;
        }
        p *= std::conj(state[m]);
      }
      g[static_cast<std::size_t>(e.conj[k] + big_n)] += p;
    }
  }
  return FourierState(big_n, std::move(g), state.convention());
}

FourierState gradient_eval(const PolyHamiltonian& h, const FourierState& state) {
  return CompiledPolynomial(h).gradient(state);
}

Complex evaluate(const PolyHamiltonian& h, const FourierState& state) {
  return CompiledPolynomial(h).evaluate(state);
}

}  // namespace qlnls::hambra
