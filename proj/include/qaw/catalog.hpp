#pragma once

// The identity catalog: each record equates two sides, each side a
// prefactor times a terminating 4phi3 or 8W7, over the slots (b, c, d, e, f)
// with base q and degree n. Every parameter is a signed monomial in the
// slots and q, so records are plain data; evaluation, guards and the typo
// search all operate on that data.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qaw/askey_wilson.hpp"

namespace qaw {

inline constexpr std::array<char, 5> slot_names = {'b', 'c', 'd', 'e', 'f'};

/// sign * q^{q0 + qn*n} * b^e0 c^e1 d^e2 e^e3 f^e4.
struct Mono {
  int sign = 1;
  int q0 = 0;
  int qn = 0;
  std::array<int, 5> e{};

  /// Space-separated factors with an optional single '/', e.g.
  /// "q^(n+2) b^2 / c d e f", "-q b / c", "q^(1-n) / e", "1".
  static Mono parse(std::string_view text);
  /// Compact form such as "q^(n+2)b^2/(cdef)".
  std::string to_string() const;

  Mono operator*(const Mono& o) const;
  Mono inverse() const;
  Mono pow(int k) const;
  /// Replaces every slot by the corresponding monomial.
  Mono substitute(const std::array<Mono, 5>& map) const;
  bool operator==(const Mono&) const = default;

  template <Scalar S>
  S eval(const std::array<S, 5>& x, const QBase<S>& q, int n) const {
    S out = q.pow(static_cast<std::int64_t>(q0) + static_cast<std::int64_t>(qn) * n);
    for (std::size_t k = 0; k < 5; ++k)
      if (e[k] != 0) out = out * pow_int(x[k], e[k]);
    return sign < 0 ? S(-out) : out;
  }
};

/// (base; q)_{index_mult * n}.
struct PochFactor {
  Mono base;
  int index_mult = 1;

  PochFactor(Mono m, int mult = 1) : base(std::move(m)), index_mult(mult) {}  // NOLINT
  PochFactor(const char* text) : base(Mono::parse(text)) {}                   // NOLINT
  std::string to_string() const;
  bool operator==(const PochFactor&) const = default;
};

/// q^{qbinom * binom(n,2)} * power^n * prod(num) / prod(den).
struct PrefactorForm {
  int qbinom = 0;
  std::optional<Mono> power;
  std::vector<PochFactor> num;
  std::vector<PochFactor> den;

  std::string to_string() const;
  bool operator==(const PrefactorForm&) const = default;
};

struct SeriesForm {
  enum class Kind { Phi, Vwp };
  Kind kind = Kind::Phi;
  std::vector<Mono> num;  // Phi: numerators after q^{-n}
  std::vector<Mono> den;  // Phi: denominators
  Mono b;                 // Vwp: special parameter
  std::vector<Mono> lower;  // Vwp: parameters after q^{-n}
  Mono z;

  std::string to_string() const;
  bool operator==(const SeriesForm&) const = default;
};

struct Side {
  PrefactorForm pre;
  SeriesForm series;

  std::string to_string() const;
  Side substitute(const std::array<Mono, 5>& map) const;
  bool operator==(const Side&) const = default;
};

enum class RecordStatus { Active, Quarantined };
std::string_view status_name(RecordStatus s) noexcept;

struct Correction {
  std::string description;
  Side rhs;
};

struct IdentityRecord {
  std::string id;
  std::string ref;
  std::string family;
  /// Human-readable constraint summary (couplings and pole exclusions).
  std::string constraints;
  Side lhs;
  Side rhs;
  /// Every phi side (at least one) is a 4phi3 with argument q; the
  /// series is balanced on admissible draws.
  bool balanced = false;
  RecordStatus status = RecordStatus::Active;
  std::optional<Correction> correction;

  const Side& effective_rhs() const { return correction ? correction->rhs : rhs; }
};

/// The records exactly as printed, before the audit.
std::vector<IdentityRecord> printed_catalog();
/// The audited catalog (immutable, built once).
const std::vector<IdentityRecord>& catalog();
const IdentityRecord* find_record(std::string_view id);
/// Shell-style match with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view text);

template <Scalar S>
struct Draw {
  std::array<S, 5> x;  // b, c, d, e, f
  QBase<S> q;
  int n;
};

enum class Verdict { Pass, Fail, Inconclusive, Skipped };
std::string_view verdict_name(Verdict v) noexcept;

struct CheckOutcome {
  Verdict verdict = Verdict::Skipped;
  /// |lhs - rhs|; exact_zero marks bit-exact equality.
  double deviation = 0.0;
  bool exact_zero = false;
  /// Tolerance scale used for the comparison (float).
  double scale = 0.0;
  /// error_scale / |value|, the larger of both sides (float).
  double condition = 0.0;
  /// Violated guard for SKIPPED.
  std::string guard;
};

struct CheckConfig {
  EvalOptions eval;
  Tolerance tol;
  double cond_cap = 1e8;
};

enum class Variant { Effective, Printed };

/// Prefactor times series with a float error scale.
template <Scalar S>
RepValue<S> eval_side(const Side& side, const Draw<S>& d, EvalOptions opts = {}) {
  const int n = d.n;
  const auto& q = d.q;
  auto ev = [&](const Mono& m) { return m.eval(d.x, q, n); };
  detail::Prefactor<S> pre(q, opts.pole_eps);
  if (side.pre.qbinom != 0) pre.mul(q.pow(static_cast<std::int64_t>(side.pre.qbinom) * binom2(n)));
  if (side.pre.power) pre.mul(pow_int(ev(*side.pre.power), n));
  for (const auto& f : side.pre.num) pre.up(ev(f.base), f.index_mult * n);
  for (const auto& f : side.pre.den) pre.down(ev(f.base), f.index_mult * n, f.base.to_string());

  const auto& s = side.series;
  auto evl = [&](const std::vector<Mono>& ms) {
    std::vector<S> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.push_back(ev(m));
    return out;
  };
  if (s.kind == SeriesForm::Kind::Phi) {
    SeriesSpec<S> spec(evl(s.num), evl(s.den), n, ev(s.z), q, opts);
    return detail::combine(pre, eval_phi(spec, opts));
  }
  VwpSpec<S> spec(ev(s.b), evl(s.lower), n, ev(s.z), q, opts);
  return detail::combine(pre, eval_w(spec, opts));
}

/// Pole guards of one side without evaluating it: the violated exclusion,
/// or nothing when the side is admissible.
template <Scalar S>
std::optional<std::string> side_guard(const Side& side, const Draw<S>& d, double pole_eps) {
  const int n = d.n;
  const auto& q = d.q;
  auto ev = [&](const Mono& m) { return m.eval(d.x, q, n); };
  for (const auto& f : side.pre.den)
    if (in_omega(ev(f.base), q, f.index_mult * n, pole_eps)) return f.base.to_string() + " in Omega_q^n";
  const auto& s = side.series;
  if (s.kind == SeriesForm::Kind::Phi) {
    for (const auto& m : s.den)
      if (in_omega(ev(m), q, n, pole_eps)) return m.to_string() + " in Omega_q^n";
    return std::nullopt;
  }
  const S b = ev(s.b);
  if (factor_vanishes(S(S(1) - b), b, pole_eps)) return s.b.to_string() + " = 1";
  if (in_omega(S(q.pow(n + 1) * b), q, n, pole_eps)) return "q^(n+1) " + s.b.to_string() + " in Omega_q^n";
  for (const auto& a : s.lower)
    if (in_omega(S(q.value() * b / ev(a)), q, n, pole_eps))
      return "q " + s.b.to_string() + " / " + a.to_string() + " in Omega_q^n";
  return std::nullopt;
}

/// Balance bookkeeping: q * q^{-n} * prod(num) = prod(den) and z = q.
template <Scalar S>
bool side_balanced(const Side& side, const Draw<S>& d) {
  const auto& s = side.series;
  if (s.kind != SeriesForm::Kind::Phi || s.num.size() != 3 || s.den.size() != 3) return false;
  std::vector<S> num, den;
  for (const auto& m : s.num) num.push_back(m.eval(d.x, d.q, d.n));
  for (const auto& m : s.den) den.push_back(m.eval(d.x, d.q, d.n));
  const S lhs = d.q.pow(1 - d.n) * product_of(num);
  const S rhs = product_of(den);
  const S z = s.z.eval(d.x, d.q, d.n);
  return approx_eq(lhs, rhs, magnitude(rhs)) && approx_eq(z, d.q.value(), magnitude(z));
}

namespace detail {

inline bool is_guard(Errc c) {
  switch (c) {
    case Errc::PoleGuard:
    case Errc::DenominatorPole:
    case Errc::BEqualsOne:
    case Errc::ZeroParameter:
    case Errc::DivisionByZero:
    case Errc::ZeroToNegativePower:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

template <Scalar S>
CheckOutcome check_sides(const Side& lhs_side, const Side& rhs_side, const Draw<S>& d,
                         const CheckConfig& cfg = {}) {
  CheckOutcome out;
  std::optional<RepValue<S>> lhs, rhs;
  try {
    lhs = eval_side(lhs_side, d, cfg.eval);
    rhs = eval_side(rhs_side, d, cfg.eval);
  } catch (const Error& e) {
    if (!detail::is_guard(e.code())) throw;
    out.verdict = Verdict::Skipped;
    out.guard = e.what();
    return out;
  }
  const S diff = lhs->value - rhs->value;
  out.exact_zero = is_zero(diff);
  out.deviation = magnitude(diff);
  if constexpr (scalar_traits<S>::exact) {
    out.verdict = out.exact_zero ? Verdict::Pass : Verdict::Fail;
  } else {
    out.scale = std::max(lhs->error_scale, rhs->error_scale);
    out.condition = std::max(lhs->condition(), rhs->condition());
    if (approx_eq(lhs->value, rhs->value, out.scale, cfg.tol))
      out.verdict = Verdict::Pass;
    else
      out.verdict = out.condition > cfg.cond_cap ? Verdict::Inconclusive : Verdict::Fail;
  }
  return out;
}

template <Scalar S>
CheckOutcome check(const IdentityRecord& rec, const Draw<S>& d, const CheckConfig& cfg = {},
                   Variant variant = Variant::Effective) {
  const Side& rhs = variant == Variant::Printed ? rec.rhs : rec.effective_rhs();
  return check_sides(rec.lhs, rhs, d, cfg);
}

/// Systematic-failure audit of one record over fixed exact draws; on
/// failure, searches single prefactor-factor replacements drawn from the
/// given vocabulary and, when one passes every draw, attaches it.
/// Returns true when the record was quarantined.
bool audit_record(IdentityRecord& rec, const std::vector<Mono>& vocabulary);

// ---------------------------------------------------------------------------
// Deriving the cor3.3 records from the Askey-Wilson representations.

struct AwMapping {
  RepId rep;
  bool flipped = false;  // theta -> -theta
};

struct Derivation {
  std::string record_id;
  AwMapping lhs;
  AwMapping rhs;
  std::string substitution;
  std::string multiplier;
};

/// Throws NotACor33Record for ids outside the cor3.3 family.
Derivation derive_from_aw(std::string_view record_id);

template <Scalar S>
struct DerivationCheck {
  S multiplier{0};
  bool lhs_series = false;
  bool rhs_series = false;
  bool lhs_prefactor = false;
  bool rhs_prefactor = false;
  bool ok() const { return lhs_series && rhs_series && lhs_prefactor && rhs_prefactor; }
};

/// Radical-free coordinates: b = beta^2, q = kappa^2, so
/// e^{i theta} = kappa^n beta and a_1..a_4 = (c, d, e, f) / (kappa^n beta).
template <Scalar S>
AWParams<S> aw_params_for(const S& beta, const std::array<S, 4>& cdef, const QBase<S>& kappa, int n) {
  const S w = kappa.pow(n) * beta;
  std::array<S, 4> a;
  for (std::size_t k = 0; k < 4; ++k) a[k] = cdef[k] / w;
  return AWParams<S>(a, QBase<S>(kappa.value() * kappa.value(), kappa.epsilon_unit()), w, n);
}

/// A_n = q^{2 binom(n,2)} (-1)^n (qb)^{5n/2} (qb;q)_n / ((cdef)^n (qb/c, qb/d, qb/e, qb/f;q)_n).
template <Scalar S>
S aw_multiplier(const S& beta, const std::array<S, 4>& cdef, const QBase<S>& kappa, int n) {
  const QBase<S> q(kappa.value() * kappa.value(), kappa.epsilon_unit());
  const S b = beta * beta;
  const S qb = q.value() * b;
  S num = q.pow(2 * binom2(n)) * pow_int(S(-pow_int(S(kappa.value() * beta), 5)), n) * poch(qb, q, n);
  S den = pow_int(S(cdef[0] * cdef[1] * cdef[2] * cdef[3]), n);
  for (const auto& x : cdef) den = den * poch(S(qb / x), q, n);
  return divide(num, den);
}

template <Scalar S>
DerivationCheck<S> check_derivation(const Derivation& deriv, const S& beta, const std::array<S, 4>& cdef,
                                    const QBase<S>& kappa, int n, EvalOptions opts = {}) {
  const IdentityRecord* rec = find_record(deriv.record_id);
  if (rec == nullptr) throw Error(Errc::NotACor33Record, "unknown record " + deriv.record_id);
  const AWParams<S> P = aw_params_for(beta, cdef, kappa, n);
  const Draw<S> d{{beta * beta, cdef[0], cdef[1], cdef[2], cdef[3]}, P.q, n};
  DerivationCheck<S> out;
  out.multiplier = aw_multiplier(beta, cdef, kappa, n);
  auto one = [&](const AwMapping& m, const Side& side, bool& series_ok, bool& pre_ok) {
    const auto rep = eval_rep(m.flipped ? P.flipped() : P, m.rep, opts);
    const auto val = eval_side(side, d, opts);
    series_ok = rep.series.value == val.series.value;
    pre_ok = out.multiplier * rep.prefactor == val.prefactor;
    if constexpr (!scalar_traits<S>::exact) {
      series_ok = approx_eq(rep.series.value, val.series.value, val.series.trace.error_scale);
      pre_ok = approx_eq(S(out.multiplier * rep.prefactor), val.prefactor, magnitude(val.prefactor) * 1e3);
    }
  };
  one(deriv.lhs, rec->lhs, out.lhs_series, out.lhs_prefactor);
  one(deriv.rhs, rec->effective_rhs(), out.rhs_series, out.rhs_prefactor);
  return out;
}

}  // namespace qaw
