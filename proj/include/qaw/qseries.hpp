#pragma once

// Terminating basic hypergeometric series r_phi_s and very-well-poised
// r+1_W_r, plus the inversion and q <-> 1/q transformations acting on series
// specifications.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qaw/qpochhammer.hpp"

namespace qaw {

/// Relative condition of the factor 1 - x, i.e. |x| / |1 - x|.
template <Scalar S>
double factor_condition(const S& x) {
  if constexpr (scalar_traits<S>::exact) return 0.0;
  const double den = magnitude(S(S(1) - x));
  return den == 0.0 ? std::numeric_limits<double>::infinity() : magnitude(x) / den;
}

/// Sum over k < n of |a q^k| / |1 - a q^k|: the relative error amplification
/// of (a;q)_n in floating point.
template <Scalar S>
double poch_condition(const S& a, const QBase<S>& q, int n) {
  double total = 0.0;
  S term = a;
  for (int k = 0; k < n; ++k) {
    total += factor_condition(term);
    term = term * q.value();
  }
  return total;
}

template <Scalar S>
struct TermTrace {
  std::vector<S> terms;
  std::vector<S> partial_sums;
  /// Sum of |term_k|: the cancellation scale.
  double abs_scale = 0.0;
  /// Sum of |term_k| weighted by the accumulated factor condition of each
  /// term; eps * error_scale estimates the float rounding error.
  double error_scale = 0.0;
};

template <Scalar S>
struct SeriesValue {
  S value;
  TermTrace<S> trace;
};

/// Input to a terminating r_phi_s: numerators exclude the q^{-n} slot, so
/// r = 1 + num.size() and s = den.size().
template <Scalar S>
struct SeriesSpec {
  std::vector<S> num;
  std::vector<S> den;
  int n;
  S z;
  QBase<S> q;

  SeriesSpec(std::vector<S> numerators, std::vector<S> denominators, int degree, S argument,
             QBase<S> base, EvalOptions opts = {})
      : num(std::move(numerators)),
        den(std::move(denominators)),
        n(degree),
        z(std::move(argument)),
        q(std::move(base)) {
    require_index(n);
    for (std::size_t j = 0; j < den.size(); ++j)
      if (in_omega(den[j], q, n, opts.pole_eps))
        throw Error(Errc::DenominatorPole,
                    "denominator parameter b" + std::to_string(j + 1) + " lies in Omega_q^n");
  }

  int r() const { return 1 + static_cast<int>(num.size()); }
  int s() const { return static_cast<int>(den.size()); }
  /// Exponent of ((-1)^k q^binom(k,2)) in each term.
  int sign_exponent() const { return 1 + s() - r(); }
};

namespace detail {

template <Scalar S>
void push_term(TermTrace<S>& trace, const S& term, double cond) {
  trace.partial_sums.push_back(trace.partial_sums.empty() ? term : trace.partial_sums.back() + term);
  trace.terms.push_back(term);
  if constexpr (scalar_traits<S>::exact) return;
  const double m = magnitude(term);
  trace.abs_scale += m;
  // An exactly vanishing factor has infinite condition but a zero term.
  if (m > 0.0) trace.error_scale += m * (1.0 + cond);
}

}  // namespace detail

/// Sum over k = 0..n by the term-ratio recurrence.
template <Scalar S>
SeriesValue<S> eval_phi(const SeriesSpec<S>& spec, EvalOptions opts = {}) {
  const S& q = spec.q.value();
  const int e = spec.sign_exponent();
  TermTrace<S> trace;
  trace.terms.reserve(spec.n + 1);
  S term(1);
  double cond = 0.0;
  detail::push_term(trace, term, cond);
  S qk(1);                   // q^k
  S top = spec.q.pow(-spec.n);  // q^{-n} q^k
  for (int k = 0; k < spec.n; ++k) {
    S ratio = (S(1) - top) * spec.z;
    cond += factor_condition(top);
    for (const auto& a : spec.num) {
      const S x = a * qk;
      ratio = ratio * (S(1) - x);
      cond += factor_condition(x);
    }
    S below = S(1) - qk * q;
    cond += factor_condition(S(qk * q));
    for (std::size_t j = 0; j < spec.den.size(); ++j) {
      const S x = spec.den[j] * qk;
      const S f = S(1) - x;
      if (factor_vanishes(f, x, opts.pole_eps))
        throw Error(Errc::DenominatorPole,
                    "denominator parameter b" + std::to_string(j + 1) + " hits Omega_q^n");
      below = below * f;
      cond += factor_condition(x);
    }
    if (e != 0) ratio = ratio * pow_int(S(-qk), e);
    term = term * ratio / below;
    cond += 2.0;
    detail::push_term(trace, term, cond);
    qk = qk * q;
    top = top * q;
  }
  S value = trace.partial_sums.back();
  return {std::move(value), std::move(trace)};
}

/// Terminating r+1_W_r(b; q^{-n}, lower...; q, z). The pair
/// (+-q sqrt b; q)_k / (+-sqrt b; q)_k is evaluated as (1 - b q^{2k}) / (1 - b).
template <Scalar S>
struct VwpSpec {
  S b;
  std::vector<S> lower;
  int n;
  S z;
  QBase<S> q;

  VwpSpec(S special, std::vector<S> lower_params, int degree, S argument, QBase<S> base,
          EvalOptions opts = {})
      : b(std::move(special)),
        lower(std::move(lower_params)),
        n(degree),
        z(std::move(argument)),
        q(std::move(base)) {
    require_index(n);
    if (is_zero(b)) throw Error(Errc::ZeroParameter, "special parameter b must be nonzero");
    if (factor_vanishes(S(S(1) - b), b, opts.pole_eps))
      throw Error(Errc::BEqualsOne, "b = 1 makes the very-well-poised factor singular");
    if (in_omega(S(q.pow(n + 1) * b), q, n, opts.pole_eps))
      throw Error(Errc::DenominatorPole, "q^{n+1} b lies in Omega_q^n");
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (is_zero(lower[k]))
        throw Error(Errc::ZeroParameter, "lower parameter " + std::to_string(k + 1) + " is zero");
      if (in_omega(S(q.value() * b / lower[k]), q, n, opts.pole_eps))
        throw Error(Errc::DenominatorPole,
                    "qb/a for lower parameter " + std::to_string(k + 1) + " lies in Omega_q^n");
    }
  }

  /// r in r+1_W_r.
  int r() const { return static_cast<int>(lower.size()) + 3; }
};

template <Scalar S>
SeriesValue<S> eval_w(const VwpSpec<S>& spec, EvalOptions opts = {}) {
  const S& q = spec.q.value();
  const S& b = spec.b;
  std::vector<S> paired;
  paired.reserve(spec.lower.size());
  for (const auto& a : spec.lower) paired.push_back(q * b / a);
  const S one_minus_b = S(1) - b;
  const double b_cond = factor_condition(b);

  TermTrace<S> trace;
  trace.terms.reserve(spec.n + 1);
  S base_term(1);  // everything but the very-well-poised factor
  double cond = 0.0;
  detail::push_term(trace, base_term, cond);
  S qk(1);
  S top = spec.q.pow(-spec.n);
  S shifted = spec.q.pow(spec.n + 1) * b;
  S q2k(1);  // q^{2k}
  for (int k = 0; k < spec.n; ++k) {
    S above = (S(1) - top) * (S(1) - b * qk) * spec.z;
    cond += factor_condition(top) + factor_condition(S(b * qk));
    S below = (S(1) - qk * q);
    cond += factor_condition(S(qk * q));
    {
      const S f = S(1) - shifted;
      if (factor_vanishes(f, shifted, opts.pole_eps))
        throw Error(Errc::DenominatorPole, "q^{n+1} b hits Omega_q^n");
      below = below * f;
      cond += factor_condition(shifted);
    }
    for (std::size_t j = 0; j < spec.lower.size(); ++j) {
      const S x = spec.lower[j] * qk;
      above = above * (S(1) - x);
      cond += factor_condition(x);
      const S y = paired[j] * qk;
      const S f = S(1) - y;
      if (factor_vanishes(f, y, opts.pole_eps))
        throw Error(Errc::DenominatorPole,
                    "qb/a for lower parameter " + std::to_string(j + 1) + " hits Omega_q^n");
      below = below * f;
      cond += factor_condition(y);
    }
    base_term = base_term * above / below;
    cond += 2.0;
    qk = qk * q;
    top = top * q;
    q2k = q2k * q * q;
    shifted = shifted * q;
    const S vwp = (S(1) - b * q2k) / one_minus_b;
    const double term_cond = cond + b_cond + factor_condition(S(b * q2k));
    detail::push_term(trace, S(base_term * vwp), term_cond);
  }
  S value = trace.partial_sums.back();
  return {std::move(value), std::move(trace)};
}

template <Scalar S>
S product_of(const std::vector<S>& xs) {
  S p(1);
  for (const auto& x : xs) p = p * x;
  return p;
}

template <Scalar S>
struct SeriesInversion {
  S prefactor;
  SeriesSpec<S> spec;
};

/// Reverses the order of summation of an r+1_phi_r:
/// phi(spec) = prefactor * phi(reversed spec), with prefactor
/// (-1)^n q^{-binom(n,2)} (z/q)^n (a;q)_n / (b;q)_n.
template <Scalar S>
SeriesInversion<S> invert_series(const SeriesSpec<S>& spec, EvalOptions opts = {}) {
  if (spec.num.size() != spec.den.size())
    throw Error(Errc::ShapeMismatch, "series inversion needs an r+1_phi_r (equal parameter counts)");
  const auto& q = spec.q;
  const int n = spec.n;
  if (is_zero(spec.z)) throw Error(Errc::ZeroParameter, "argument z must be nonzero");
  for (const auto& a : spec.num) {
    if (is_zero(a)) throw Error(Errc::ZeroParameter, "numerator parameter is zero");
    if (in_omega(a, q, n, opts.pole_eps))
      throw Error(Errc::DenominatorPole, "numerator parameter lies in Omega_q^n");
  }
  for (const auto& b : spec.den)
    if (is_zero(b)) throw Error(Errc::ZeroParameter, "denominator parameter is zero");

  const S shift = q.pow(1 - n);
  std::vector<S> num2, den2;
  for (const auto& b : spec.den) num2.push_back(shift / b);
  for (const auto& a : spec.num) den2.push_back(shift / a);
  const S z2 = q.pow(n + 1) / spec.z * product_of(spec.den) / product_of(spec.num);

  S pre = pow_int(S(-spec.z / q.value()), n) * q.pow(-binom2(n));
  pre = pre * poch_list(std::span<const S>(spec.num), q, n) / poch_list(std::span<const S>(spec.den), q, n);
  return {std::move(pre), SeriesSpec<S>(std::move(num2), std::move(den2), n, z2, q, opts)};
}

template <Scalar S>
struct VwpInversion {
  S prefactor;
  VwpSpec<S> spec;
};

/// Inversion of a terminating r+1_W_r: new special parameter q^{-2n}/b,
/// lower parameters q^{-n} a_k / b and argument
/// q^{2n+r-3} b^{r-3} / ((prod a_k)^2 z).
template <Scalar S>
VwpInversion<S> invert_w(const VwpSpec<S>& spec, EvalOptions opts = {}) {
  const auto& q = spec.q;
  const int n = spec.n;
  const S& b = spec.b;
  if (is_zero(spec.z)) throw Error(Errc::ZeroParameter, "argument z must be nonzero");
  const auto m = static_cast<std::int64_t>(spec.lower.size());

  std::vector<S> lower2;
  for (const auto& a : spec.lower) lower2.push_back(q.pow(-n) * a / b);
  const S prod = product_of(spec.lower);
  const S z2 = q.pow(2 * n + m) * pow_int(b, m) / (prod * prod * spec.z);

  S upper_poch = poch(b, q, n) * poch_list(std::span<const S>(spec.lower), q, n);
  S lower_poch = poch(S(q.pow(n + 1) * b), q, n);
  for (const auto& a : spec.lower) lower_poch = lower_poch * poch(S(q.value() * b / a), q, n);
  const S vwp = (S(1) - b * q.pow(2 * n)) / (S(1) - b);
  S pre = q.pow(-binom2(n)) * pow_int(S(-spec.z / q.value()), n) * vwp * upper_poch / lower_poch;
  return {std::move(pre), VwpSpec<S>(q.pow(-2 * n) / b, std::move(lower2), n, z2, q, opts)};
}

template <Scalar S>
struct WatsonForm {
  S prefactor;
  VwpSpec<S> w;
};

/// Balanced 4_phi_3(q^{-n}, a, b, c; d, e, f; q, q) with q^{1-n} abc = def
/// equals prefactor * 8_W_7(de/(qa); q^{-n}, d/a, e/a, b, c; q, qa/f), where
/// prefactor = (de/ab, de/ac; q)_n / (de/a, de/abc; q)_n.
template <Scalar S>
WatsonForm<S> watson_whipple(const SeriesSpec<S>& phi, Tolerance tol = {}, EvalOptions opts = {}) {
  if (phi.num.size() != 3 || phi.den.size() != 3)
    throw Error(Errc::ShapeMismatch, "Watson's transformation needs a 4_phi_3");
  const auto& q = phi.q;
  const int n = phi.n;
  const S& a = phi.num[0];
  const S& b = phi.num[1];
  const S& c = phi.num[2];
  const S& d = phi.den[0];
  const S& e = phi.den[1];
  const S& f = phi.den[2];
  if (!approx_eq(phi.z, q.value(), magnitude(q.value()), tol))
    throw Error(Errc::ShapeMismatch, "Watson's transformation needs argument z = q");
  const S lhs = q.pow(1 - n) * a * b * c;
  const S rhs = d * e * f;
  if (!approx_eq(lhs, rhs, magnitude(rhs), tol))
    throw Error(Errc::NotBalanced, "4_phi_3 is not balanced: q^{1-n} abc != def");
  for (const S* x : {&a, &b, &c, &f})
    if (is_zero(*x)) throw Error(Errc::ZeroParameter, "Watson's transformation needs a, b, c, f != 0");

  const S de = d * e;
  S pre = poch(S(de / (a * b)), q, n) * poch(S(de / (a * c)), q, n);
  const S den = poch(S(de / a), q, n) * poch(S(de / (a * b * c)), q, n);
  if (is_zero(den)) throw Error(Errc::DenominatorPole, "(de/a, de/abc; q)_n vanishes");
  pre = pre / den;
  VwpSpec<S> w(de / (q.value() * a), {d / a, e / a, b, c}, n, q.value() * a / f, q, opts);
  return {std::move(pre), std::move(w)};
}

template <Scalar S>
struct QConnection {
  /// r+1_phi_r(q^n, 1/a; 1/b; 1/q, (prod a / prod b) z / q^{n+1}); the q^n
  /// slot is implicit because the base is 1/q.
  SeriesSpec<S> on_inverse_base;
  S reversed_prefactor;
  SeriesSpec<S> reversed;
};

/// Both right-hand forms of the q <-> 1/q connecting relation.
template <Scalar S>
QConnection<S> connect_qinv(const SeriesSpec<S>& spec, EvalOptions opts = {}) {
  if (spec.num.size() != spec.den.size())
    throw Error(Errc::ShapeMismatch, "connecting relation needs an r+1_phi_r");
  for (const auto& x : spec.num)
    if (is_zero(x)) throw Error(Errc::ZeroParameter, "numerator parameter is zero");
  for (const auto& x : spec.den)
    if (is_zero(x)) throw Error(Errc::ZeroParameter, "denominator parameter is zero");
  const auto& q = spec.q;
  std::vector<S> num1, den1;
  for (const auto& a : spec.num) num1.push_back(inverse(a));
  for (const auto& b : spec.den) den1.push_back(inverse(b));
  const S z1 = product_of(spec.num) / product_of(spec.den) * spec.z * q.pow(-(spec.n + 1));
  SeriesSpec<S> first(std::move(num1), std::move(den1), spec.n, z1, q.inverted(), opts);
  auto inv = invert_series(spec, opts);
  return {std::move(first), std::move(inv.prefactor), std::move(inv.spec)};
}

/// Pointwise form of the q -> 1/q recipe: given a series meant on base p,
/// returns the equal series on base 1/p with reciprocal parameters and
/// argument p^{-(n+1)} (prod a) z / (prod b).
template <Scalar S>
SeriesSpec<S> qinvert_spec(const SeriesSpec<S>& spec, EvalOptions opts = {}) {
  std::vector<S> num, den;
  for (const auto& a : spec.num) {
    if (is_zero(a)) throw Error(Errc::ZeroParameter, "numerator parameter is zero");
    num.push_back(inverse(a));
  }
  for (const auto& b : spec.den) {
    if (is_zero(b)) throw Error(Errc::ZeroParameter, "denominator parameter is zero");
    den.push_back(inverse(b));
  }
  const auto& p = spec.q;
  const S z = p.pow(-(spec.n + 1)) * product_of(spec.num) * spec.z / product_of(spec.den);
  return SeriesSpec<S>(std::move(num), std::move(den), spec.n, z, p.inverted(), opts);
}

/// A q-dependent terminating representation
/// f(q) = g(q) * r+1_phi_r(q^{-n}, a(q); b(q); q, z(q)).
template <Scalar S>
struct QFamily {
  int n = 0;
  std::function<S(const QBase<S>&)> multiplier;
  std::function<std::vector<S>(const QBase<S>&)> num;
  std::function<std::vector<S>(const QBase<S>&)> den;
  std::function<S(const QBase<S>&)> z;

  SeriesSpec<S> spec_at(const QBase<S>& q, EvalOptions opts = {}) const {
    return SeriesSpec<S>(num(q), den(q), n, z(q), q, opts);
  }
  S value(const QBase<S>& q, EvalOptions opts = {}) const {
    return multiplier(q) * eval_phi(spec_at(q, opts), opts).value;
  }
};

/// f -> f~ with f~(q) = f(1/q), written as a base-q series: reciprocal
/// parameter lists evaluated at 1/q and argument
/// q^{n+1} a_1(1/q)...a_r(1/q) z(1/q) / (b_1(1/q)...b_r(1/q)).
template <Scalar S>
QFamily<S> qinvert_f(const QFamily<S>& f) {
  QFamily<S> g;
  g.n = f.n;
  g.multiplier = [f](const QBase<S>& q) { return f.multiplier(q.inverted()); };
  g.num = [f](const QBase<S>& q) {
    std::vector<S> out;
    for (const auto& a : f.num(q.inverted())) out.push_back(inverse(a));
    return out;
  };
  g.den = [f](const QBase<S>& q) {
    std::vector<S> out;
    for (const auto& b : f.den(q.inverted())) out.push_back(inverse(b));
    return out;
  };
  g.z = [f](const QBase<S>& q) {
    const auto p = q.inverted();
    return q.pow(f.n + 1) * product_of(f.num(p)) * f.z(p) / product_of(f.den(p));
  };
  return g;
}

}  // namespace qaw
