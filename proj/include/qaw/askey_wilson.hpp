#pragma once

// The seven terminating representations of the Askey-Wilson polynomials
// p_n(x; a|q), their q-inverse counterparts p_n(x; a|1/q), and the
// consistency contracts between them.
//
// The spectral variable is carried as w = e^{i theta}; e^{-i theta} := 1/w
// and x = (w + 1/w)/2.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qaw/qseries.hpp"

namespace qaw {

template <Scalar S>
struct AWParams {
  std::array<S, 4> a;
  QBase<S> q;
  S w;
  int n;

  AWParams(std::array<S, 4> params, QBase<S> base, S spectral, int degree)
      : a(std::move(params)), q(std::move(base)), w(std::move(spectral)), n(degree) {
    require_index(n);
    for (std::size_t k = 0; k < 4; ++k)
      if (is_zero(a[k]))
        throw Error(Errc::ZeroParameter, "Askey-Wilson parameter a" + std::to_string(k + 1) + " is zero");
    if (is_zero(w)) throw Error(Errc::ZeroParameter, "spectral variable w = e^{i theta} is zero");
  }

  S x() const { return (w + inverse(w)) / S(2); }
  S a1234() const { return a[0] * a[1] * a[2] * a[3]; }

  AWParams with_w(S w2) const { return AWParams(a, q, std::move(w2), n); }
  /// theta -> -theta.
  AWParams flipped() const { return with_w(inverse(w)); }
  AWParams with_q(QBase<S> q2) const { return AWParams(a, std::move(q2), w, n); }
  AWParams reciprocal_params() const {
    return AWParams({inverse(a[0]), inverse(a[1]), inverse(a[2]), inverse(a[3])}, q, w, n);
  }
  /// a'_k = a_{perm[k]} (0-based).
  AWParams permuted(const std::array<int, 4>& perm) const {
    return AWParams({a[perm[0]], a[perm[1]], a[perm[2]], a[perm[3]]}, q, w, n);
  }
};

/// Float-only constructors for the spectral variable.
inline Complex w_from_theta(double theta) { return std::polar(1.0, theta); }
/// x in [-1, 1] maps onto the upper unit semicircle; |x| > 1 to the real w
/// with |w| >= 1.
inline Complex w_from_x(double x) {
  if (x >= -1.0 && x <= 1.0) return {x, std::sqrt(1.0 - x * x)};
  const double root = std::sqrt(x * x - 1.0);
  return {x > 0 ? x + root : x - root, 0.0};
}

enum class RepTag { PhiStd, PhiInv, PhiMixed, WDef6, WDef7, WDef5, WDef4 };

inline constexpr std::array<RepTag, 7> all_rep_tags = {
    RepTag::PhiStd, RepTag::PhiInv, RepTag::PhiMixed, RepTag::WDef6,
    RepTag::WDef7,  RepTag::WDef5,  RepTag::WDef4};

std::string_view rep_tag_name(RepTag tag) noexcept;
std::optional<RepTag> rep_tag_from_name(std::string_view name) noexcept;

/// Representation selector. Roles p, r, t, u are 0-based indices into a;
/// they must be distinct (PHI_STD and PHI_INV only read p).
struct RepId {
  RepTag tag = RepTag::PhiStd;
  int p = 0;
  int r = 1;
  int t = 2;
  int u = 3;

  void validate() const;
  std::string to_string() const;
};

template <Scalar S>
struct RepValue {
  S value;
  S prefactor;
  SeriesValue<S> series;
  /// eps * error_scale estimates the float rounding error of value.
  double error_scale = 0.0;
  /// |prefactor| times the sum of |term_k|: the cancellation scale.
  double abs_scale = 0.0;

  double condition() const {
    const double m = magnitude(value);
    return m == 0.0 ? std::numeric_limits<double>::infinity() : error_scale / m;
  }
};

namespace detail {

/// Running product of scalars and q-Pochhammer symbols with a float
/// condition estimate. Denominator factors that vanish raise PoleGuard.
template <Scalar S>
class Prefactor {
 public:
  Prefactor(const QBase<S>& q, double pole_eps) : q_(q), pole_eps_(pole_eps) {}

  Prefactor& mul(const S& x) {
    value_ = value_ * x;
    cond_ += 1.0;
    return *this;
  }
  Prefactor& div(const S& x, std::string_view what) {
    if (is_zero(x)) throw Error(Errc::PoleGuard, std::string(what) + " vanishes");
    value_ = value_ / x;
    cond_ += 1.0;
    return *this;
  }
  Prefactor& up(const S& a, int n) {
    value_ = value_ * poch(a, q_, n);
    cond_ += poch_condition(a, q_, n) + n;
    return *this;
  }
  Prefactor& down(const S& a, int n, std::string_view what) {
    if (in_omega(a, q_, n, pole_eps_))
      throw Error(Errc::PoleGuard, "(" + std::string(what) + ";q)_" + std::to_string(n) + " vanishes");
    value_ = value_ / poch(a, q_, n);
    cond_ += poch_condition(a, q_, n) + n;
    return *this;
  }

  const S& value() const { return value_; }
  double condition() const { return cond_; }

 private:
  const QBase<S>& q_;
  double pole_eps_;
  S value_{1};
  double cond_ = 0.0;
};

template <Scalar S>
RepValue<S> combine(const Prefactor<S>& pre, SeriesValue<S> series) {
  RepValue<S> out{pre.value() * series.value, pre.value(), std::move(series), 0.0, 0.0};
  out.abs_scale = magnitude(pre.value()) * out.series.trace.abs_scale;
  out.error_scale = magnitude(pre.value()) * out.series.trace.error_scale +
                    magnitude(out.value) * pre.condition();
  return out;
}

template <class F>
auto guarded(std::string_view label, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::PoleGuard:
      case Errc::DenominatorPole:
      case Errc::BEqualsOne:
      case Errc::ZeroParameter:
      case Errc::DivisionByZero:
      case Errc::ZeroToNegativePower:
        throw Error(Errc::PoleGuard, std::string(label) + ": " + e.what());
      default:
        throw;
    }
  }
}

template <Scalar S>
std::vector<S> others(const std::array<S, 4>& a, int p) {
  std::vector<S> out;
  for (int s = 0; s < 4; ++s)
    if (s != p) out.push_back(a[s]);
  return out;
}

}  // namespace detail

/// p_n(x; a|q) through one of the seven representations.
template <Scalar S>
RepValue<S> eval_rep(const AWParams<S>& P, const RepId& rep, EvalOptions opts = {}) {
  rep.validate();
  return detail::guarded(rep.to_string(), [&]() -> RepValue<S> {
    const QBase<S>& q = P.q;
    const int n = P.n;
    const S& w = P.w;
    const S wi = inverse(w);
    const S A = P.a1234();
    const S& ap = P.a[rep.p];
    const S& ar = P.a[rep.r];
    const S& at = P.a[rep.t];
    const S& au = P.a[rep.u];
    const auto rest = detail::others(P.a, rep.p);
    std::vector<S> aps;
    for (const auto& x : rest) aps.push_back(ap * x);

    detail::Prefactor<S> pre(q, opts.pole_eps);
    switch (rep.tag) {
      case RepTag::PhiStd: {
        pre.mul(pow_int(ap, -n));
        for (const auto& x : aps) pre.up(x, n);
        SeriesSpec<S> spec({q.pow(n - 1) * A, ap * w, ap * wi}, aps, n, q.value(), q, opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::PhiInv: {
        // (A/q;q)_{2n} / (A/q;q)_n taken as the single (A q^{n-1};q)_n.
        pre.mul(q.pow(-binom2(n))).mul(pow_int(S(-ap), -n));
        pre.up(S(A * q.pow(n - 1)), n).up(S(ap * w), n).up(S(ap * wi), n);
        std::vector<S> num;
        for (const auto& x : aps) num.push_back(q.pow(1 - n) / x);
        SeriesSpec<S> spec(std::move(num),
                           {q.pow(2 - 2 * n) / A, q.pow(1 - n) * w / ap, q.pow(1 - n) * wi / ap}, n,
                           q.value(), q, opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::PhiMixed: {
        pre.mul(pow_int(w, n));
        pre.up(S(ap * ar), n).up(S(at * wi), n).up(S(au * wi), n);
        SeriesSpec<S> spec({ap * w, ar * w, q.pow(1 - n) / (at * au)},
                           {ap * ar, q.pow(1 - n) * w / at, q.pow(1 - n) * w / au}, n, q.value(), q,
                           opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::WDef6: {
        // Both (X;q)_{2n}/(X;q)_n quotients collapse to (X q^n;q)_n.
        const S shifted = A * wi / (q.value() * ap);
        pre.mul(pow_int(w, n));
        pre.up(S(A * q.pow(n - 1)), n);
        for (const auto& x : rest) pre.up(S(x * wi), n);
        pre.down(S(shifted * q.pow(n)), n, "a1234 q^{n-1} e^{-i theta} / a_p");
        std::vector<S> lower;
        for (const auto& x : aps) lower.push_back(q.pow(1 - n) * x / A);
        lower.push_back(ap * w);
        VwpSpec<S> spec(q.pow(1 - 2 * n) * ap * w / A, std::move(lower), n, q.value() * w / ap, q,
                        opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef7: {
        pre.mul(pow_int(w, n));
        pre.up(S(ap * wi), n);
        for (const auto& x : aps) pre.up(S(A / x), n);
        pre.down(S(A * w / ap), n, "a1234 e^{i theta} / a_p");
        std::vector<S> lower;
        for (const auto& x : rest) lower.push_back(x * w);
        lower.push_back(q.pow(n - 1) * A);
        VwpSpec<S> spec(A * w / (q.value() * ap), std::move(lower), n, q.value() * wi / ap, q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef5: {
        pre.mul(pow_int(ap, -n));
        pre.up(S(ap * at), n).up(S(ap * au), n).up(S(ar * w), n).up(S(ar * wi), n);
        pre.down(S(ar / ap), n, "a_r / a_p");
        VwpSpec<S> spec(q.pow(-n) * ap / ar,
                        {q.pow(1 - n) / (ar * at), q.pow(1 - n) / (ar * au), ap * w, ap * wi}, n,
                        q.pow(n) * at * au, q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef4: {
        pre.mul(pow_int(w, n));
        for (const auto& x : P.a) pre.up(S(x * wi), n);
        pre.down(S(wi * wi), n, "e^{-2i theta}");
        std::vector<S> lower;
        for (const auto& x : P.a) lower.push_back(x * w);
        VwpSpec<S> spec(q.pow(-n) * w * w, std::move(lower), n, q.pow(2 - n) / A, q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
    }
    throw Error(Errc::InvalidIndices, "unknown representation tag");
  });
}

/// p_n(x; a|1/q) through the base-q series obtained by inverting each
/// representation in q.
template <Scalar S>
RepValue<S> eval_qinv_rep(const AWParams<S>& P, const RepId& rep, EvalOptions opts = {}) {
  rep.validate();
  return detail::guarded("q-inverse " + rep.to_string(), [&]() -> RepValue<S> {
    const QBase<S>& q = P.q;
    const int n = P.n;
    const S& w = P.w;
    const S wi = inverse(w);
    const S A = P.a1234();
    const S& ap = P.a[rep.p];
    const S& ar = P.a[rep.r];
    const S& at = P.a[rep.t];
    const S& au = P.a[rep.u];
    const auto rest = detail::others(P.a, rep.p);
    std::vector<S> aps;
    for (const auto& x : rest) aps.push_back(ap * x);
    const S scale3 = q.pow(-3 * binom2(n));

    detail::Prefactor<S> pre(q, opts.pole_eps);
    switch (rep.tag) {
      case RepTag::PhiStd: {
        pre.mul(scale3).mul(pow_int(S(-ap * A), n));
        std::vector<S> inv;
        for (const auto& x : aps) inv.push_back(inverse(x));
        for (const auto& x : inv) pre.up(x, n);
        SeriesSpec<S> spec({q.pow(n - 1) / A, w / ap, wi / ap}, inv, n, q.value(), q, opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::PhiInv: {
        pre.mul(q.pow(-4 * binom2(n))).mul(pow_int(S(ap * A), n));
        pre.up(S(q.pow(n - 1) / A), n).up(S(w / ap), n).up(S(wi / ap), n);
        std::vector<S> num;
        for (const auto& x : aps) num.push_back(q.pow(1 - n) * x);
        SeriesSpec<S> spec(std::move(num),
                           {q.pow(2 - 2 * n) * A, q.pow(1 - n) * ap * w, q.pow(1 - n) * ap * wi}, n,
                           q.value(), q, opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::PhiMixed: {
        pre.mul(scale3).mul(pow_int(S(-A * wi), n));
        pre.up(inverse(S(ap * ar)), n).up(S(w / at), n).up(S(w / au), n);
        SeriesSpec<S> spec({wi / ap, wi / ar, q.pow(1 - n) * at * au},
                           {inverse(S(ap * ar)), q.pow(1 - n) * at * wi, q.pow(1 - n) * au * wi}, n,
                           q.value(), q, opts);
        return detail::combine(pre, eval_phi(spec, opts));
      }
      case RepTag::WDef6: {
        const S shifted = ap * w / (q.value() * A);
        pre.mul(scale3).mul(pow_int(S(-A * wi), n));
        pre.up(S(q.pow(n - 1) / A), n);
        for (const auto& x : rest) pre.up(S(w / x), n);
        pre.down(S(shifted * q.pow(n)), n, "q^{n-1} a_p e^{i theta} / a1234");
        std::vector<S> lower;
        for (const auto& x : aps) lower.push_back(q.pow(1 - n) * A / x);
        lower.push_back(wi / ap);
        VwpSpec<S> spec(q.pow(1 - 2 * n) * A * wi / ap, std::move(lower), n, q.value() * ap * wi, q,
                        opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef7: {
        pre.mul(scale3).mul(pow_int(S(-A * wi), n));
        pre.up(S(w / ap), n);
        for (const auto& x : aps) pre.up(S(x / A), n);
        pre.down(S(ap * wi / A), n, "a_p e^{-i theta} / a1234");
        std::vector<S> lower;
        for (const auto& x : rest) lower.push_back(wi / x);
        lower.push_back(q.pow(n - 1) / A);
        VwpSpec<S> spec(ap * wi / (q.value() * A), std::move(lower), n, q.value() * ap * w, q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef5: {
        pre.mul(scale3).mul(pow_int(S(-ap * A), n));
        pre.up(inverse(S(ap * at)), n).up(inverse(S(ap * au)), n).up(S(w / ar), n).up(S(wi / ar), n);
        pre.down(S(ap / ar), n, "a_p / a_r");
        VwpSpec<S> spec(q.pow(-n) * ar / ap,
                        {q.pow(1 - n) * ar * at, q.pow(1 - n) * ar * au, w / ap, wi / ap}, n,
                        q.pow(n) / (at * au), q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
      case RepTag::WDef4: {
        pre.mul(scale3).mul(pow_int(S(-A * wi), n));
        for (const auto& x : P.a) pre.up(S(w / x), n);
        pre.down(S(w * w), n, "e^{2i theta}");
        std::vector<S> lower;
        for (const auto& x : P.a) lower.push_back(wi / x);
        VwpSpec<S> spec(q.pow(-n) * wi * wi, std::move(lower), n, q.pow(2 - n) * A, q, opts);
        return detail::combine(pre, eval_w(spec, opts));
      }
    }
    throw Error(Errc::InvalidIndices, "unknown representation tag");
  });
}

template <Scalar S>
struct RepEntry {
  RepId rep;
  std::optional<RepValue<S>> result;
  std::string skipped;  // violated guard when result is empty
};

template <Scalar S>
struct AllReport {
  std::vector<RepEntry<S>> entries;
  /// Largest |v_i - v_j| over evaluated pairs.
  double max_deviation = 0.0;
  /// max_deviation relative to the largest cancellation scale or value magnitude.
  double max_rel_deviation = 0.0;
  /// Every evaluated pair is exactly equal (meaningful in the rational backend).
  bool exact_agreement = true;
  /// Largest per-representation condition error_scale / |value|.
  double condition = 0.0;
  /// Largest error scale among representations.
  double scale = 0.0;

  std::size_t evaluated() const {
    std::size_t k = 0;
    for (const auto& e : entries) k += e.result.has_value();
    return k;
  }
};

template <Scalar S>
AllReport<S> summarize(std::vector<RepEntry<S>> entries) {
  AllReport<S> out;
  double ref = 0.0;
  for (const auto& e : entries) {
    if (!e.result) continue;
    out.scale = std::max(out.scale, e.result->error_scale);
    ref = std::max({ref, e.result->abs_scale, magnitude(e.result->value)});
    out.condition = std::max(out.condition, e.result->condition());
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].result) continue;
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (!entries[j].result) continue;
      const S diff = entries[i].result->value - entries[j].result->value;
      if (!is_zero(diff)) out.exact_agreement = false;
      out.max_deviation = std::max(out.max_deviation, magnitude(diff));
    }
  }
  out.max_rel_deviation = ref == 0.0 ? out.max_deviation : out.max_deviation / ref;
  out.entries = std::move(entries);
  return out;
}

/// All seven representations with default roles (p, r, t, u) = (1, 2, 3, 4).
/// Representations whose guards fail are reported as skipped.
template <Scalar S>
AllReport<S> eval_all(const AWParams<S>& P, EvalOptions opts = {}, const RepId& roles = {}) {
  std::vector<RepEntry<S>> entries;
  for (RepTag tag : all_rep_tags) {
    RepId rep = roles;
    rep.tag = tag;
    RepEntry<S> entry{rep, std::nullopt, {}};
    try {
      entry.result = eval_rep(P, rep, opts);
    } catch (const Error& e) {
      if (e.code() != Errc::PoleGuard) throw;
      entry.skipped = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return summarize(std::move(entries));
}

/// The q-inverse family p_n(x; a|1/q) through all seven inverted forms.
template <Scalar S>
AllReport<S> eval_all_qinv(const AWParams<S>& P, EvalOptions opts = {}, const RepId& roles = {}) {
  std::vector<RepEntry<S>> entries;
  for (RepTag tag : all_rep_tags) {
    RepId rep = roles;
    rep.tag = tag;
    RepEntry<S> entry{rep, std::nullopt, {}};
    try {
      entry.result = eval_qinv_rep(P, rep, opts);
    } catch (const Error& e) {
      if (e.code() != Errc::PoleGuard) throw;
      entry.skipped = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return summarize(std::move(entries));
}

/// p_n(x; a|q) - p_n(x; perm(a)|q), both through PHI_STD.
template <Scalar S>
S check_symmetry(const AWParams<S>& P, const std::array<int, 4>& perm, EvalOptions opts = {}) {
  std::array<bool, 4> seen{};
  for (int k : perm) {
    if (k < 0 || k > 3 || seen[k]) throw Error(Errc::InvalidIndices, "not a permutation of {1,2,3,4}");
    seen[k] = true;
  }
  return eval_rep(P, {}, opts).value - eval_rep(P.permuted(perm), {}, opts).value;
}

/// p_n at w minus p_n at 1/w.
template <Scalar S>
S check_theta_flip(const AWParams<S>& P, const RepId& rep = {}, EvalOptions opts = {}) {
  return eval_rep(P, rep, opts).value - eval_rep(P.flipped(), rep, opts).value;
}

template <Scalar S>
struct ScalingDeviation {
  S flipped;    // against p_n(-theta; 1/a|q)
  S unflipped;  // against p_n(theta; 1/a|q)
};

/// p_n(x; a|1/q) - q^{-3 binom(n,2)} (-a1234)^n p_n(x; 1/a|q), once with
/// theta -> -theta on the right and once without. The left side is
/// evaluated directly on base 1/q.
template <Scalar S>
ScalingDeviation<S> check_qinv_scaling(const AWParams<S>& P, EvalOptions opts = {}) {
  const S lhs = eval_rep(P.with_q(P.q.inverted()), {}, opts).value;
  const S factor = P.q.pow(-3 * binom2(P.n)) * pow_int(S(-P.a1234()), P.n);
  const auto recip = P.reciprocal_params();
  const S right_flipped = factor * eval_rep(recip.flipped(), {}, opts).value;
  const S right = factor * eval_rep(recip, {}, opts).value;
  return {lhs - right_flipped, lhs - right};
}

template <Scalar S>
struct DegreeCertificate {
  /// Divided difference of order n+1 over all nodes: zero iff degree <= n.
  S excess;
  /// Divided difference of order n over the first n+1 nodes: the leading
  /// coefficient in x.
  S leading;
  /// Largest |p_n(x_k)|, for scaling float comparisons.
  double scale = 0.0;
};

/// Newton divided differences of x -> p_n(x; a|q) (PHI_STD) over the nodes
/// x_k = (w_k + 1/w_k)/2, k = 0..n+1. Nodes must give distinct x.
template <Scalar S>
DegreeCertificate<S> degree_certificate(const AWParams<S>& P, const std::vector<S>& ws, EvalOptions opts = {}) {
  const std::size_t m = static_cast<std::size_t>(P.n) + 2;
  if (ws.size() != m) throw Error(Errc::ShapeMismatch, "degree certificate needs n+2 nodes");
  std::vector<S> xs, table;
  DegreeCertificate<S> out{S(0), S(0), 0.0};
  for (const auto& w : ws) {
    const auto Pw = P.with_w(w);
    xs.push_back(Pw.x());
    table.push_back(eval_rep(Pw, {}, opts).value);
    out.scale = std::max(out.scale, magnitude(table.back()));
  }
  // table[k] holds f[x_k .. x_{k+order}] after each pass.
  for (std::size_t order = 1; order < m; ++order) {
    for (std::size_t k = 0; k + order < m; ++k) {
      const S dx = xs[k + order] - xs[k];
      if (is_zero(dx)) throw Error(Errc::InvalidIndices, "degree certificate nodes must be distinct in x");
      table[k] = (table[k + 1] - table[k]) / dx;
    }
    if (order == m - 2) out.leading = table[0];
  }
  out.excess = table[0];
  if (m == 2) out.leading = eval_rep(P.with_w(ws[0]), {}, opts).value;
  return out;
}

}  // namespace qaw
