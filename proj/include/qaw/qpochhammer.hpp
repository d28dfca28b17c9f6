#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qaw/scalar.hpp"

namespace qaw {

struct EvalOptions {
  /// Relative margin below which a factor 1 - x counts as zero (float only).
  double pole_eps = 1e-9;
};

inline void require_index(int n) {
  if (n < 0) throw Error(Errc::InvalidIndices, "negative Pochhammer index");
}

/// (a;q)_n = (1-a)(1-aq)...(1-aq^{n-1}); the empty product is 1.
template <Scalar S>
S poch(const S& a, const QBase<S>& q, int n) {
  require_index(n);
  S result(1);
  S term = a;
  for (int k = 0; k < n; ++k) {
    result = result * (S(1) - term);
    if (k + 1 < n) term = term * q.value();
  }
  return result;
}

template <Scalar S>
S poch_list(std::span<const S> bases, const QBase<S>& q, int n) {
  S result(1);
  for (const auto& a : bases) result = result * poch(a, q, n);
  return result;
}

template <Scalar S>
S poch_list(std::initializer_list<S> bases, const QBase<S>& q, int n) {
  return poch_list(std::span<const S>(bases.begin(), bases.size()), q, n);
}

/// Membership of a in {q^{-k} : 0 <= k <= n-1}, i.e. (a;q)_n vanishes.
template <Scalar S>
bool in_omega(const S& a, const QBase<S>& q, int n, double pole_eps = EvalOptions{}.pole_eps) {
  S term = a;
  for (int k = 0; k < n; ++k) {
    if (factor_vanishes(S(1) - term, term, pole_eps)) return true;
    term = term * q.value();
  }
  return false;
}

/// (a;q^{-1})_n evaluated through (a^{-1};q)_n (-a)^n q^{-binom(n,2)}.
template <Scalar S>
S poch_qinv(const S& a, const QBase<S>& q, int n) {
  require_index(n);
  if (n == 0) return S(1);
  if (is_zero(a)) throw Error(Errc::ZeroBase, "(a;1/q)_n via reciprocal needs a != 0");
  return poch(inverse(a), q, n) * pow_int(-a, n) * q.pow(-binom2(n));
}

/// (+-a;q)_n := (a;q)_n (-a;q)_n.
template <Scalar S>
S poch_pm(const S& a, const QBase<S>& q, int n) {
  return poch(a, q, n) * poch(S(-a), q, n);
}

/// Radical-free value of (+-sqrt(a), +-sqrt(qa);q)_n, namely (a, aq;q^2)_n.
template <Scalar S>
S poch_pm_sqrt_pair(const S& a, const QBase<S>& q, int n) {
  const QBase<S> q2 = q.squared();
  return poch(a, q2, n) * poch(S(a * q.value()), q2, n);
}

/// One Pochhammer identity as a residual LHS - RHS over (a, q, n, k).
/// Checkers throw Error(PoleInIdentity) when the identity's own
/// precondition fails on the given arguments.
template <Scalar S>
struct PochIdentity {
  std::string name;
  std::string statement;
  std::function<S(const S& a, const QBase<S>& q, int n, int k)> residual;
};

template <Scalar S>
std::vector<PochIdentity<S>> identity_suite(double pole_eps = EvalOptions{}.pole_eps) {
  using Q = QBase<S>;
  std::vector<PochIdentity<S>> suite;

  suite.push_back({"q-inversion", "(a;1/q)_n = (1/a;q)_n (-a)^n q^{-binom(n,2)}",
                   [](const S& a, const Q& q, int n, int) {
                     if (is_zero(a)) throw Error(Errc::PoleInIdentity, "q-inversion needs a != 0");
                     return poch(a, q.inverted(), n) - poch_qinv(a, q, n);
                   }});

  suite.push_back({"index-addition-k-first", "(a;q)_{n+k} = (a;q)_k (aq^k;q)_n",
                   [](const S& a, const Q& q, int n, int k) {
                     return poch(a, q, n + k) - poch(a, q, k) * poch(S(a * q.pow(k)), q, n);
                   }});

  suite.push_back({"index-addition-n-first", "(a;q)_{n+k} = (a;q)_n (aq^n;q)_k",
                   [](const S& a, const Q& q, int n, int k) {
                     return poch(a, q, n + k) - poch(a, q, n) * poch(S(a * q.pow(n)), q, k);
                   }});

  suite.push_back({"reversal", "(a;q)_n = (q^{1-n}/a;q)_n (-a)^n q^{binom(n,2)}",
                   [](const S& a, const Q& q, int n, int) {
                     if (is_zero(a)) throw Error(Errc::PoleInIdentity, "reversal needs a != 0");
                     return poch(a, q, n) -
                            poch(S(q.pow(1 - n) / a), q, n) * pow_int(-a, n) * q.pow(binom2(n));
                   }});

  suite.push_back({"shifted-base", "(aq^{-n};q)_k = q^{-nk} (q/a;q)_n / (q^{1-k}/a;q)_n (a;q)_k",
                   [pole_eps](const S& a, const Q& q, int n, int k) {
                     if (is_zero(a)) throw Error(Errc::PoleInIdentity, "shifted-base needs a != 0");
                     const S shifted = q.pow(1 - k) / a;
                     if (in_omega(shifted, q, n, pole_eps))
                       throw Error(Errc::PoleInIdentity, "shifted-base needs q^{1-k}/a outside Omega_q^n");
                     return poch(S(a * q.pow(-n)), q, k) -
                            q.pow(-static_cast<std::int64_t>(n) * k) * poch(S(q.value() / a), q, n) /
                                poch(shifted, q, n) * poch(a, q, k);
                   }});

  suite.push_back({"square-base", "(a^2;q^2)_n = (a;q)_n (-a;q)_n",
                   [](const S& a, const Q& q, int n, int) {
                     return poch(S(a * a), q.squared(), n) - poch_pm(a, q, n);
                   }});

  suite.push_back({"duplication", "(a;q)_{2n} = (a;q^2)_n (aq;q^2)_n",
                   [](const S& a, const Q& q, int n, int) {
                     return poch(a, q, 2 * n) - poch_pm_sqrt_pair(a, q, n);
                   }});

  suite.push_back({"quotient", "(aq^n;q)_n = (a, aq;q^2)_n / (a;q)_n",
                   [pole_eps](const S& a, const Q& q, int n, int) {
                     if (in_omega(a, q, n, pole_eps))
                       throw Error(Errc::PoleInIdentity, "quotient form needs a outside Omega_q^n");
                     return poch(S(a * q.pow(n)), q, n) - poch_pm_sqrt_pair(a, q, n) / poch(a, q, n);
                   }});

  return suite;
}

}  // namespace qaw
