#include <doctest.h>

#include "oracles.hpp"
#include "qaw/qseries.hpp"

using namespace qaw;

namespace {

std::vector<Exact> gaussians(Rng& rng, int count) {
  std::vector<Exact> out;
  for (int k = 0; k < count; ++k) out.push_back(small_gaussian(rng));
  return out;
}

// Random spec with no denominator pole; retries on the rare hit.
SeriesSpec<Exact> random_spec(Rng& rng, int r, int s, int n_max) {
  for (;;) {
    const QBase<Exact> q(oracle::rational_q(rng));
    try {
      return SeriesSpec<Exact>(gaussians(rng, r - 1), gaussians(rng, s), rng.integer(0, n_max), small_gaussian(rng), q);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("n = 0 series are 1") {
  const QBase<Exact> q(Exact::from_ratio(1, 3));
  const auto phi = eval_phi(SeriesSpec<Exact>({Exact(5), Exact(7)}, {Exact(2)}, 0, Exact(9), q));
  CHECK(phi.value == Exact(1));
  const auto w = eval_w(VwpSpec<Exact>(Exact(3), {Exact(2), Exact(5)}, 0, Exact(4), q));
  CHECK(w.value == Exact(1));
  REQUIRE(phi.trace.terms.size() == 1);
}

TEST_CASE("eval_phi matches direct summation") {
  Rng rng(41);
  for (int draw = 0; draw < 150; ++draw) {
    const int r = rng.integer(1, 5), s = rng.integer(0, 4);
    const auto spec = random_spec(rng, r, s, 8);
    const auto v = eval_phi(spec);
    CHECK(v.value == oracle::phi(spec.num, spec.den, spec.n, spec.z, spec.q.value()));
    CHECK(v.trace.partial_sums.back() == v.value);
    CHECK(v.trace.terms.size() == static_cast<std::size_t>(spec.n + 1));
  }
}

TEST_CASE("eval_w matches its phi definition") {
  Rng rng(43);
  int checked = 0;
  while (checked < 100) {
    const Exact beta = small_gaussian(rng, 29);
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(0, 7);
    const auto lower = gaussians(rng, rng.integer(1, 5));
    const Exact z = small_gaussian(rng);
    try {
      const VwpSpec<Exact> spec(beta * beta, lower, n, z, q);
      CHECK(eval_w(spec).value == oracle::vwp(beta, lower, n, z, q.value()));
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::BEqualsOne));
    }
  }
}

TEST_CASE("series guards") {
  const QBase<Exact> q(Exact::from_ratio(1, 2));
  try {
    SeriesSpec<Exact>({}, {Exact(4)}, 3, Exact(1), q);
    FAIL("expected DenominatorPole");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DenominatorPole);
    CHECK(std::string(e.what()).find("b1") != std::string::npos);
  }
  try {
    VwpSpec<Exact>(Exact(1), {Exact(3)}, 2, Exact(1), q);
    FAIL("expected BEqualsOne");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BEqualsOne);
  }
  CHECK_THROWS_AS(VwpSpec<Exact>(Exact(0), {}, 2, Exact(1), q), Error);
}

TEST_CASE("float recurrence tracks the exact value") {
  Rng rng(47);
  for (int draw = 0; draw < 100; ++draw) {
    const auto spec = random_spec(rng, 4, 3, 10);
    const auto exact = eval_phi(spec).value;
    std::vector<Complex> num, den;
    for (const auto& a : spec.num) num.push_back(scalar_traits<Exact>::to_complex(a));
    for (const auto& b : spec.den) den.push_back(scalar_traits<Exact>::to_complex(b));
    const SeriesSpec<Complex> fspec(num, den, spec.n, scalar_traits<Exact>::to_complex(spec.z),
                                    QBase<Complex>(scalar_traits<Exact>::to_complex(spec.q.value())));
    const auto v = eval_phi(fspec);
    const double err = std::abs(v.value - scalar_traits<Exact>::to_complex(exact));
    INFO("err=" << err << " scale=" << v.trace.error_scale << " n=" << spec.n << " value=" << v.value);
    CHECK(err <= 1e-13 * v.trace.error_scale + 1e-300);
  }
}

TEST_CASE("series inversion is exact") {
  Rng rng(53);
  int checked = 0;
  while (checked < 100) {
    const int r = rng.integer(1, 5);
    const auto spec = random_spec(rng, r, r - 1, 6);
    try {
      const auto inv = invert_series(spec);
      CHECK(eval_phi(spec).value == inv.prefactor * eval_phi(inv.spec).value);
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::ZeroParameter));
    }
  }
  const QBase<Exact> q(Exact::from_ratio(1, 3));
  const auto inv0 = invert_series(SeriesSpec<Exact>({Exact(2)}, {Exact(5)}, 0, Exact(7), q));
  CHECK(inv0.prefactor == Exact(1));
  CHECK_THROWS_AS(invert_series(SeriesSpec<Exact>({Exact(2)}, {}, 2, Exact(7), q)), Error);
}

TEST_CASE("balanced inversion has argument q^2/z") {
  Rng rng(59);
  for (int draw = 0; draw < 40; ++draw) {
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(1, 6);
    auto num = gaussians(rng, 3);
    auto den = gaussians(rng, 2);
    den.push_back(q.pow(1 - n) * num[0] * num[1] * num[2] / (den[0] * den[1]));
    const Exact z = small_gaussian(rng);
    try {
      const auto inv = invert_series(SeriesSpec<Exact>(num, den, n, z, q));
      CHECK(inv.spec.z == q.value() * q.value() / z);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("W inversion is exact for every r") {
  Rng rng(61);
  int checked = 0;
  while (checked < 100) {
    const QBase<Exact> q(oracle::rational_q(rng));
    try {
      const VwpSpec<Exact> spec(small_gaussian(rng), gaussians(rng, rng.integer(0, 5)), rng.integer(0, 6),
                                small_gaussian(rng), q);
      const auto inv = invert_w(spec);
      CHECK(eval_w(spec).value == inv.prefactor * eval_w(inv.spec).value);
      CHECK(inv.spec.r() == spec.r());
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::BEqualsOne || e.code() == Errc::ZeroParameter));
    }
  }
}

TEST_CASE("Watson transformation and the inverted 8W7 argument") {
  Rng rng(67);
  int checked = 0;
  while (checked < 80) {
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(0, 6);
    auto num = gaussians(rng, 3);
    auto den = gaussians(rng, 2);
    den.push_back(q.pow(1 - n) * num[0] * num[1] * num[2] / (den[0] * den[1]));
    try {
      const SeriesSpec<Exact> phi(num, den, n, q.value(), q);
      const auto ww = watson_whipple(phi);
      CHECK(eval_phi(phi).value == ww.prefactor * eval_w(ww.w).value);
      // The 8W7 from a balanced 4phi3 has z = q^{n+2} b^2 / (cdef), which
      // inversion leaves unchanged.
      const auto& w = ww.w;
      CHECK(w.z == q.pow(n + 2) * w.b * w.b / product_of(w.lower));
      const auto inv = invert_w(w);
      CHECK(inv.spec.z == w.z);
      CHECK(eval_phi(phi).value == ww.prefactor * inv.prefactor * eval_w(inv.spec).value);
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::BEqualsOne || e.code() == Errc::ZeroParameter));
    }
  }
}

TEST_CASE("Watson preconditions") {
  const QBase<Exact> q(Exact::from_ratio(1, 3));
  const SeriesSpec<Exact> unbalanced({Exact(2), Exact(3), Exact(5)}, {Exact(7), Exact(11), Exact(13)}, 2, q.value(), q);
  try {
    watson_whipple(unbalanced);
    FAIL("expected NotBalanced");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotBalanced);
  }
  const SeriesSpec<Exact> shape({Exact(2)}, {Exact(7)}, 2, q.value(), q);
  try {
    watson_whipple(shape);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ShapeMismatch);
  }
  const auto n0 = watson_whipple(SeriesSpec<Exact>({Exact(2), Exact(3), Exact(5)}, {Exact(7), Exact(11), q.value() * Exact(30) / Exact(77)}, 0, q.value(), q));
  CHECK(n0.prefactor * eval_w(n0.w).value == Exact(1));
}

TEST_CASE("q to 1/q connection, three ways") {
  Rng rng(71);
  int checked = 0;
  while (checked < 100) {
    const int r = rng.integer(1, 5);
    const auto spec = random_spec(rng, r, r - 1, 6);
    try {
      const auto c = connect_qinv(spec);
      const Exact v = eval_phi(spec).value;
      CHECK(v == eval_phi(c.on_inverse_base).value);
      CHECK(v == c.reversed_prefactor * eval_phi(c.reversed).value);
      CHECK(c.on_inverse_base.q.value() == spec.q.inverted().value());
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::ZeroParameter));
    }
  }
}

TEST_CASE("q-inverted families") {
  Rng rng(73);
  int checked = 0;
  while (checked < 100) {
    const Exact a = small_gaussian(rng), b = small_gaussian(rng), c = small_gaussian(rng), d = small_gaussian(rng);
    const QBase<Exact> q(oracle::rational_q(rng));
    QFamily<Exact> f;
    f.n = rng.integer(0, 6);
    f.multiplier = [a](const QBase<Exact>& p) { return poch(a, p, 3) * p.pow(2); };
    f.num = [a, b](const QBase<Exact>& p) { return std::vector<Exact>{a * p.value(), b}; };
    f.den = [c, d](const QBase<Exact>& p) { return std::vector<Exact>{c * p.pow(2), d}; };
    f.z = [a, c](const QBase<Exact>& p) { return p.value() * a / c; };
    try {
      const Exact direct = f.value(q.inverted());
      const auto g = qinvert_f(f);
      CHECK(g.value(q) == direct);
      CHECK(eval_phi(qinvert_spec(f.spec_at(q))).value == eval_phi(f.spec_at(q)).value);
      ++checked;
    } catch (const Error& e) {
      CHECK((e.code() == Errc::DenominatorPole || e.code() == Errc::DivisionByZero));
    }
  }
}
