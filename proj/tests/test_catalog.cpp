#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "qaw/sampler.hpp"

using namespace qaw;

namespace {

Draw<Exact> random_draw(Rng& rng, int n) {
  std::array<Exact, 5> x;
  for (auto& v : x) v = small_gaussian(rng, 29);
  return {x, QBase<Exact>(oracle::rational_q(rng)), n};
}

// Exact verdicts of one side pair over admissible random draws.
struct Votes {
  int pass = 0;
  int fail = 0;
};

Votes vote(const Side& lhs, const Side& rhs, std::uint64_t seed, int wanted = 12) {
  Rng rng(seed);
  Votes v;
  for (int attempt = 0; attempt < 400 && v.pass + v.fail < wanted; ++attempt) {
    const auto o = check_sides(lhs, rhs, random_draw(rng, rng.integer(1, 5)));
    if (o.verdict == Verdict::Pass) ++v.pass;
    if (o.verdict == Verdict::Fail) ++v.fail;
  }
  return v;
}

std::array<Mono, 5> slot_map(std::initializer_list<const char*> xs) {
  std::array<Mono, 5> m;
  std::size_t k = 0;
  for (auto x : xs) m[k++] = Mono::parse(x);
  return m;
}

Side bare(const SeriesForm& s) { return Side{PrefactorForm{}, s}; }

}  // namespace

TEST_CASE("catalog shape") {
  const auto& cat = catalog();
  CHECK(cat.size() == 35);
  std::map<std::string, int> families;
  std::set<std::string> ids;
  for (const auto& r : cat) {
    ++families[r.family];
    ids.insert(r.id);
    CHECK(r.ref.find("Cor") != std::string::npos);
    CHECK_FALSE(r.constraints.empty());
  }
  CHECK(ids.size() == 35);
  CHECK(families["cor3.3"] == 10);
  CHECK(families["cor3.5"] == 11);
  CHECK(families["cor3.6"] == 3);
  CHECK(families["cor3.8"] == 5);
  CHECK(families["cor3.10"] == 3);
  CHECK(families["rem3.6"] + families["rem3.8"] + families["rem3.10"] == 3);
  CHECK(find_record("cor3.3/3.5a.1")->ref == "Cor 3.3, eq. 3.5a.1");
  CHECK(find_record("cor3.5/r2")->ref == "Cor 3.5, eq. cor3.5:r2");
  CHECK(find_record("nosuch") == nullptr);
}

TEST_CASE("record contents") {
  const auto* r = find_record("cor3.3/3.5a.3");
  REQUIRE(r != nullptr);
  const auto& s = r->rhs.series;
  CHECK(s.kind == SeriesForm::Kind::Phi);
  CHECK(s.num == std::vector<Mono>{Mono::parse("q b / e f"), Mono::parse("c"), Mono::parse("d")});
  CHECK(s.den == std::vector<Mono>{Mono::parse("q^(-n) c d / b"), Mono::parse("q b / e"), Mono::parse("q b / f")});
  CHECK(s.z == Mono::parse("q"));
  CHECK(r->balanced);

  const auto* r2 = find_record("cor3.5/r2");
  REQUIRE(r2 != nullptr);
  CHECK(r2->rhs.pre.to_string() == "(qb/(de), qb/(df), qb/c, d/c, c;q)_n / (qb/(ce), qb/(cf), qb/d, c/d, d;q)_n");
}

TEST_CASE("monomial DSL") {
  const Mono m = Mono::parse("q^(n+2) b^2 / c d e f");
  CHECK(m.q0 == 2);
  CHECK(m.qn == 1);
  CHECK(m.e == std::array<int, 5>{2, -1, -1, -1, -1});
  CHECK(Mono::parse(m.to_string()) == m);
  CHECK(Mono::parse("-q b / c").sign == -1);
  CHECK((m * m.inverse()) == Mono::parse("1"));
  CHECK(m.pow(2) == m * m);
  const std::array<Exact, 5> x{Exact(2), Exact(3), Exact(5), Exact(7), Exact(11)};
  const QBase<Exact> q(Exact::from_ratio(1, 2));
  CHECK(m.eval(x, q, 3) == q.pow(5) * Exact(4) / Exact(3 * 5 * 7 * 11));
  for (const char* bad : {"q^(", "x", "b^", "/"}) CHECK_THROWS_AS(Mono::parse(bad), Error);
}

TEST_CASE("glob matching") {
  CHECK(glob_match("cor3.3/*", "cor3.3/3.5a.1"));
  CHECK_FALSE(glob_match("cor3.3/*", "cor3.5/r2"));
  CHECK(glob_match("*", "anything"));
  CHECK(glob_match("cor3.?/r2", "cor3.5/r2"));
  CHECK_FALSE(glob_match("cor3.?/r2", "cor3.10/r2"));
}

TEST_CASE("n = 0 draws pass with exact zero deviation") {
  Rng rng(5);
  for (const auto& rec : catalog()) {
    CAPTURE(rec.id);
    for (int k = 0; k < 3; ++k) {
      const auto o = check(rec, random_draw(rng, 0));
      if (o.verdict == Verdict::Skipped) continue;
      CHECK(o.verdict == Verdict::Pass);
      CHECK(o.exact_zero);
    }
  }
}

TEST_CASE("cor3.3/3.5a.1 at n = 2") {
  Rng rng(17);
  const auto& rec = *find_record("cor3.3/3.5a.1");
  int passed = 0;
  for (int k = 0; k < 20; ++k) {
    const auto o = check(rec, random_draw(rng, 2));
    CHECK(o.verdict != Verdict::Fail);
    passed += o.verdict == Verdict::Pass && o.exact_zero;
  }
  CHECK(passed >= 12);
}

TEST_CASE("prefactor pole is a skip") {
  const auto& rec = *find_record("cor3.3/3.5a.1");
  const QBase<Exact> q(Exact::from_ratio(1, 3));
  const Exact b = Exact::from_ratio(2, 5);
  // c = qb makes (qb/c;q)_n vanish.
  const Draw<Exact> d{{b, q.value() * b, Exact(3), Exact(5), Exact(7)}, q, 3};
  const auto o = check(rec, d);
  CHECK(o.verdict == Verdict::Skipped);
  CHECK_FALSE(o.guard.empty());
  CHECK(side_guard(rec.rhs, d, 1e-9).has_value());
}

TEST_CASE("every record passes exactly on random draws") {
  for (const auto& rec : catalog()) {
    CAPTURE(rec.id);
    const auto v = vote(rec.lhs, rec.effective_rhs(), fnv1a(rec.id));
    CHECK(v.fail == 0);
    CHECK(v.pass >= 10);
  }
}

TEST_CASE("balanced records stay balanced on generated draws") {
  DrawConfig cfg;
  Rng rng(23);
  int seen = 0;
  for (const auto& rec : catalog()) {
    if (!rec.balanced) continue;
    ++seen;
    for (int k = 0; k < 5; ++k) {
      const auto d = draw_params<Exact>(rng, cfg, rec);
      for (const Side* side : {&rec.lhs, &rec.effective_rhs()})
        if (side->series.kind == SeriesForm::Kind::Phi) CHECK(side_balanced(*side, d));
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("cor3.5:r5 parse") {
  const auto& rec = *find_record("cor3.5/r5");
  CHECK(rec.status == RecordStatus::Active);
  const auto chosen = vote(rec.lhs, rec.rhs, 31);
  CHECK(chosen.fail == 0);
  // Reading "qb/d f/c" as the single factor qbf/(cd).
  Side alt = rec.rhs;
  alt.pre.den = {"q b / c f", "q b f / c d", "d"};
  const auto other = vote(rec.lhs, alt, 31);
  CHECK(other.fail > 0);
  CHECK(other.pass < other.fail);
}

TEST_CASE("cor3.8:r6 is quarantined with a single-factor correction") {
  const auto& rec = *find_record("cor3.8/r6");
  CHECK(rec.status == RecordStatus::Quarantined);
  REQUIRE(rec.correction.has_value());
  CHECK(rec.correction->description == "denominator factor qb/(de) -> qb/(cd)");
  CHECK(vote(rec.lhs, rec.rhs, 37).fail > 0);
  CHECK(vote(rec.lhs, rec.correction->rhs, 37).fail == 0);
  int quarantined = 0;
  for (const auto& r : catalog()) quarantined += r.status == RecordStatus::Quarantined;
  CHECK(quarantined == 1);
}

TEST_CASE("audit leaves correct records alone and recovers a planted typo") {
  auto printed = printed_catalog();
  REQUIRE(printed.size() == 35);
  for (const auto& r : printed) CHECK_FALSE(r.correction.has_value());

  IdentityRecord good = *find_record("cor3.5/r2");
  good.correction.reset();
  good.status = RecordStatus::Active;
  const std::vector<Mono> vocab{Mono::parse("q b / c"), Mono::parse("q b / d"), Mono::parse("q b / e"),
                                Mono::parse("q b / f"), Mono::parse("d / c"), Mono::parse("c / d")};
  CHECK_FALSE(audit_record(good, vocab));
  CHECK(good.status == RecordStatus::Active);

  IdentityRecord planted = good;
  planted.rhs.pre.num[2] = "q b / e";  // was qb/c
  CHECK(audit_record(planted, vocab));
  CHECK(planted.status == RecordStatus::Quarantined);
  REQUIRE(planted.correction.has_value());
  CHECK(planted.correction->rhs.pre.num[2].base == Mono::parse("q b / c"));
}

TEST_CASE("remark substitutions carry multiplier 1") {
  for (const char* id : {"rem3.6/3.5a.7", "rem3.8/3.5a.4", "rem3.10/3.5a.6b"}) {
    CAPTURE(id);
    const auto& rec = *find_record(id);
    CHECK(rec.lhs.pre == PrefactorForm{});
    CHECK(rec.rhs.pre == PrefactorForm{});
    CHECK(vote(rec.lhs, rec.rhs, 41).fail == 0);
  }
  // The second cor3.6 map lands on the 3.5a.7 series with c and f
  // interchanged; the third on the 3.5a.7c series. Both with multiplier 1.
  const Side head = find_record("cor3.6/r2")->lhs;
  const Side map2 = head.substitute(
      slot_map({"q^(-2n-1) c d e / b^2", "q^(-n-1) c d e f / b^2", "q^(-n) c / b", "q^(-n) d / b", "q^(-n) e / b"}));
  const Side map3 = head.substitute(slot_map({"q^(-n-1) d e f / b", "q^(-n-1) c d e f / b^2", "f", "e", "d"}));
  const Side s7 = bare(find_record("cor3.3/3.5a.7")->rhs.series).substitute(slot_map({"b", "f", "d", "e", "c"}));
  const Side s7c = bare(find_record("cor3.3/3.5a.7c")->rhs.series);
  CHECK(map3.series == s7c.series);
  const auto v2 = vote(map2, s7, 43);
  const auto v3 = vote(map3, s7c, 47);
  CHECK(v2.fail == 0);
  CHECK(v2.pass >= 10);
  CHECK(v3.fail == 0);
  CHECK(v3.pass >= 10);
}

TEST_CASE("Cor 3.5 transitivity through the c <-> d relabeling") {
  // r2's series is the head with c and d swapped, so applying r2 twice
  // returns to the head: the two prefactors multiply to 1.
  const auto& rec = *find_record("cor3.5/r2");
  CHECK(rec.rhs.series == rec.lhs.substitute(slot_map({"b", "d", "c", "e", "f"})).series);
  Rng rng(53);
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
    const auto d = random_draw(rng, rng.integer(0, 6));
    Draw<Exact> swapped = d;
    std::swap(swapped.x[1], swapped.x[2]);
    try {
      const auto there = eval_side(rec.rhs, d);
      const auto back = eval_side(rec.rhs, swapped);
      CHECK(there.prefactor * back.prefactor == Exact(1));
      CHECK(there.value == eval_side(rec.lhs, d).value);
      ++checked;
    } catch (const Error& e) {
      CHECK(detail::is_guard(e.code()));
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("derivations from the Askey-Wilson representations") {
  Rng rng(61);
  for (const auto& rec : catalog()) {
    if (rec.family != "cor3.3") continue;
    CAPTURE(rec.id);
    const auto deriv = derive_from_aw(rec.id);
    CHECK(deriv.record_id == rec.id);
    CHECK_FALSE(deriv.substitution.empty());
    int ok = 0;
    for (int attempt = 0; attempt < 60 && ok < 6; ++attempt) {
      const Exact beta = small_gaussian(rng, 29);
      const std::array<Exact, 4> cdef{small_gaussian(rng, 29), small_gaussian(rng, 29), small_gaussian(rng, 29),
                                      small_gaussian(rng, 29)};
      const QBase<Exact> kappa(oracle::rational_q(rng));
      const int n = rng.integer(0, 5);
      try {
        const auto c = check_derivation(deriv, beta, cdef, kappa, n);
        CHECK(c.ok());
        ++ok;
      } catch (const Error& e) {
        CHECK(detail::is_guard(e.code()));
      }
    }
    CHECK(ok >= 6);
  }
  try {
    derive_from_aw("cor3.5/r2");
    FAIL("expected NotACor33Record");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotACor33Record);
  }
}

TEST_CASE("Askey-Wilson multiplier") {
  const QBase<Exact> kappa(Exact::from_ratio(2, 3));
  const std::array<Exact, 4> cdef{Exact(2), Exact(3), Exact(5), Exact(7)};
  CHECK(aw_multiplier(Exact::from_ratio(1, 2), cdef, kappa, 0) == Exact(1));
  // 3.5a.3 is an instance of the standard 4phi3 definition.
  const auto d = derive_from_aw("cor3.3/3.5a.3");
  CHECK(d.rhs.rep.tag == RepTag::PhiMixed);
  CHECK(check_derivation(d, Exact::from_ratio(1, 2), cdef, kappa, 3).ok());
}

TEST_CASE("3.5a.1 is the 8W7 inversion") {
  Rng rng(67);
  const auto& rec = *find_record("cor3.3/3.5a.1");
  int checked = 0;
  for (int attempt = 0; attempt < 100 && checked < 20; ++attempt) {
    const auto d = random_draw(rng, rng.integer(0, 6));
    const auto& x = d.x;
    try {
      const VwpSpec<Exact> head(x[0], {x[1], x[2], x[3], x[4]}, d.n,
                                d.q.pow(d.n + 2) * x[0] * x[0] / (x[1] * x[2] * x[3] * x[4]), d.q);
      const auto inv = invert_w(head);
      const auto rhs = eval_side(rec.rhs, d);
      CHECK(inv.prefactor == rhs.prefactor);
      CHECK(eval_w(inv.spec).value == rhs.series.value);
      ++checked;
    } catch (const Error& e) {
      CHECK(detail::is_guard(e.code()));
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("float sweep never fails") {
  DrawConfig cfg;
  cfg.backend = BackendChoice::Float;
  cfg.q_lo = 0.1;
  cfg.q_hi = 0.9;
  cfg.q_complex = true;
  cfg.n_max = 10;
  cfg.draws = 1000;
  const auto report = run_sweep(cfg, {"cor3.3/*", "cor3.8/*"});
  REQUIRE(report.results.size() == 15);
  for (const auto& r : report.results) {
    CAPTURE(r.target);
    CHECK(r.tally.fail == 0);
    CHECK(r.tally.total() == 1000);
  }
}
