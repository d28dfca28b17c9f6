// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qaw/askey_wilson.hpp"
#include "qaw/catalog.hpp"
#include "qaw/qpochhammer.hpp"
#include "qaw/qseries.hpp"
#include "qaw/sampler.hpp"

using namespace qaw;

namespace {

// Draw counts.
constexpr int kPochDraws = 500;
constexpr int kPochMaxIndex = 12;
constexpr int kPhiDraws = 500;
constexpr int kPhiMaxN = 10;
constexpr int kInversionDraws = 200;
constexpr int kInversionMaxN = 6;
constexpr int kWatsonDraws = 200;
constexpr int kRepsRationalDraws = 500;
constexpr int kRepsRationalMaxN = 8;
constexpr int kRepsFloatDraws = 2000;
constexpr int kSymmetryDraws = 200;
constexpr int kQinvDraws = 200;
constexpr int kSweepDraws = 100;
constexpr int kSweepMaxN = 6;
constexpr int kDegreeDraws = 100;
constexpr int kDegreeMaxN = 8;

// Tolerances and budgets.
constexpr double kFloatRelTol = 1e-10;
constexpr double kFloatCondCap = 1e8;
constexpr double kMaxInconclusiveRate = 0.10;
constexpr double kPochSeconds = 10.0;
constexpr double kPhiSeconds = 10.0;
constexpr double kQinvSeconds = 30.0;
constexpr double kSweepSeconds = 300.0;
constexpr std::uint64_t kSeed = 20240611;
constexpr int kRationalBound = 29;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("unexpected error: ") + e.what()};
  }
  char time_buf[32];
  std::snprintf(time_buf, sizeof time_buf, "%.2fs", seconds_since(t0));
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << time_buf << "] "
            << o.detail << std::endl;
  if (!o.ok) ++failures;
}

Exact gauss(Rng& rng) { return small_gaussian(rng, kRationalBound); }

std::vector<Exact> gaussians(Rng& rng, int count) {
  std::vector<Exact> out;
  for (int k = 0; k < count; ++k) out.push_back(gauss(rng));
  return out;
}

DrawConfig base_cfg() {
  DrawConfig cfg;
  cfg.seed = kSeed;
  cfg.rational_bound = kRationalBound;
  cfg.rel_tol = kFloatRelTol;
  cfg.cond_cap = kFloatCondCap;
  return cfg;
}

std::string tally_text(const Tally& t) {
  std::ostringstream os;
  os << "pass=" << t.pass << " fail=" << t.fail << " inconclusive=" << t.inconclusive << " skipped=" << t.skipped;
  return os.str();
}

// Sums the tallies of every result; ok when nothing failed and something passed.
Outcome sweep_outcome(const SweepReport& rep) {
  Outcome o;
  std::ostringstream os;
  for (const auto& r : rep.results) {
    os << r.target << "[" << r.backend << "] " << tally_text(r.tally) << "; ";
    if (r.tally.fail > 0 || r.tally.pass == 0) o.ok = false;
  }
  o.detail = os.str();
  return o;
}

Outcome criterion_poch() {
  Rng rng(kSeed + 1);
  const auto suite = identity_suite<Exact>();
  long checked = 0, skipped = 0, bad = 0;
  const auto t0 = Clock::now();
  for (const auto& id : suite) {
    for (int draw = 0; draw < kPochDraws; ++draw) {
      const Exact a = gauss(rng);
      const QBase<Exact> q(oracle::rational_q(rng));
      const int n = rng.integer(0, kPochMaxIndex), k = rng.integer(0, kPochMaxIndex);
      try {
        if (!id.residual(a, q, n, k).is_zero()) ++bad;
        ++checked;
      } catch (const Error& e) {
        if (e.code() != Errc::PoleInIdentity) throw;
        ++skipped;
      }
    }
  }
  // The product itself, against the literal definition.
  for (int draw = 0; draw < kPochDraws; ++draw) {
    const Exact a = gauss(rng);
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(0, kPochMaxIndex);
    if (poch(a, q, n) != oracle::poch(a, q.value(), n)) ++bad;
    ++checked;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << suite.size() << " identities, checked=" << checked << " skipped=" << skipped << " mismatches=" << bad;
  return {bad == 0 && secs < kPochSeconds, os.str()};
}

Outcome criterion_phi() {
  Rng rng(kSeed + 2);
  int checked = 0, bad = 0, poles = 0;
  const auto t0 = Clock::now();
  while (checked < kPhiDraws) {
    const int r = rng.coin() ? 4 : 5;
    const QBase<Exact> q(oracle::rational_q(rng));
    try {
      const SeriesSpec<Exact> spec(gaussians(rng, r - 1), gaussians(rng, r - 1), rng.integer(0, kPhiMaxN), gauss(rng), q);
      if (eval_phi(spec).value != oracle::phi(spec.num, spec.den, spec.n, spec.z, q.value())) ++bad;
      ++checked;
    } catch (const Error& e) {
      if (e.code() != Errc::DenominatorPole) throw;
      ++poles;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "checked=" << checked << " mismatches=" << bad << " pole redraws=" << poles;
  return {bad == 0 && secs < kPhiSeconds, os.str()};
}

bool benign(const Error& e) {
  return e.code() == Errc::DenominatorPole || e.code() == Errc::ZeroParameter || e.code() == Errc::BEqualsOne ||
         e.code() == Errc::DivisionByZero;
}

Outcome criterion_inversion() {
  Rng rng(kSeed + 3);
  int bad = 0;
  int series = 0, w = 0, connect = 0, family = 0, balanced = 0;

  while (series < kInversionDraws) {
    const int r = rng.integer(1, 5);
    const QBase<Exact> q(oracle::rational_q(rng));
    try {
      const SeriesSpec<Exact> spec(gaussians(rng, r - 1), gaussians(rng, r - 1), rng.integer(0, kInversionMaxN),
                                   gauss(rng), q);
      const auto inv = invert_series(spec);
      if (eval_phi(spec).value != inv.prefactor * eval_phi(inv.spec).value) ++bad;
      ++series;
    } catch (const Error& e) {
      if (!benign(e)) throw;
    }
  }

  // Balanced 4phi3: reversal sends z to q^2/z.
  while (balanced < kInversionDraws) {
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(1, kInversionMaxN);
    auto num = gaussians(rng, 3);
    auto den = gaussians(rng, 2);
    den.push_back(q.pow(1 - n) * num[0] * num[1] * num[2] / (den[0] * den[1]));
    const Exact z = gauss(rng);
    try {
      const SeriesSpec<Exact> spec(num, den, n, z, q);
      const auto inv = invert_series(spec);
      if (inv.spec.z != q.value() * q.value() / z) ++bad;
      if (eval_phi(spec).value != inv.prefactor * eval_phi(inv.spec).value) ++bad;
      ++balanced;
    } catch (const Error& e) {
      if (!benign(e)) throw;
    }
  }

  // Very-well-poised inversion over 8W7 shapes, and the preserved
  // argument q^{n+2} b^2 / (cdef).
  while (w < kInversionDraws) {
    const QBase<Exact> q(oracle::rational_q(rng));
    const int n = rng.integer(0, kInversionMaxN);
    const Exact b = gauss(rng);
    const auto lower = gaussians(rng, 4);
    const bool preserved = rng.coin();
    const Exact z = preserved ? q.pow(n + 2) * b * b / product_of(lower) : gauss(rng);
    try {
      const VwpSpec<Exact> spec(b, lower, n, z, q);
      const auto inv = invert_w(spec);
      if (eval_w(spec).value != inv.prefactor * eval_w(inv.spec).value) ++bad;
      if (preserved && inv.spec.z != z) ++bad;
      ++w;
    } catch (const Error& e) {
      if (!benign(e)) throw;
    }
  }

  // q <-> 1/q connection: direct, on base 1/q, and reversed.
  while (connect < kInversionDraws) {
    const int r = rng.integer(1, 5);
    const QBase<Exact> q(oracle::rational_q(rng));
    try {
      const SeriesSpec<Exact> spec(gaussians(rng, r - 1), gaussians(rng, r - 1), rng.integer(0, kInversionMaxN),
                                   gauss(rng), q);
      const auto c = connect_qinv(spec);
      const Exact v = eval_phi(spec).value;
      if (v != eval_phi(c.on_inverse_base).value) ++bad;
      if (v != c.reversed_prefactor * eval_phi(c.reversed).value) ++bad;
      ++connect;
    } catch (const Error& e) {
      if (!benign(e)) throw;
    }
  }

  // q-dependent families: f~(q) = f(1/q).
  while (family < kInversionDraws) {
    const Exact a = gauss(rng), b = gauss(rng), c = gauss(rng), d = gauss(rng);
    const QBase<Exact> q(oracle::rational_q(rng));
    QFamily<Exact> f;
    f.n = rng.integer(0, kInversionMaxN);
    f.multiplier = [a](const QBase<Exact>& p) { return poch(a, p, 2) * p.pow(3); };
    f.num = [a, b](const QBase<Exact>& p) { return std::vector<Exact>{a * p.value(), b, a * b}; };
    f.den = [c, d](const QBase<Exact>& p) { return std::vector<Exact>{c * p.pow(2), d, c / p.value()}; };
    f.z = [a, c](const QBase<Exact>& p) { return p.value() * a / c; };
    try {
      const Exact direct = f.value(q.inverted());
      if (qinvert_f(f).value(q) != direct) ++bad;
      ++family;
    } catch (const Error& e) {
      if (!benign(e)) throw;
    }
  }

  std::ostringstream os;
  os << "phi=" << series << " balanced=" << balanced << " W=" << w << " connection=" << connect
     << " families=" << family << " mismatches=" << bad;
  return {bad == 0, os.str()};
}

Outcome criterion_watson() {
  DrawConfig cfg = base_cfg();
  cfg.draws = kWatsonDraws;
  cfg.n_max = kInversionMaxN;
  return sweep_outcome(run_sweep(cfg, {"series/watson"}));
}

Outcome criterion_reps() {
  DrawConfig rc = base_cfg();
  rc.draws = kRepsRationalDraws;
  rc.n_max = kRepsRationalMaxN;
  const auto exact = run_sweep(rc, {"aw/reps"});

  DrawConfig fc = base_cfg();
  fc.backend = BackendChoice::Float;
  fc.draws = kRepsFloatDraws;
  fc.n_max = kRepsRationalMaxN;
  const auto flt = run_sweep(fc, {"aw/reps"});

  Outcome o = sweep_outcome(exact);
  const Outcome f = sweep_outcome(flt);
  const Tally& t = flt.results.front().tally;
  const long judged = t.pass + t.fail + t.inconclusive;
  const double rate = judged == 0 ? 1.0 : static_cast<double>(t.inconclusive) / static_cast<double>(judged);
  char buf[64];
  std::snprintf(buf, sizeof buf, "inconclusive rate=%.4f", rate);
  o.ok = o.ok && f.ok && rate < kMaxInconclusiveRate;
  o.detail += f.detail + buf;
  return o;
}

Outcome criterion_symmetry() {
  DrawConfig cfg = base_cfg();
  cfg.draws = kSymmetryDraws;
  return sweep_outcome(run_sweep(cfg, {"aw/symmetry", "aw/theta-flip"}));
}

Outcome criterion_qinv() {
  const auto t0 = Clock::now();
  Outcome o;
  for (QRegime regime : {QRegime::Inside, QRegime::Mirrored}) {
    DrawConfig cfg = base_cfg();
    cfg.draws = kQinvDraws;
    cfg.q_regime = regime;
    const Outcome part = sweep_outcome(run_sweep(cfg, {"aw/qinv", "aw/qinv-scaling"}));
    o.ok = o.ok && part.ok;
    o.detail += std::string(q_regime_name(regime)) + ": " + part.detail;
  }
  o.ok = o.ok && seconds_since(t0) < kQinvSeconds;
  return o;
}

Outcome criterion_sweep() {
  DrawConfig cfg = base_cfg();
  cfg.draws = kSweepDraws;
  cfg.n_min = 0;
  cfg.n_max = kSweepMaxN;
  std::vector<std::string> ids;
  for (const auto& r : catalog()) ids.push_back(r.id);
  const auto t0 = Clock::now();
  const auto rep = run_sweep(cfg, ids);
  const double secs = seconds_since(t0);

  Outcome o;
  long pass = 0, skipped = 0, min_pass = -1;
  std::ostringstream os;
  for (const auto& r : rep.results) {
    pass += r.tally.pass;
    skipped += r.tally.skipped;
    min_pass = min_pass < 0 ? r.tally.pass : std::min(min_pass, r.tally.pass);
    if (r.tally.fail > 0 || r.tally.pass == 0 || r.tally.total() < kSweepDraws) {
      o.ok = false;
      os << "failing " << r.target << " " << tally_text(r.tally) << "; ";
    }
    if (r.status == "QUARANTINED") {
      os << "quarantined " << r.target << " (" << r.correction << ") corrected " << tally_text(r.tally);
      if (r.printed) os << ", printed pass=" << r.printed->pass << " fail=" << r.printed->fail;
      os << "; ";
    }
  }
  os << "records=" << rep.results.size() << " pass=" << pass << " skipped=" << skipped << " min_pass=" << min_pass;
  o.ok = o.ok && rep.results.size() == catalog().size() && secs < kSweepSeconds;
  o.detail = os.str();
  return o;
}

Outcome criterion_degree() {
  Rng rng(kSeed + 9);
  DrawConfig cfg = base_cfg();
  cfg.n_max = kDegreeMaxN;
  int checked = 0, bad = 0;
  while (checked < kDegreeDraws) {
    const auto P = draw_aw<Exact>(rng, cfg);
    std::vector<Exact> ws;
    for (int k = 0; k < P.n + 2; ++k) ws.push_back(gauss(rng));
    try {
      const auto cert = degree_certificate(P, ws);
      const Exact lead = pow_int(Exact(2), P.n) * poch(Exact(P.a1234() * P.q.pow(P.n - 1)), P.q, P.n);
      if (!cert.excess.is_zero() || cert.leading != lead) ++bad;
      ++checked;
    } catch (const Error& e) {
      // Coincident nodes in x; draw again.
      if (e.code() != Errc::InvalidIndices) throw;
    }
  }
  std::ostringstream os;
  os << "checked=" << checked << " mismatches=" << bad;
  return {bad == 0, os.str()};
}

Outcome criterion_determinism() {
  DrawConfig cfg = base_cfg();
  cfg.draws = 20;
  cfg.backend = BackendChoice::Both;
  const std::vector<std::string> targets = {"cor3.3/*", "aw/reps", "series/watson"};
  const std::string a = report_json(run_sweep(cfg, targets), false);
  const std::string b = report_json(run_sweep(cfg, targets), false);
  std::ostringstream os;
  os << "bytes=" << a.size() << (a == b ? " identical" : " differ");
  return {a == b && !a.empty(), os.str()};
}

}  // namespace

int main() {
  report(1, "q-Pochhammer identities (rational)", criterion_poch);
  report(2, "terminating series vs direct summation", criterion_phi);
  report(3, "inversion contracts", criterion_inversion);
  report(4, "Watson transformation and chained 8W7 inversion", criterion_watson);
  report(5, "Askey-Wilson representations agree", criterion_reps);
  report(6, "parameter symmetry and theta flip", criterion_symmetry);
  report(7, "q-inverse representations and scaling", criterion_qinv);
  report(8, "identity catalog sweep", criterion_sweep);
  report(9, "degree certificate", criterion_degree);
  report(10, "deterministic JSON report", criterion_determinism);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
