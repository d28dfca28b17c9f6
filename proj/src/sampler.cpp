#include "qaw/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace qaw {

void DrawConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(Errc::ParseError, "invalid draw config: " + why); };
  if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0)) fail("q modulus range must satisfy 0 < lo < hi < 1");
  if (!(mod_lo > 0.0 && mod_lo < mod_hi)) fail("parameter modulus range must satisfy 0 < lo < hi");
  if (n_min < 0 || n_min > n_max) fail("n range must satisfy 0 <= n_min <= n_max");
  if (draws < 0) fail("draws must be nonnegative");
  if (rational_bound < 2) fail("rational bound must be at least 2");
  if (!(pole_eps > 0.0)) fail("pole_eps must be positive");
  if (!(epsilon_unit > 0.0)) fail("epsilon_unit must be positive");
  if (rel_tol < 0.0 || abs_tol < 0.0) fail("tolerances must be nonnegative");
  if (!(cond_cap > 0.0)) fail("cond_cap must be positive");
  if (max_rejections < 1) fail("max_rejections must be positive");
}

CheckConfig DrawConfig::check_config() const {
  CheckConfig c;
  c.eval.pole_eps = pole_eps;
  c.tol = {rel_tol, abs_tol};
  c.cond_cap = cond_cap;
  return c;
}

std::string_view backend_choice_name(BackendChoice b) noexcept {
  switch (b) {
    case BackendChoice::Float: return "float";
    case BackendChoice::Rational: return "rational";
    case BackendChoice::Both: return "both";
  }
  return "?";
}

std::string_view q_regime_name(QRegime r) noexcept {
  switch (r) {
    case QRegime::Inside: return "inside";
    case QRegime::Mirrored: return "mirrored";
    case QRegime::Both: return "both";
  }
  return "?";
}

namespace {

bool pick_mirrored(Rng& rng, const DrawConfig& cfg) {
  switch (cfg.q_regime) {
    case QRegime::Inside: return false;
    case QRegime::Mirrored: return true;
    case QRegime::Both: return rng.coin();
  }
  return false;
}

}  // namespace

template <>
Complex draw_scalar<Complex>(Rng& rng, const DrawConfig& cfg) {
  const double r = std::exp(rng.uniform(std::log(cfg.mod_lo), std::log(cfg.mod_hi)));
  return std::polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

template <>
Exact draw_scalar<Exact>(Rng& rng, const DrawConfig& cfg) {
  return small_gaussian(rng, cfg.rational_bound);
}

template <>
QBase<Complex> draw_q<Complex>(Rng& rng, const DrawConfig& cfg) {
  const bool mirrored = pick_mirrored(rng, cfg);
  double r = rng.uniform(cfg.q_lo, cfg.q_hi);
  if (mirrored) r = 1.0 / r;
  const double arg = cfg.q_complex ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0;
  return QBase<Complex>(std::polar(r, arg), cfg.epsilon_unit);
}

template <>
QBase<Exact> draw_q<Exact>(Rng& rng, const DrawConfig& cfg) {
  const bool mirrored = pick_mirrored(rng, cfg);
  const mpq_class lo2 = cfg.q_lo * cfg.q_lo;
  const mpq_class hi2 = cfg.q_hi * cfg.q_hi;
  for (;;) {
    Exact q = small_gaussian(rng, cfg.rational_bound, 0.2);
    const mpq_class nrm = q.norm();
    if (nrm <= lo2 || nrm >= hi2) continue;
    return QBase<Exact>(mirrored ? q.inverse() : q, cfg.epsilon_unit);
  }
}

template <>
Complex draw_w<Complex>(Rng& rng, const DrawConfig&) {
  return std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

template <>
Exact draw_w<Exact>(Rng& rng, const DrawConfig& cfg) {
  if (rng.coin()) {
    // ((s^2 - t^2) + 2st i) / (s^2 + t^2) has modulus one.
    const long s = rng.integer(1, 9) * (rng.coin() ? 1 : -1);
    const long t = rng.integer(1, 9);
    const long den = s * s + t * t;
    return Exact::from_ratio(s * s - t * t, den, 2 * s * t, den);
  }
  return small_gaussian(rng, cfg.rational_bound);
}

int draw_n(Rng& rng, const DrawConfig& cfg) { return rng.integer(cfg.n_min, cfg.n_max); }

namespace {

[[noreturn]] void exhausted(const std::string& what, int limit) {
  throw Error(Errc::SamplerExhausted,
              what + ": no admissible draw after " + std::to_string(limit) + " rejections");
}

}  // namespace

template <Scalar S>
Draw<S> draw_params(Rng& rng, const DrawConfig& cfg, const IdentityRecord& rec, long* rejections) {
  long rejected = 0;
  for (;;) {
    std::array<S, 5> x;
    for (auto& v : x) v = draw_scalar<S>(rng, cfg);
    QBase<S> q = draw_q<S>(rng, cfg);
    const int n = draw_n(rng, cfg);
    Draw<S> d{x, q, n};
    bool ok = !side_guard(rec.lhs, d, cfg.pole_eps) && !side_guard(rec.effective_rhs(), d, cfg.pole_eps);
    if (ok && rec.correction) ok = !side_guard(rec.rhs, d, cfg.pole_eps);
    if (ok) {
      if (rejections) *rejections += rejected;
      return d;
    }
    if (++rejected >= cfg.max_rejections) exhausted(rec.id, cfg.max_rejections);
  }
}

template <Scalar S>
AWParams<S> draw_aw(Rng& rng, const DrawConfig& cfg, long* rejections) {
  long rejected = 0;
  for (;;) {
    std::array<S, 4> a;
    for (auto& v : a) v = draw_scalar<S>(rng, cfg);
    QBase<S> q = draw_q<S>(rng, cfg);
    S w = draw_w<S>(rng, cfg);
    const int n = draw_n(rng, cfg);
    AWParams<S> P(a, q, w, n);
    try {
      (void)eval_rep(P, {}, EvalOptions{cfg.pole_eps});
      if (rejections) *rejections += rejected;
      return P;
    } catch (const Error& e) {
      if (e.code() != Errc::PoleGuard) throw;
    }
    if (++rejected >= cfg.max_rejections) exhausted("Askey-Wilson draw", cfg.max_rejections);
  }
}

template <Scalar S>
SeriesSpec<S> draw_balanced_phi(Rng& rng, const DrawConfig& cfg, long* rejections) {
  long rejected = 0;
  const EvalOptions opts{cfg.pole_eps};
  for (;;) {
    std::array<S, 5> x;
    for (auto& v : x) v = draw_scalar<S>(rng, cfg);
    QBase<S> q = draw_q<S>(rng, cfg);
    const int n = draw_n(rng, cfg);
    const S f = q.pow(1 - n) * x[0] * x[1] * x[2] / (x[3] * x[4]);
    try {
      SeriesSpec<S> spec({x[0], x[1], x[2]}, {x[3], x[4], f}, n, q.value(), q, opts);
      auto ww = watson_whipple(spec, {}, opts);
      (void)invert_w(ww.w, opts);
      if (rejections) *rejections += rejected;
      return spec;
    } catch (const Error& e) {
      if (!detail::is_guard(e.code())) throw;
    }
    if (++rejected >= cfg.max_rejections) exhausted("balanced 4phi3 draw", cfg.max_rejections);
  }
}

template Draw<Complex> draw_params<Complex>(Rng&, const DrawConfig&, const IdentityRecord&, long*);
template Draw<Exact> draw_params<Exact>(Rng&, const DrawConfig&, const IdentityRecord&, long*);
template AWParams<Complex> draw_aw<Complex>(Rng&, const DrawConfig&, long*);
template AWParams<Exact> draw_aw<Exact>(Rng&, const DrawConfig&, long*);
template SeriesSpec<Complex> draw_balanced_phi<Complex>(Rng&, const DrawConfig&, long*);
template SeriesSpec<Exact> draw_balanced_phi<Exact>(Rng&, const DrawConfig&, long*);

void Tally::add(Verdict v) {
  switch (v) {
    case Verdict::Pass: ++pass; break;
    case Verdict::Fail: ++fail; break;
    case Verdict::Inconclusive: ++inconclusive; break;
    case Verdict::Skipped: ++skipped; break;
  }
}

bool SweepReport::any_fail() const {
  return std::any_of(results.begin(), results.end(), [](const TargetResult& r) { return r.tally.fail > 0; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"aw/reps",  "aw/symmetry",     "aw/theta-flip",
                                                 "aw/qinv", "aw/qinv-scaling", "series/watson"};
  return names;
}

std::vector<std::string> expand_targets(const std::vector<std::string>& patterns) {
  std::vector<std::string> universe;
  for (const auto& r : catalog()) universe.push_back(r.id);
  for (const auto& s : suite_names()) universe.push_back(s);
  std::vector<bool> chosen(universe.size(), false);
  for (const auto& pat : patterns) {
    const bool wild = pat.find_first_of("*?") != std::string::npos;
    bool hit = false;
    for (std::size_t k = 0; k < universe.size(); ++k) {
      if (glob_match(pat, universe[k])) {
        chosen[k] = true;
        hit = true;
      }
    }
    if (!hit && !wild) throw Error(Errc::UnknownTarget, "unknown target '" + pat + "'");
  }
  std::vector<std::string> out;
  for (std::size_t k = 0; k < universe.size(); ++k)
    if (chosen[k]) out.push_back(universe[k]);
  return out;
}

namespace {

// One comparison folded into a verdict. Float: tolerance relative to the
// error scale, INCONCLUSIVE when conditioning exceeds the cap.
struct Comparison {
  double deviation = 0.0;
  double scale = 0.0;
  double condition = 0.0;
  bool exact_zero = true;
};

template <Scalar S>
Verdict judge(const Comparison& c, const DrawConfig& cfg) {
  if constexpr (scalar_traits<S>::exact) {
    return c.exact_zero ? Verdict::Pass : Verdict::Fail;
  } else {
    if (c.deviation <= cfg.rel_tol * c.scale + cfg.abs_tol) return Verdict::Pass;
    return c.condition > cfg.cond_cap ? Verdict::Inconclusive : Verdict::Fail;
  }
}

template <Scalar S>
double normalized(const Comparison& c) {
  if constexpr (scalar_traits<S>::exact) return c.deviation;
  return c.scale > 0.0 ? c.deviation / c.scale : c.deviation;
}

template <Scalar S>
void fold(Comparison& c, const RepValue<S>& x, const RepValue<S>& y) {
  const S diff = x.value - y.value;
  c.exact_zero = c.exact_zero && is_zero(diff);
  c.deviation = std::max(c.deviation, magnitude(diff));
  c.scale = std::max({c.scale, x.error_scale, y.error_scale, magnitude(x.value), magnitude(y.value)});
  c.condition = std::max({c.condition, x.condition(), y.condition()});
}

template <Scalar S>
std::string describe(const std::array<S, 5>& x, const QBase<S>& q, int n) {
  std::string out;
  for (std::size_t k = 0; k < 5; ++k) out += std::string(1, slot_names[k]) + "=" + format(x[k]) + " ";
  return out + "q=" + format(q.value()) + " n=" + std::to_string(n);
}

template <Scalar S>
std::string describe(const AWParams<S>& P) {
  std::string out;
  for (std::size_t k = 0; k < 4; ++k) out += "a" + std::to_string(k + 1) + "=" + format(P.a[k]) + " ";
  return out + "w=" + format(P.w) + " q=" + format(P.q.value()) + " n=" + std::to_string(P.n);
}

template <Scalar S>
std::string describe(const SeriesSpec<S>& s) {
  std::string out = "num=";
  for (const auto& x : s.num) out += format(x) + ",";
  out += " den=";
  for (const auto& x : s.den) out += format(x) + ",";
  return out + " q=" + format(s.q.value()) + " n=" + std::to_string(s.n);
}

void note_worst(TargetResult& r, double dev, double cond, const std::string& draw) {
  if (dev > r.worst_deviation || (r.worst_draw.empty() && !draw.empty() && dev >= r.worst_deviation)) {
    r.worst_deviation = dev;
    r.worst_draw = draw;
  }
  r.worst_condition = std::max(r.worst_condition, cond);
}

template <Scalar S>
void sweep_record(const IdentityRecord& rec, const DrawConfig& cfg, Rng rng, TargetResult& out) {
  const CheckConfig cc = cfg.check_config();
  if (rec.correction) out.printed = Tally{};
  for (int i = 0; i < cfg.draws; ++i) {
    const Draw<S> d = draw_params<S>(rng, cfg, rec, &out.rejections);
    const CheckOutcome o = check(rec, d, cc);
    out.tally.add(o.verdict);
    if (o.verdict != Verdict::Skipped) {
      const double dev = scalar_traits<S>::exact ? o.deviation : (o.scale > 0 ? o.deviation / o.scale : o.deviation);
      note_worst(out, dev, o.condition, describe(d.x, d.q, d.n));
    }
    if (out.printed) out.printed->add(check(rec, d, cc, Variant::Printed).verdict);
  }
}

template <Scalar S>
std::optional<RepValue<S>> try_rep(const AWParams<S>& P, const RepId& rep, const EvalOptions& opts, bool qinv = false) {
  try {
    return qinv ? eval_qinv_rep(P, rep, opts) : eval_rep(P, rep, opts);
  } catch (const Error& e) {
    if (e.code() != Errc::PoleGuard) throw;
    return std::nullopt;
  }
}

template <Scalar S>
void sweep_suite(const std::string& name, const DrawConfig& cfg, Rng rng, TargetResult& out) {
  const EvalOptions opts{cfg.pole_eps};
  for (int i = 0; i < cfg.draws; ++i) {
    Comparison c;
    int compared = 0;
    std::string draw;
    if (name == "series/watson") {
      const SeriesSpec<S> spec = draw_balanced_phi<S>(rng, cfg, &out.rejections);
      draw = describe(spec);
      const auto lhs = eval_phi(spec, opts);
      const auto ww = watson_whipple(spec, {}, opts);
      const auto wv = eval_w(ww.w, opts);
      const auto inv = invert_w(ww.w, opts);
      const auto iv = eval_w(inv.spec, opts);
      const RepValue<S> a{lhs.value, S(1), lhs, lhs.trace.error_scale, lhs.trace.abs_scale};
      const RepValue<S> b{ww.prefactor * wv.value, ww.prefactor, wv,
                          magnitude(ww.prefactor) * wv.trace.error_scale, 0.0};
      const S pre2 = ww.prefactor * inv.prefactor;
      const RepValue<S> chained{pre2 * iv.value, pre2, iv, magnitude(pre2) * iv.trace.error_scale, 0.0};
      fold(c, a, b);
      fold(c, a, chained);
      compared = 2;
    } else {
      const AWParams<S> P = draw_aw<S>(rng, cfg, &out.rejections);
      draw = describe(P);
      if (name == "aw/reps" || name == "aw/qinv") {
        const bool qinv = name == "aw/qinv";
        std::vector<RepValue<S>> vals;
        if (qinv) {
          if (auto direct = try_rep(P.with_q(P.q.inverted()), {}, opts)) vals.push_back(*direct);
        }
        for (RepTag tag : all_rep_tags) {
          RepId rep;
          rep.tag = tag;
          if (auto v = try_rep(P, rep, opts, qinv)) vals.push_back(*v);
        }
        for (std::size_t k = 1; k < vals.size(); ++k) fold(c, vals[0], vals[k]);
        compared = static_cast<int>(vals.size()) - 1;
      } else if (name == "aw/symmetry") {
        const auto base = try_rep(P, {}, opts);
        std::array<int, 4> perm = {0, 1, 2, 3};
        do {
          const auto v = try_rep(P.permuted(perm), {}, opts);
          if (base && v) {
            fold(c, *base, *v);
            ++compared;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      } else if (name == "aw/theta-flip") {
        for (RepTag tag : all_rep_tags) {
          RepId rep;
          rep.tag = tag;
          const auto v = try_rep(P, rep, opts);
          const auto f = try_rep(P.flipped(), rep, opts);
          if (v && f) {
            fold(c, *v, *f);
            ++compared;
          }
        }
      } else if (name == "aw/qinv-scaling") {
        const auto lhs = try_rep(P.with_q(P.q.inverted()), {}, opts);
        const auto recip = P.reciprocal_params();
        const auto r1 = try_rep(recip.flipped(), {}, opts);
        const auto r2 = try_rep(recip, {}, opts);
        const S factor = P.q.pow(-3 * binom2(P.n)) * pow_int(S(-P.a1234()), P.n);
        for (const auto& r : {r1, r2}) {
          if (!lhs || !r) continue;
          RepValue<S> scaled = *r;
          scaled.value = factor * r->value;
          scaled.error_scale = magnitude(factor) * r->error_scale;
          fold(c, *lhs, scaled);
          ++compared;
        }
      }
    }
    if (compared == 0) {
      out.tally.add(Verdict::Skipped);
      continue;
    }
    out.tally.add(judge<S>(c, cfg));
    note_worst(out, normalized<S>(c), c.condition, draw);
  }
}

template <Scalar S>
TargetResult run_target(const std::string& target, const DrawConfig& cfg) {
  TargetResult out;
  out.target = target;
  out.backend = scalar_traits<S>::exact ? "rational" : "float";
  const Rng rng = Rng(cfg.seed).substream(target + "#" + out.backend);
  if (const IdentityRecord* rec = find_record(target)) {
    out.ref = rec->ref;
    out.status = std::string(status_name(rec->status));
    if (rec->correction) out.correction = rec->correction->description;
    sweep_record<S>(*rec, cfg, rng, out);
  } else {
    out.ref = "suite";
    sweep_suite<S>(target, cfg, rng, out);
  }
  return out;
}

}  // namespace

SweepReport run_sweep(const DrawConfig& cfg, const std::vector<std::string>& patterns) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SweepReport report;
  report.cfg = cfg;
  for (const auto& target : expand_targets(patterns)) {
    if (cfg.backend != BackendChoice::Float) report.results.push_back(run_target<Exact>(target, cfg));
    if (cfg.backend != BackendChoice::Rational) report.results.push_back(run_target<Complex>(target, cfg));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

nlohmann::ordered_json tally_json(const Tally& t) {
  return {{"pass", t.pass}, {"fail", t.fail}, {"inconclusive", t.inconclusive}, {"skipped", t.skipped}};
}

}  // namespace

std::string report_json(const SweepReport& report, bool include_timing, int indent) {
  using nlohmann::ordered_json;
  const DrawConfig& c = report.cfg;
  ordered_json j;
  j["seed"] = c.seed;
  j["config"] = {{"q_modulus_range", {c.q_lo, c.q_hi}},
                 {"q_regime", q_regime_name(c.q_regime)},
                 {"q_complex", c.q_complex},
                 {"modulus_range", {c.mod_lo, c.mod_hi}},
                 {"n_range", {c.n_min, c.n_max}},
                 {"draws_per_record", c.draws},
                 {"backend", backend_choice_name(c.backend)},
                 {"rational_bound", c.rational_bound},
                 {"pole_eps", c.pole_eps},
                 {"epsilon_unit", c.epsilon_unit},
                 {"rel_tol", c.rel_tol},
                 {"abs_tol", c.abs_tol},
                 {"cond_cap", c.cond_cap},
                 {"max_rejections", c.max_rejections}};
  ordered_json records = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json e;
    e["record_id"] = r.target;
    e["ref"] = r.ref;
    e["backend"] = r.backend;
    e["status"] = r.status;
    e["pass"] = r.tally.pass;
    e["fail"] = r.tally.fail;
    e["inconclusive"] = r.tally.inconclusive;
    e["skipped"] = r.tally.skipped;
    e["rejections"] = r.rejections;
    e["worst_deviation"] = r.worst_deviation;
    e["worst_condition"] = r.worst_condition;
    e["worst_draw"] = r.worst_draw;
    if (!r.correction.empty()) e["correction"] = r.correction;
    if (r.printed) e["printed_variant"] = tally_json(*r.printed);
    records.push_back(std::move(e));
  }
  j["records"] = std::move(records);
  if (include_timing) j["timing"] = {{"wall_seconds", report.wall_seconds}};
  return j.dump(indent);
}

}  // namespace qaw
