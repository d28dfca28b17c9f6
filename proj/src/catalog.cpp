#include "qaw/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <tuple>

#include "qaw/random.hpp"

namespace qaw {

namespace {

int slot_index(char c) {
  for (std::size_t k = 0; k < slot_names.size(); ++k)
    if (slot_names[k] == c) return static_cast<int>(k);
  return -1;
}

[[noreturn]] void bad_mono(std::string_view text, std::string_view why) {
  throw Error(Errc::ParseError, "monomial '" + std::string(text) + "': " + std::string(why));
}

int parse_int(std::string_view s, std::string_view text) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) bad_mono(text, "bad integer '" + std::string(s) + "'");
  return v;
}

// Linear exponent in n: "2", "-n", "n+2", "-2n-1", "1-n".
std::pair<int, int> parse_linear(std::string_view s, std::string_view text) {
  int c0 = 0, cn = 0;
  std::size_t i = 0;
  if (s.empty()) bad_mono(text, "empty exponent");
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    const bool has_digits = j > i;
    const int mag = has_digits ? parse_int(s.substr(i, j - i), text) : 1;
    if (j < s.size() && s[j] == 'n') {
      cn += sign * mag;
      ++j;
    } else {
      if (!has_digits) bad_mono(text, "dangling sign in exponent");
      c0 += sign * mag;
    }
    i = j;
  }
  return {c0, cn};
}

std::string linear_to_string(int c0, int cn) {
  std::string out;
  if (cn != 0) {
    if (cn == -1)
      out += "-";
    else if (cn != 1)
      out += std::to_string(cn);
    out += "n";
  }
  if (c0 != 0) {
    if (!out.empty() && c0 > 0) out += "+";
    out += std::to_string(c0);
  }
  return out.empty() ? "0" : out;
}

std::string q_power_string(int c0, int cn) {
  if (cn == 0 && c0 == 1) return "q";
  if (cn == 0 && c0 >= 0) return "q^" + std::to_string(c0);
  return "q^(" + linear_to_string(c0, cn) + ")";
}

}  // namespace

// Accepts the spaced DSL ("q^(n+2) b^2 / c d e f") and the compact display
// form produced by to_string ("q^(n+2)b^2/(cdef)").
Mono Mono::parse(std::string_view text) {
  Mono m;
  bool below = false, grouped = false;
  int factors_above = 0, factors_below = 0;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  skip();
  if (i < text.size() && text[i] == '-') {
    m.sign = -1;
    ++i;
  }
  for (;;) {
    skip();
    if (i >= text.size()) break;
    const char c = text[i];
    if (c == '/') {
      if (below) bad_mono(text, "second '/'");
      below = true;
      ++i;
      skip();
      if (i < text.size() && text[i] == '(') {
        grouped = true;
        ++i;
      }
      continue;
    }
    if (c == ')') {
      if (!grouped) bad_mono(text, "unbalanced parenthesis");
      grouped = false;
      ++i;
      skip();
      if (i < text.size()) bad_mono(text, "text after ')'");
      break;
    }
    ++(below ? factors_below : factors_above);
    if (c == '1') {
      ++i;
      continue;
    }
    const int k = c == 'q' ? -1 : slot_index(c);
    if (c != 'q' && k < 0) bad_mono(text, "unknown symbol '" + std::string(1, c) + "'");
    ++i;
    int c0 = 1, cn = 0;
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i < text.size() && text[i] == '(') {
        const std::size_t close = text.find(')', i);
        if (close == std::string_view::npos) bad_mono(text, "unbalanced parenthesis");
        std::tie(c0, cn) = parse_linear(text.substr(i + 1, close - i - 1), text);
        i = close + 1;
      } else {
        std::size_t j = i;
        if (j < text.size() && text[j] == '-') ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i || (j == i + 1 && text[i] == '-')) bad_mono(text, "missing exponent");
        c0 = parse_int(text.substr(i, j - i), text);
        i = j;
      }
    }
    const int dir = below ? -1 : 1;
    if (k < 0) {
      m.q0 += dir * c0;
      m.qn += dir * cn;
      continue;
    }
    if (cn != 0) bad_mono(text, "slot exponents must be constant");
    m.e[k] += dir * c0;
  }
  if (grouped) bad_mono(text, "unbalanced parenthesis");
  if (factors_above == 0) bad_mono(text, "empty numerator");
  if (below && factors_below == 0) bad_mono(text, "empty denominator");
  return m;
}

std::string Mono::to_string() const {
  std::string top, bottom;
  int bottom_symbols = 0;
  const bool q_below = qn == 0 && q0 < 0;
  if (qn != 0 || q0 > 0) top += q_power_string(q0, qn);
  if (q_below) {
    bottom += q_power_string(-q0, 0);
    ++bottom_symbols;
  }
  for (std::size_t k = 0; k < 5; ++k) {
    const int p = e[k];
    if (p == 0) continue;
    std::string sym(1, slot_names[k]);
    const int mag = p < 0 ? -p : p;
    if (mag != 1) sym += "^" + std::to_string(mag);
    if (p > 0) {
      top += sym;
    } else {
      bottom += sym;
      ++bottom_symbols;
    }
  }
  if (top.empty()) top = "1";
  std::string out = sign < 0 ? "-" + top : top;
  if (!bottom.empty()) out += bottom_symbols > 1 ? "/(" + bottom + ")" : "/" + bottom;
  return out;
}

Mono Mono::operator*(const Mono& o) const {
  Mono m;
  m.sign = sign * o.sign;
  m.q0 = q0 + o.q0;
  m.qn = qn + o.qn;
  for (std::size_t k = 0; k < 5; ++k) m.e[k] = e[k] + o.e[k];
  return m;
}

Mono Mono::inverse() const {
  Mono m;
  m.sign = sign;
  m.q0 = -q0;
  m.qn = -qn;
  for (std::size_t k = 0; k < 5; ++k) m.e[k] = -e[k];
  return m;
}

Mono Mono::pow(int k) const {
  Mono m;
  m.sign = (k % 2 != 0) ? sign : 1;
  m.q0 = q0 * k;
  m.qn = qn * k;
  for (std::size_t j = 0; j < 5; ++j) m.e[j] = e[j] * k;
  return m;
}

Mono Mono::substitute(const std::array<Mono, 5>& map) const {
  Mono m;
  m.sign = sign;
  m.q0 = q0;
  m.qn = qn;
  for (std::size_t k = 0; k < 5; ++k)
    if (e[k] != 0) m = m * map[k].pow(e[k]);
  return m;
}

std::string PochFactor::to_string() const { return base.to_string(); }

std::string PrefactorForm::to_string() const {
  std::string out;
  auto sep = [&] {
    if (!out.empty()) out += " ";
  };
  if (qbinom != 0) {
    out += qbinom == 1 ? "q^binom(n,2)" : "q^(" + std::to_string(qbinom) + "*binom(n,2))";
  }
  if (power) {
    sep();
    out += "(" + power->to_string() + ")^n";
  }
  auto group = [](const std::vector<PochFactor>& fs) {
    std::string single, doubled;
    for (const auto& f : fs) {
      std::string& dst = f.index_mult == 2 ? doubled : single;
      if (!dst.empty()) dst += ", ";
      dst += f.to_string();
    }
    std::string out;
    if (!single.empty()) out += "(" + single + ";q)_n";
    if (!doubled.empty()) out += (out.empty() ? "" : " ") + std::string("(") + doubled + ";q)_2n";
    return out;
  };
  if (!num.empty()) {
    sep();
    out += group(num);
  }
  if (!den.empty()) out += (out.empty() ? std::string("1") : std::string()) + " / " + group(den);
  return out.empty() ? "1" : out;
}

namespace {

std::string join_monos(const std::vector<Mono>& ms) {
  std::string out;
  for (const auto& m : ms) {
    if (!out.empty()) out += ", ";
    out += m.to_string();
  }
  return out;
}

}  // namespace

std::string SeriesForm::to_string() const {
  if (kind == Kind::Phi) {
    return std::to_string(num.size() + 1) + "phi" + std::to_string(den.size()) + "(q^(-n), " +
           join_monos(num) + "; " + join_monos(den) + "; q, " + z.to_string() + ")";
  }
  return std::to_string(lower.size() + 4) + "W" + std::to_string(lower.size() + 3) + "(" + b.to_string() +
         "; q^(-n), " + join_monos(lower) + "; q, " + z.to_string() + ")";
}

std::string Side::to_string() const {
  const std::string p = pre.to_string();
  return p == "1" ? series.to_string() : p + " * " + series.to_string();
}

Side Side::substitute(const std::array<Mono, 5>& map) const {
  Side out = *this;
  auto sub = [&](Mono& m) { m = m.substitute(map); };
  if (out.pre.power) sub(*out.pre.power);
  for (auto& f : out.pre.num) sub(f.base);
  for (auto& f : out.pre.den) sub(f.base);
  for (auto& m : out.series.num) sub(m);
  for (auto& m : out.series.den) sub(m);
  for (auto& m : out.series.lower) sub(m);
  sub(out.series.b);
  sub(out.series.z);
  return out;
}

std::string_view status_name(RecordStatus s) noexcept {
  return s == RecordStatus::Active ? "ACTIVE" : "QUARANTINED";
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

bool glob_match(std::string_view pat, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pat.size() && (pat[p] == '?' || pat[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

// ---------------------------------------------------------------------------
// Record data.

namespace {

Mono M(std::string_view s) { return Mono::parse(s); }
PochFactor twice(std::string_view s) { return {M(s), 2}; }

std::vector<Mono> Ms(std::initializer_list<std::string_view> xs) {
  std::vector<Mono> out;
  for (auto x : xs) out.push_back(M(x));
  return out;
}

PrefactorForm ratio(std::vector<PochFactor> num, std::vector<PochFactor> den, int qbinom = 0,
                    std::string_view power = {}) {
  PrefactorForm p;
  p.qbinom = qbinom;
  if (!power.empty()) p.power = M(power);
  p.num = std::move(num);
  p.den = std::move(den);
  return p;
}

SeriesForm W(std::string_view b, std::initializer_list<std::string_view> lower, std::string_view z) {
  SeriesForm s;
  s.kind = SeriesForm::Kind::Vwp;
  s.b = M(b);
  s.lower = Ms(lower);
  s.z = M(z);
  return s;
}

SeriesForm F(std::initializer_list<std::string_view> num, std::initializer_list<std::string_view> den,
             std::string_view z = "q") {
  SeriesForm s;
  s.kind = SeriesForm::Kind::Phi;
  s.num = Ms(num);
  s.den = Ms(den);
  s.z = M(z);
  return s;
}

Side bare(SeriesForm s) { return {PrefactorForm{}, std::move(s)}; }

std::string summarize_constraints(const IdentityRecord& r) {
  std::vector<std::string> excluded;
  auto add = [&](const std::string& s) {
    if (std::find(excluded.begin(), excluded.end(), s) == excluded.end()) excluded.push_back(s);
  };
  for (const Side* side : {&r.lhs, &r.rhs}) {
    for (const auto& f : side->pre.den) add(f.to_string());
    const auto& s = side->series;
    if (s.kind == SeriesForm::Kind::Phi) {
      for (const auto& m : s.den) add(m.to_string());
    } else {
      add((M("q^(n+1)") * s.b).to_string());
      for (const auto& a : s.lower) add((M("q") * s.b * a.inverse()).to_string());
    }
  }
  std::string out;
  if (r.lhs.series.z == r.rhs.series.z || r.lhs.series.kind == SeriesForm::Kind::Vwp)
    out += "argument " + r.lhs.series.z.to_string() + "; ";
  if (r.balanced) out += "balanced 4phi3 at z=q; ";
  out += "outside Omega_q^n: ";
  for (std::size_t k = 0; k < excluded.size(); ++k) out += (k ? ", " : "") + excluded[k];
  return out;
}

void add(std::vector<IdentityRecord>& out, std::string id, std::string ref, std::string family, Side lhs,
         Side rhs) {
  IdentityRecord r;
  r.id = std::move(id);
  r.ref = std::move(ref);
  r.family = std::move(family);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  auto phi43_at_q = [](const SeriesForm& f) {
    return f.kind == SeriesForm::Kind::Phi && f.num.size() == 3 && f.den.size() == 3 && f.z == M("q");
  };
  auto phi_ok = [&](const SeriesForm& f) { return f.kind != SeriesForm::Kind::Phi || phi43_at_q(f); };
  r.balanced = (phi43_at_q(r.lhs.series) || phi43_at_q(r.rhs.series)) && phi_ok(r.lhs.series) &&
               phi_ok(r.rhs.series);
  r.constraints = summarize_constraints(r);
  out.push_back(std::move(r));
}

void cor33(std::vector<IdentityRecord>& out) {
  const Side head = bare(W("b", {"c", "d", "e", "f"}, "q^(n+2) b^2 / c d e f"));
  const std::string fam = "cor3.3";
  auto rec = [&](const char* eq, Side rhs) {
    add(out, fam + "/" + eq, "Cor 3.3, eq. " + std::string(eq), fam, head, std::move(rhs));
  };
  rec("3.5a.1", {ratio({"q b", "b", "c", "d", "e", "f"}, {twice("b"), "q b / c", "q b / d", "q b / e", "q b / f"},
                       1, "-q^2 b^2 / c d e f"),
                 W("q^(-2n) / b", {"q^(-n) c / b", "q^(-n) d / b", "q^(-n) e / b", "q^(-n) f / b"},
                   "q^(n+2) b^2 / c d e f")});
  rec("3.5a.2", {ratio({"q b / c e", "q b / c f", "q b", "d"}, {"q b / c", "q b / e", "q b / f", "d / c"}),
                 W("q^(-n) c / d", {"q^(-n) c / b", "q b / d e", "q b / d f", "c"}, "e f / b")});
  rec("3.5a.7", {ratio({"q b / d e", "q b / d f", "q b / e f", "q b"}, {"q b / d e f", "q b / d", "q b / e", "q b / f"}),
                 W("q^(-n-1) d e f / b", {"d", "e", "f", "q^(-n-1) c d e f / b^2"}, "q / c")});
  rec("3.5a.7b", {ratio({"q^2 b^2 / c d e f", "q b", "d", "e", "f"},
                        {"q^(-1) d e f / b", "q b / c", "q b / d", "q b / e", "q b / f"}),
                  W("q^(1-n) b / d e f", {"q^(-n) c / b", "q b / d e", "q b / d f", "q b / e f"}, "q / c")});
  rec("3.5a.6", {ratio({"q^2 b^2 / c d e f", "q b"}, {"q b / c", "q^2 b^2 / d e f"}),
                 W("q b^2 / d e f", {"q b / d e", "q b / d f", "q b / e f", "c"}, "q^(n+1) b / c")});
  rec("3.5a.7c",
      {ratio({"q b^2 / d e f", "q b / e f", "q b / d e", "q b / d f", "q b", "c"},
             {twice("q b^2 / d e f"), "q b / c", "q b / d", "q b / e", "q b / f"}, 1, "-q b / c"),
       W("q^(-2n-1) d e f / b^2", {"q^(-n) d / b", "q^(-n) e / b", "q^(-n) f / b", "q^(-n-1) c d e f / b^2"},
         "q^(n+1) b / c")});
  rec("3.5a.3", {ratio({"q b / c d", "q b"}, {"q b / c", "q b / d"}),
                 F({"q b / e f", "c", "d"}, {"q^(-n) c d / b", "q b / e", "q b / f"})});
  rec("3.5a.4", {ratio({"q b / c d", "q b", "e", "f"}, {"q b / c", "q b / d", "q b / e", "q b / f"}, 0, "q b / e f"),
                 F({"q^(-n) c / b", "q^(-n) d / b", "q b / e f"}, {"q^(-n) c d / b", "q^(1-n) / e", "q^(1-n) / f"})});
  rec("3.5a.5", {ratio({"q^2 b^2 / c d e f", "q b", "c"}, {"q b / d", "q b / e", "q b / f"}),
                 F({"q b / c d", "q b / c e", "q b / c f"}, {"q^2 b^2 / c d e f", "q^(1-n) / c", "q b / c"})});
  rec("3.5a.6b", {ratio({"q b / c d", "q b / c e", "q b / c f", "q b"}, {"q b / c", "q b / d", "q b / e", "q b / f"}, 0, "c"),
                  F({"q^(-n-1) c d e f / b^2", "q^(-n) c / b", "c"}, {"q^(-n) c d / b", "q^(-n) c e / b", "q^(-n) c f / b"})});
}

void cor35(std::vector<IdentityRecord>& out) {
  const Side head = bare(W("q^(-n) c / d", {"q^(-n) c / b", "q b / d e", "q b / d f", "c"}, "e f / b"));
  auto rec = [&](const char* r, PrefactorForm pre, SeriesForm s) {
    add(out, std::string("cor3.5/") + r, "Cor 3.5, eq. cor3.5:" + std::string(r), "cor3.5", head,
        {std::move(pre), std::move(s)});
  };
  rec("r2", ratio({"q b / d e", "q b / d f", "q b / c", "d / c", "c"}, {"q b / c e", "q b / c f", "q b / d", "c / d", "d"}),
      W("q^(-n) d / c", {"q^(-n) d / b", "q b / c e", "q b / c f", "d"}, "e f / b"));
  rec("r3", ratio({"q b / c d", "q b / e", "d / c", "e"}, {"q b / c e", "q b / d", "e / c", "d"}),
      W("q^(-n) c / e", {"q^(-n) c / b", "q b / d e", "q b / e f", "c"}, "d f / b"));
  rec("r4", ratio({"q b / d e", "q b / e f", "q b / c", "d / c", "c"}, {"q b / c e", "q b / c f", "q b / d", "c / e", "d"}),
      W("q^(-n) e / c", {"q^(-n) e / b", "q b / c d", "q b / c f", "e"}, "d f / b"));
  rec("r5", ratio({"q b / c d", "q b / f", "d / c", "f"}, {"q b / c f", "q b / d", "f / c", "d"}),
      W("q^(-n) c / f", {"q^(-n) c / b", "q b / e f", "q b / d f", "c"}, "d e / b"));
  rec("r6", ratio({"q b / d f", "q b / e f", "q b / c", "d / c", "c"}, {"q b / c e", "q b / c f", "q b / d", "c / f", "d"}),
      W("q^(-n) f / c", {"q^(-n) f / b", "q b / c d", "q b / c e", "f"}, "d e / b"));
  rec("r7", ratio({"q b / e f", "d / c"}, {"q b / c f", "d / e"}),
      W("q^(-n) e / d", {"q^(-n) e / b", "q b / c d", "q b / d f", "e"}, "c f / b"));
  rec("r8", ratio({"q b / c d", "q b / d f", "q b / e", "d / c", "e"}, {"q b / c e", "q b / c f", "q b / d", "e / d", "d"}),
      W("q^(-n) d / e", {"q^(-n) d / b", "q b / c e", "q b / e f", "d"}, "c f / b"));
  rec("r9", ratio({"q b / e f", "d / c"}, {"q b / c e", "d / f"}),
      W("q^(-n) f / d", {"q^(-n) f / b", "q b / c d", "q b / d e", "f"}, "c e / b"));
  rec("r10", ratio({"q b / d e", "q b / c d", "q b / f", "d / c", "f"}, {"q b / c e", "q b / c f", "q b / d", "f / d", "d"}),
      W("q^(-n) d / f", {"q^(-n) d / b", "q b / c f", "q b / e f", "d"}, "c e / b"));
  rec("r11", ratio({"q b / d e", "q b / f", "d / c", "f"}, {"q b / c f", "q b / d", "f / e", "d"}),
      W("q^(-n) e / f", {"q^(-n) e / b", "q b / c f", "q b / d f", "e"}, "c d / b"));
  rec("r12", ratio({"q b / d f", "q b / e", "d / c", "e"}, {"q b / c e", "q b / d", "e / f", "d"}),
      W("q^(-n) f / e", {"q^(-n) f / b", "q b / c e", "q b / d e", "f"}, "c d / b"));
}

Side cor36_head() { return bare(W("q b^2 / d e f", {"q b / d e", "q b / d f", "q b / e f", "c"}, "q^(n+1) b / c")); }
Side cor38_head() { return bare(F({"q b / e f", "c", "d"}, {"q^(-n) c d / b", "q b / e", "q b / f"})); }
Side cor310_head() {
  return bare(F({"q b / c d", "q b / c e", "q b / c f"}, {"q^2 b^2 / c d e f", "q^(1-n) / c", "q b / c"}));
}

void cor36(std::vector<IdentityRecord>& out) {
  auto rec = [&](const char* r, PrefactorForm pre, SeriesForm s) {
    add(out, std::string("cor3.6/") + r, "Cor 3.6, eq. cor3.6:" + std::string(r), "cor3.6", cor36_head(),
        {std::move(pre), std::move(s)});
  };
  rec("r2", ratio({"q b / c", "q^2 b^2 / d e f"}, {"q b / d", "q^2 b^2 / c e f"}),
      W("q b^2 / c e f", {"q b / c e", "q b / c f", "q b / e f", "d"}, "q^(n+1) b / d"));
  rec("r3", ratio({"q b / c", "q^2 b^2 / d e f"}, {"q b / e", "q^2 b^2 / c d f"}),
      W("q b^2 / c d f", {"q b / c d", "q b / c f", "q b / d f", "e"}, "q^(n+1) b / e"));
  rec("r4", ratio({"q b / c", "q^2 b^2 / d e f"}, {"q b / f", "q^2 b^2 / c d e"}),
      W("q b^2 / c d e", {"q b / c d", "q b / c e", "q b / d e", "f"}, "q^(n+1) b / f"));
}

void cor38(std::vector<IdentityRecord>& out) {
  auto rec = [&](const char* r, PrefactorForm pre, SeriesForm s) {
    add(out, std::string("cor3.8/") + r, "Cor 3.8, eq. cor3.8:" + std::string(r), "cor3.8", cor38_head(),
        {std::move(pre), std::move(s)});
  };
  rec("r2", ratio({"q b / d e", "q b / c"}, {"q b / c d", "q b / e"}),
      F({"q b / c f", "d", "e"}, {"q^(-n) d e / b", "q b / c", "q b / f"}));
  rec("r3", ratio({"q b / d f", "q b / c"}, {"q b / c d", "q b / f"}),
      F({"q b / c e", "d", "f"}, {"q^(-n) d f / b", "q b / c", "q b / e"}));
  rec("r4", ratio({"q b / c e", "q b / d"}, {"q b / c d", "q b / e"}),
      F({"q b / d f", "c", "e"}, {"q^(-n) c e / b", "q b / d", "q b / f"}));
  rec("r5", ratio({"q b / c f", "q b / d"}, {"q b / c d", "q b / f"}),
      F({"q b / d e", "c", "f"}, {"q^(-n) c f / b", "q b / d", "q b / e"}));
  rec("r6", ratio({"q b / e f", "q b / c", "q b / d"}, {"q b / d e", "q b / e", "q b / f"}),
      F({"q b / c d", "e", "f"}, {"q^(-n) e f / b", "q b / c", "q b / d"}));
}

void cor310(std::vector<IdentityRecord>& out) {
  auto rec = [&](const char* r, PrefactorForm pre, SeriesForm s) {
    add(out, std::string("cor3.10/") + r, "Cor 3.10, eq. cor3.10:" + std::string(r), "cor3.10", cor310_head(),
        {std::move(pre), std::move(s)});
  };
  rec("r2", ratio({"q b / d", "d"}, {"q b / c", "c"}),
      F({"q b / c d", "q b / d e", "q b / d f"}, {"q^2 b^2 / c d e f", "q^(1-n) / d", "q b / d"}));
  rec("r3", ratio({"q b / e", "e"}, {"q b / c", "c"}),
      F({"q b / d e", "q b / c e", "q b / e f"}, {"q^2 b^2 / c d e f", "q^(1-n) / e", "q b / e"}));
  rec("r4", ratio({"q b / f", "f"}, {"q b / c", "c"}),
      F({"q b / d f", "q b / e f", "q b / c f"}, {"q^2 b^2 / c d e f", "q^(1-n) / f", "q b / f"}));
}

std::array<Mono, 5> slot_map(std::initializer_list<std::string_view> xs) {
  std::array<Mono, 5> m;
  std::size_t k = 0;
  for (auto x : xs) m[k++] = M(x);
  return m;
}

// The remark maps send each sibling family's head into the corresponding
// cor3.3 series; the linking multiplier is 1.
void remarks(std::vector<IdentityRecord>& out) {
  add(out, "rem3.6/3.5a.7", "Remark after Cor 3.6 (first map, onto eq. cor3.5a.7)", "rem3.6",
      cor36_head().substitute(slot_map({"q^(-2n-1) d e f / b^2", "q^(-n-1) c d e f / b^2", "q^(-n) f / b",
                                        "q^(-n) e / b", "q^(-n) d / b"})),
      bare(W("q^(-n-1) d e f / b", {"d", "e", "f", "q^(-n-1) c d e f / b^2"}, "q / c")));
  add(out, "rem3.8/3.5a.4", "Remark after Cor 3.8 (onto eq. cor3.5a.4)", "rem3.8",
      cor38_head().substitute(
          slot_map({"q^(-2n) / b", "q^(-n) c / b", "q^(-n) d / b", "q^(-n) e / b", "q^(-n) f / b"})),
      bare(F({"q^(-n) c / b", "q^(-n) d / b", "q b / e f"}, {"q^(-n) c d / b", "q^(1-n) / e", "q^(1-n) / f"})));
  add(out, "rem3.10/3.5a.6b", "Remark after Cor 3.10 (onto eq. cor3.5a.6b)", "rem3.10",
      cor310_head().substitute(slot_map({"q^(-n) f / e", "q b / c e", "q b / d e", "f", "q^(-n) f / b"})),
      bare(F({"q^(-n-1) c d e f / b^2", "q^(-n) c / b", "c"}, {"q^(-n) c d / b", "q^(-n) c e / b", "q^(-n) c f / b"})));
}

// ---------------------------------------------------------------------------
// Audit.

constexpr std::uint64_t audit_seed = 0x51a7c0ffee;
constexpr int audit_draws = 4;
constexpr int confirm_draws = 8;

std::vector<Draw<Exact>> audit_sample(const IdentityRecord& rec, int count, std::uint64_t salt) {
  Rng rng = Rng(audit_seed ^ salt).substream(rec.id);
  std::vector<Draw<Exact>> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts++ < 50 * count) {
    std::array<Exact, 5> x;
    for (auto& v : x) v = small_gaussian(rng, 29);
    Exact q = small_rational(rng, 29);
    if (q.norm() == 1) continue;
    Draw<Exact> d{x, QBase<Exact>(q), 2 + static_cast<int>(out.size()) % 4};
    const auto o = check_sides(rec.lhs, rec.lhs, d);
    const auto o2 = check_sides(rec.rhs, rec.rhs, d);
    if (o.verdict == Verdict::Skipped || o2.verdict == Verdict::Skipped) continue;
    out.push_back(std::move(d));
  }
  return out;
}

bool passes_all(const Side& lhs, const Side& rhs, const std::vector<Draw<Exact>>& draws) {
  for (const auto& d : draws) {
    const auto o = check_sides(lhs, rhs, d);
    if (o.verdict == Verdict::Fail) return false;
  }
  return true;
}

}  // namespace

bool audit_record(IdentityRecord& rec, const std::vector<Mono>& vocabulary) {
  const auto draws = audit_sample(rec, audit_draws, 0);
  if (passes_all(rec.lhs, rec.rhs, draws)) return false;
  rec.status = RecordStatus::Quarantined;
  const auto confirm = audit_sample(rec, confirm_draws, 1);
  struct Slot {
    std::vector<PochFactor>* list;
    const char* name;
  };
  Side candidate = rec.rhs;
  for (Slot slot : {Slot{&candidate.pre.num, "numerator"}, Slot{&candidate.pre.den, "denominator"}}) {
    for (auto& factor : *slot.list) {
      const PochFactor original = factor;
      for (const Mono& v : vocabulary) {
        if (v == original.base) continue;
        factor.base = v;
        if (passes_all(rec.lhs, candidate, draws) && passes_all(rec.lhs, candidate, confirm)) {
          rec.correction = Correction{std::string(slot.name) + " factor " + original.to_string() + " -> " +
                                          v.to_string(),
                                      candidate};
          return true;
        }
      }
      factor = original;
    }
  }
  return true;
}

std::vector<IdentityRecord> printed_catalog() {
  std::vector<IdentityRecord> out;
  cor33(out);
  cor35(out);
  cor36(out);
  cor38(out);
  cor310(out);
  remarks(out);
  return out;
}

namespace {

std::vector<IdentityRecord> build_catalog() {
  auto records = printed_catalog();
  std::map<std::string, std::vector<Mono>> vocab;
  for (const auto& r : records) {
    auto& v = vocab[r.family];
    auto put = [&](const Mono& m) {
      if (std::find(v.begin(), v.end(), m) == v.end()) v.push_back(m);
    };
    for (const Side* s : {&r.lhs, &r.rhs}) {
      for (const auto& f : s->pre.num) put(f.base);
      for (const auto& f : s->pre.den) put(f.base);
    }
  }
  for (auto& r : records) audit_record(r, vocab[r.family]);
  return records;
}

}  // namespace

const std::vector<IdentityRecord>& catalog() {
  static const std::vector<IdentityRecord> records = build_catalog();
  return records;
}

const IdentityRecord* find_record(std::string_view id) {
  for (const auto& r : catalog())
    if (r.id == id) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------

Derivation derive_from_aw(std::string_view record_id) {
  static const std::map<std::string, AwMapping, std::less<>> table = {
      {"3.5a.1", {{RepTag::WDef4}, true}},   {"3.5a.2", {{RepTag::WDef5}, false}},
      {"3.5a.7", {{RepTag::WDef7}, false}},  {"3.5a.7b", {{RepTag::WDef6}, true}},
      {"3.5a.6", {{RepTag::WDef6}, false}},  {"3.5a.7c", {{RepTag::WDef7}, true}},
      {"3.5a.3", {{RepTag::PhiMixed}, false}}, {"3.5a.4", {{RepTag::PhiMixed}, true}},
      {"3.5a.5", {{RepTag::PhiInv}, false}}, {"3.5a.6b", {{RepTag::PhiStd}, false}},
  };
  constexpr std::string_view prefix = "cor3.3/";
  if (record_id.substr(0, prefix.size()) != prefix)
    throw Error(Errc::NotACor33Record, std::string(record_id) + " is not a Cor 3.3 record");
  const auto it = table.find(record_id.substr(prefix.size()));
  if (it == table.end()) throw Error(Errc::NotACor33Record, std::string(record_id) + " is not a Cor 3.3 record");
  Derivation d;
  d.record_id = std::string(record_id);
  d.lhs = {{RepTag::WDef4}, false};
  d.rhs = it->second;
  d.substitution =
      "e^{2i theta} = q^n b, a_1 = q^(-n/2) c/sqrt(b), a_2 = q^(-n/2) d/sqrt(b), a_3 = q^(-n/2) e/sqrt(b), "
      "a_4 = q^(-n/2) f/sqrt(b), roles (p,r,t,u) = (1,2,3,4); evaluated radical-free with b = beta^2, q = kappa^2";
  d.multiplier = "A_n = q^(2 binom(n,2)) (-1)^n (qb)^(5n/2) (qb;q)_n / ((cdef)^n (qb/c, qb/d, qb/e, qb/f;q)_n)";
  return d;
}

}  // namespace qaw
