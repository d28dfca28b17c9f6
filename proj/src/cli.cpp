#include "qaw/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaw/sampler.hpp"

namespace qaw {

namespace {

using nlohmann::ordered_json;

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::PoleGuard:
    case Errc::DenominatorPole:
    case Errc::BEqualsOne:
    case Errc::PoleInIdentity:
    case Errc::DivisionByZero:
      return kExitPole;
    case Errc::SamplerExhausted:
      return kExitSampler;
    default:
      return kExitParse;
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct AwArgs {
  std::array<std::string, 4> a;
  std::string q;
  std::string w;
  double theta = 0.0;
  double x = 0.0;
  CLI::Option* w_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* x_opt = nullptr;
  int n = 0;
  std::string rep = "PHI_STD";
  std::array<int, 4> roles = {1, 2, 3, 4};
  std::string backend = "float";
  std::string format = "text";
  double pole_eps = EvalOptions{}.pole_eps;
  double epsilon_unit = QBase<Complex>::default_epsilon_unit;
};

void add_aw_params(CLI::App* cmd, AwArgs& A) {
  for (int k = 0; k < 4; ++k)
    cmd->add_option("--a" + std::to_string(k + 1), A.a[k], "Askey-Wilson parameter a" + std::to_string(k + 1))
        ->required();
  cmd->add_option("--q", A.q, "Base q, |q| != 1")->required();
  cmd->add_option("--backend", A.backend, "float or rational")
      ->check(CLI::IsMember({"float", "rational"}))
      ->capture_default_str();
  cmd->add_option("--pole-eps", A.pole_eps, "Float pole margin")->capture_default_str();
  cmd->add_option("--epsilon-unit", A.epsilon_unit, "Float margin around |q| = 1")->capture_default_str();
}

RepId parse_rep(const std::string& name, const std::array<int, 4>& roles) {
  const auto tag = rep_tag_from_name(name);
  if (!tag) throw Error(Errc::ParseError, "unknown representation '" + name + "'");
  RepId id{*tag, roles[0] - 1, roles[1] - 1, roles[2] - 1, roles[3] - 1};
  id.validate();
  return id;
}

template <Scalar S>
AWParams<S> build_params(const AwArgs& A) {
  std::array<S, 4> a;
  for (std::size_t k = 0; k < 4; ++k) a[k] = parse_scalar<S>(A.a[k]);
  QBase<S> q(parse_scalar<S>(A.q), A.epsilon_unit);
  S w;
  const bool angular = (A.theta_opt && A.theta_opt->count()) || (A.x_opt && A.x_opt->count());
  if constexpr (scalar_traits<S>::exact) {
    if (angular) throw Error(Errc::ParseError, "--theta and --x need the float backend; pass --w");
    if (!A.w_opt || !A.w_opt->count()) throw Error(Errc::ParseError, "one of --w, --theta, --x is required");
    w = parse_scalar<S>(A.w);
  } else {
    if (A.w_opt && A.w_opt->count())
      w = parse_scalar<S>(A.w);
    else if (A.theta_opt && A.theta_opt->count())
      w = w_from_theta(A.theta);
    else if (A.x_opt && A.x_opt->count())
      w = w_from_x(A.x);
    else
      throw Error(Errc::ParseError, "one of --w, --theta, --x is required");
  }
  return AWParams<S>(a, q, w, A.n);
}

template <Scalar S>
int do_eval(const AwArgs& A, std::ostream& out) {
  const AWParams<S> P = build_params<S>(A);
  const EvalOptions opts{A.pole_eps};
  const bool json = A.format == "json";
  if (A.rep != "all") {
    const RepId rep = parse_rep(A.rep, A.roles);
    const auto v = eval_rep(P, rep, opts);
    if (json) {
      ordered_json j{{"rep", rep.to_string()}, {"value", format(v.value)}, {"condition", v.condition()}};
      out << j.dump(2) << "\n";
    } else {
      out << format(v.value) << "\n";
    }
    return kExitOk;
  }
  RepId roles{RepTag::PhiStd, A.roles[0] - 1, A.roles[1] - 1, A.roles[2] - 1, A.roles[3] - 1};
  roles.validate();
  const auto report = eval_all(P, opts, roles);
  if (json) {
    ordered_json reps = ordered_json::array();
    for (const auto& e : report.entries) {
      ordered_json r{{"rep", e.rep.to_string()}};
      if (e.result) {
        r["value"] = format(e.result->value);
        r["condition"] = e.result->condition();
      } else {
        r["skipped"] = e.skipped;
      }
      reps.push_back(std::move(r));
    }
    ordered_json j{{"reps", reps},
                   {"max_deviation", report.max_deviation},
                   {"max_rel_deviation", report.max_rel_deviation},
                   {"exact_agreement", report.exact_agreement},
                   {"condition", report.condition}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& e : report.entries) {
    out << e.rep.to_string() << "\t";
    if (e.result)
      out << format(e.result->value) << "\tcondition=" << fmt_double(e.result->condition()) << "\n";
    else
      out << "skipped: " << e.skipped << "\n";
  }
  out << "max_deviation\t" << fmt_double(report.max_deviation) << "\n";
  out << "max_rel_deviation\t" << fmt_double(report.max_rel_deviation) << "\n";
  out << "condition\t" << fmt_double(report.condition) << "\n";
  return kExitOk;
}

struct SeriesArgs {
  std::string kind = "phi";
  std::string num, den, b, lower;
  std::string z = "1";
  std::string q;
  int n = 0;
  std::string backend = "float";
  std::string format = "text";
  double pole_eps = EvalOptions{}.pole_eps;
};

template <Scalar S>
std::vector<S> parse_list(const std::string& text) {
  std::vector<S> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_scalar<S>(item));
  return out;
}

template <Scalar S>
int do_series(const SeriesArgs& A, std::ostream& out) {
  const EvalOptions opts{A.pole_eps};
  QBase<S> q(parse_scalar<S>(A.q));
  const S z = parse_scalar<S>(A.z);
  SeriesValue<S> v;
  if (A.kind == "phi") {
    v = eval_phi(SeriesSpec<S>(parse_list<S>(A.num), parse_list<S>(A.den), A.n, z, q, opts), opts);
  } else {
    if (A.b.empty()) throw Error(Errc::ParseError, "--b is required for --kind w");
    v = eval_w(VwpSpec<S>(parse_scalar<S>(A.b), parse_list<S>(A.lower), A.n, z, q, opts), opts);
  }
  if (A.format == "json") {
    ordered_json terms = ordered_json::array();
    for (const auto& t : v.trace.terms) terms.push_back(format(t));
    ordered_json j{{"value", format(v.value)}, {"abs_scale", v.trace.abs_scale}, {"terms", terms}};
    out << j.dump(2) << "\n";
  } else {
    out << format(v.value) << "\n";
  }
  return kExitOk;
}

struct VerifyArgs {
  std::vector<std::string> targets;
  std::string backend = "rational";
  std::string q_regime = "inside";
  std::string json_path;
  DrawConfig cfg;
};

int do_verify(VerifyArgs& A, std::ostream& out) {
  A.cfg.backend = A.backend == "float" ? BackendChoice::Float
                  : A.backend == "both" ? BackendChoice::Both
                                        : BackendChoice::Rational;
  A.cfg.q_regime = A.q_regime == "mirrored" ? QRegime::Mirrored
                   : A.q_regime == "both"   ? QRegime::Both
                                            : QRegime::Inside;
  A.cfg.n_min = std::min(A.cfg.n_min, A.cfg.n_max);
  std::vector<std::string> patterns;
  for (const auto& t : A.targets)
    for (const auto& piece : split(t, ','))
      if (!piece.empty()) patterns.push_back(piece);
  const SweepReport report = run_sweep(A.cfg, patterns);
  long failing = 0;
  for (const auto& r : report.results) {
    out << r.target << " [" << r.backend << "] pass=" << r.tally.pass << " fail=" << r.tally.fail
        << " inconclusive=" << r.tally.inconclusive << " skipped=" << r.tally.skipped
        << " worst=" << fmt_double(r.worst_deviation) << " " << r.status;
    if (!r.correction.empty()) out << " correction: " << r.correction;
    if (r.printed) out << " printed-variant fail=" << r.printed->fail << " pass=" << r.printed->pass;
    out << "\n";
    failing += r.tally.fail > 0;
  }
  out << "targets=" << report.results.size() << " failing=" << failing << "\n";
  if (!A.json_path.empty()) {
    std::ofstream f(A.json_path);
    if (!f) throw Error(Errc::ParseError, "cannot write " + A.json_path);
    f << report_json(report) << "\n";
  }
  return report.any_fail() ? kExitIdentityFailure : kExitOk;
}

int do_list(const std::string& fmt, std::ostream& out) {
  const auto& records = catalog();
  if (fmt == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : records) {
      ordered_json e{{"id", r.id},
                     {"ref", r.ref},
                     {"family", r.family},
                     {"status", status_name(r.status)},
                     {"constraints", r.constraints},
                     {"lhs", r.lhs.to_string()},
                     {"rhs", r.rhs.to_string()}};
      if (r.correction) {
        e["correction"] = r.correction->description;
        e["corrected_rhs"] = r.correction->rhs.to_string();
      }
      arr.push_back(std::move(e));
    }
    out << arr.dump(2) << "\n";
    return kExitOk;
  }
  out << "id\tref\tstatus\tconstraints\n";
  for (const auto& r : records)
    out << r.id << "\t" << r.ref << "\t" << status_name(r.status) << "\t" << r.constraints << "\n";
  return kExitOk;
}

struct TableArgs {
  AwArgs aw;
  int n_max = 4;
  std::string grid = "-1:1:11";
  std::string format = "csv";
  std::string output;
};

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw Error(Errc::ParseError, "grid must be lo:hi:count");
  double lo = 0, hi = 0;
  long count = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "malformed grid '" + spec + "'");
  }
  if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi) || count < 1)
    throw Error(Errc::ParseError, "grid needs -1 <= lo <= hi <= 1 and count >= 1");
  std::vector<double> xs;
  for (long k = 0; k < count; ++k) xs.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  return xs;
}

int do_table(const TableArgs& T, std::ostream& out) {
  const auto xs = parse_grid(T.grid);
  if (T.n_max < 0) throw Error(Errc::ParseError, "--n-max must be nonnegative");
  std::array<Complex, 4> a;
  for (std::size_t k = 0; k < 4; ++k) a[k] = parse_scalar<Complex>(T.aw.a[k]);
  const QBase<Complex> q(parse_scalar<Complex>(T.aw.q), T.aw.epsilon_unit);
  const EvalOptions opts{T.aw.pole_eps};
  std::ofstream file;
  if (!T.output.empty()) {
    file.open(T.output);
    if (!file) throw Error(Errc::ParseError, "cannot write " + T.output);
  }
  std::ostream& sink = T.output.empty() ? out : file;
  ordered_json rows = ordered_json::array();
  if (T.format == "csv") sink << "x,n,value_re,value_im\n";
  for (int n = 0; n <= T.n_max; ++n) {
    for (double x : xs) {
      const Complex v = eval_rep(AWParams<Complex>(a, q, w_from_x(x), n), {}, opts).value;
      if (T.format == "csv")
        sink << fmt_double(x) << "," << n << "," << fmt_double(v.real()) << "," << fmt_double(v.imag()) << "\n";
      else
        rows.push_back({{"x", x}, {"n", n}, {"value_re", v.real()}, {"value_im", v.imag()}});
    }
  }
  if (T.format == "json") sink << rows.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Askey-Wilson polynomials, terminating q-series and identity verification"};
  app.set_config("--config", "", "Read flags from a key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  AwArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate p_n(x; a|q) through one or all representations");
  add_aw_params(eval, eval_args);
  eval_args.w_opt = eval->add_option("--w", eval_args.w, "Spectral variable w = e^{i theta}");
  eval_args.theta_opt = eval->add_option("--theta", eval_args.theta, "Angle theta (float backend)");
  eval_args.x_opt = eval->add_option("--x", eval_args.x, "x = cos theta (float backend)");
  eval_args.w_opt->excludes(eval_args.theta_opt)->excludes(eval_args.x_opt);
  eval_args.theta_opt->excludes(eval_args.x_opt);
  eval->add_option("--n", eval_args.n, "Degree")->required()->check(CLI::NonNegativeNumber);
  eval->add_option("--rep", eval_args.rep, "PHI_STD, PHI_INV, PHI_MIXED, W_DEF6, W_DEF7, W_DEF5, W_DEF4 or all")
      ->capture_default_str();
  eval->add_option("--p", eval_args.roles[0], "Role p in {1..4}")->capture_default_str();
  eval->add_option("--r", eval_args.roles[1], "Role r in {1..4}")->capture_default_str();
  eval->add_option("--t", eval_args.roles[2], "Role t in {1..4}")->capture_default_str();
  eval->add_option("--u", eval_args.roles[3], "Role u in {1..4}")->capture_default_str();
  eval->add_option("--format", eval_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  SeriesArgs series_args;
  auto* series = app.add_subcommand("eval-series", "Evaluate a terminating r_phi_s or r+1_W_r");
  series->add_option("--kind", series_args.kind, "phi or w")->check(CLI::IsMember({"phi", "w"}))->capture_default_str();
  series->add_option("--num", series_args.num, "Comma-separated numerator parameters (without q^-n)");
  series->add_option("--den", series_args.den, "Comma-separated denominator parameters");
  series->add_option("--b", series_args.b, "Special parameter of the W series");
  series->add_option("--lower", series_args.lower, "Comma-separated W parameters after q^-n");
  series->add_option("--z", series_args.z, "Argument")->capture_default_str();
  series->add_option("--q", series_args.q, "Base q")->required();
  series->add_option("--n", series_args.n, "Termination degree")->required()->check(CLI::NonNegativeNumber);
  series->add_option("--backend", series_args.backend, "float or rational")
      ->check(CLI::IsMember({"float", "rational"}))
      ->capture_default_str();
  series->add_option("--format", series_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  series->add_option("--pole-eps", series_args.pole_eps, "Float pole margin")->capture_default_str();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run randomized verification sweeps");
  verify->add_option("--targets", verify_args.targets, "Record ids, suite names or globs (comma-separated)")
      ->required();
  verify->add_option("--draws", verify_args.cfg.draws, "Draws per target")->capture_default_str();
  verify->add_option("--seed", verify_args.cfg.seed, "64-bit seed")->capture_default_str();
  verify->add_option("--backend", verify_args.backend, "float, rational or both")
      ->check(CLI::IsMember({"float", "rational", "both"}))
      ->capture_default_str();
  verify->add_option("--n-min", verify_args.cfg.n_min, "Smallest degree")->capture_default_str();
  verify->add_option("--n-max", verify_args.cfg.n_max, "Largest degree")->capture_default_str();
  verify->add_option("--q-lo", verify_args.cfg.q_lo, "Lower |q| bound")->capture_default_str();
  verify->add_option("--q-hi", verify_args.cfg.q_hi, "Upper |q| bound")->capture_default_str();
  verify->add_option("--q-regime", verify_args.q_regime, "inside, mirrored or both")
      ->check(CLI::IsMember({"inside", "mirrored", "both"}))
      ->capture_default_str();
  verify->add_flag("--q-complex", verify_args.cfg.q_complex, "Float q with random argument");
  verify->add_option("--mod-lo", verify_args.cfg.mod_lo, "Lower float parameter modulus")->capture_default_str();
  verify->add_option("--mod-hi", verify_args.cfg.mod_hi, "Upper float parameter modulus")->capture_default_str();
  verify->add_option("--rational-bound", verify_args.cfg.rational_bound, "Rational numerator/denominator bound")
      ->capture_default_str();
  verify->add_option("--pole-eps", verify_args.cfg.pole_eps, "Float pole margin")->capture_default_str();
  verify->add_option("--rel-tol", verify_args.cfg.rel_tol, "Float relative tolerance")->capture_default_str();
  verify->add_option("--abs-tol", verify_args.cfg.abs_tol, "Float absolute tolerance")->capture_default_str();
  verify->add_option("--cond-cap", verify_args.cfg.cond_cap, "FAIL/INCONCLUSIVE condition cap")->capture_default_str();
  verify->add_option("--max-rejections", verify_args.cfg.max_rejections, "Sampler rejection limit")
      ->capture_default_str();
  verify->add_option("--json", verify_args.json_path, "Write the JSON report here");

  std::string list_format = "text";
  auto* list = app.add_subcommand("list", "List the identity catalog");
  list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Tabulate p_n(x) over an x grid (float backend)");
  for (int k = 0; k < 4; ++k)
    table->add_option("--a" + std::to_string(k + 1), table_args.aw.a[k], "Parameter a" + std::to_string(k + 1))
        ->required();
  table->add_option("--q", table_args.aw.q, "Base q")->required();
  table->add_option("--n-max", table_args.n_max, "Largest degree")->capture_default_str();
  table->add_option("--x-grid", table_args.grid, "lo:hi:count with -1 <= lo <= hi <= 1")->capture_default_str();
  table->add_option("--format", table_args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  table->add_option("--output", table_args.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*eval)
      return eval_args.backend == "rational" ? do_eval<Exact>(eval_args, out) : do_eval<Complex>(eval_args, out);
    if (*series)
      return series_args.backend == "rational" ? do_series<Exact>(series_args, out)
                                               : do_series<Complex>(series_args, out);
    if (*verify) return do_verify(verify_args, out);
    if (*list) return do_list(list_format, out);
    if (*table) return do_table(table_args, out);
  } catch (const Error& e) {
    err << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_for(e);
  }
  return kExitParse;
}

}  // namespace qaw
