#pragma once

// Admissible random draws and verification sweeps over catalog records and
// the Askey-Wilson consistency suites.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaw/catalog.hpp"
#include "qaw/random.hpp"

namespace qaw {

enum class QRegime { Inside, Mirrored, Both };
enum class BackendChoice { Float, Rational, Both };

struct DrawConfig {
  /// |q| range inside the unit disc; the mirrored regime uses (1/hi, 1/lo).
  double q_lo = 0.15;
  double q_hi = 0.85;
  QRegime q_regime = QRegime::Inside;
  /// Float backend: give q a uniform random argument instead of q > 0.
  bool q_complex = false;
  /// Float parameter moduli are log-uniform over [mod_lo, mod_hi].
  double mod_lo = 0.1;
  double mod_hi = 10.0;
  int n_min = 0;
  int n_max = 6;
  int draws = 100;
  std::uint64_t seed = 1;
  BackendChoice backend = BackendChoice::Rational;
  /// Rational draws: |numerator|, denominator <= rational_bound.
  int rational_bound = 97;
  double pole_eps = 1e-9;
  double epsilon_unit = 1e-8;
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  double cond_cap = 1e8;
  int max_rejections = 1000;

  /// Throws ParseError on empty or inverted ranges.
  void validate() const;
  CheckConfig check_config() const;
};

std::string_view backend_choice_name(BackendChoice b) noexcept;
std::string_view q_regime_name(QRegime r) noexcept;

/// One raw scalar in the backend: float moduli log-uniform with uniform
/// argument; rational small-denominator Gaussian rationals.
template <Scalar S>
S draw_scalar(Rng& rng, const DrawConfig& cfg);
/// q honouring the regime; never within epsilon_unit of the unit circle.
template <Scalar S>
QBase<S> draw_q(Rng& rng, const DrawConfig& cfg);
/// e^{i theta}: float on the unit circle; rational either a rational point
/// of the unit circle or a free Gaussian rational.
template <Scalar S>
S draw_w(Rng& rng, const DrawConfig& cfg);
int draw_n(Rng& rng, const DrawConfig& cfg);

/// Rejection-samples slot values until both sides' pole guards hold.
/// Throws SamplerExhausted after cfg.max_rejections rejections; *rejections
/// receives the count.
template <Scalar S>
Draw<S> draw_params(Rng& rng, const DrawConfig& cfg, const IdentityRecord& rec, long* rejections = nullptr);

/// Askey-Wilson parameters for which PHI_STD is admissible.
template <Scalar S>
AWParams<S> draw_aw(Rng& rng, const DrawConfig& cfg, long* rejections = nullptr);

/// Balanced 4phi3 (a, b, c; d, e, f; q, q) with f solved from
/// q^{1-n} abc = def, admissible for Watson's transformation.
template <Scalar S>
SeriesSpec<S> draw_balanced_phi(Rng& rng, const DrawConfig& cfg, long* rejections = nullptr);

struct Tally {
  long pass = 0;
  long fail = 0;
  long inconclusive = 0;
  long skipped = 0;

  void add(Verdict v);
  long total() const { return pass + fail + inconclusive + skipped; }
};

struct TargetResult {
  std::string target;
  std::string ref;
  std::string backend;
  std::string status = "ACTIVE";
  std::string correction;
  Tally tally;
  /// Quarantined records: tallies of the printed (uncorrected) variant.
  std::optional<Tally> printed;
  long rejections = 0;
  double worst_deviation = 0.0;
  double worst_condition = 0.0;
  std::string worst_draw;
};

struct SweepReport {
  DrawConfig cfg;
  std::vector<TargetResult> results;
  double wall_seconds = 0.0;

  bool any_fail() const;
};

/// Names of the non-record suites accepted as targets.
const std::vector<std::string>& suite_names();

/// Patterns match record ids and suite names. A pattern with a wildcard
/// may match nothing; a literal name that matches nothing throws
/// UnknownTarget. Order follows the catalog, then the suites.
std::vector<std::string> expand_targets(const std::vector<std::string>& patterns);

SweepReport run_sweep(const DrawConfig& cfg, const std::vector<std::string>& patterns);

/// JSON report; the "timing" member is emitted only when include_timing.
std::string report_json(const SweepReport& report, bool include_timing = true, int indent = 2);

}  // namespace qaw
