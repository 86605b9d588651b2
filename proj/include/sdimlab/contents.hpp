#pragma once

#include <array>
#include <optional>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "sdimlab/fractal_string.hpp"
#include "sdimlab/log_scalar.hpp"

namespace sdimlab {

enum class ScheduleLabel { kLeftEndpoint, kRightEndpoint, kInteriorMin, kDyadic };

std::string_view label_name(ScheduleLabel label);

struct ScheduleEntry {
  int k = 0;
  LogScalar radius;
  ScheduleLabel label = ScheduleLabel::kLeftEndpoint;
  bool in_interval = true;  // interior minima: r_k < 2 x_k < r_{k-1}
};

/// Evaluation radii ordered by (label, k).
struct ScaleSchedule {
  double t = 0.0;
  std::vector<ScheduleEntry> entries;
  std::optional<int> onset_k;  // least k' after which every interior minimum is bracketed
};

/// Right-endpoint proxy factor (1 - 2^-40) keeping r inside the half-open interval.
inline constexpr double kRightEndpointShrink = 1.0 - 9.094947017729282e-13;

/// r_k/2, (r_{k-1}/2)(1 - 2^-40) and x_k = ((1-t)/t) L_k/M_k for k in [k_min, k_max].
/// Right endpoints exist only for k >= 2. Requires 0 < t < 1.
ScaleSchedule critical_schedule(const FractalString& str, double t, int k_min, int k_max);

/// r_j = 2^{-j} for j in [j_min, j_max].
ScaleSchedule dyadic_schedule(int j_min, int j_max);

/// lambda_1(F_r) / (kappa_{1-t} r^{1-t}).
LogBracket normalized_volume(const FractalString& str, double t, const LogScalar& r,
                             EvalMode mode = EvalMode::kStrict);

/// H^0(dF_r) / ((1-t) kappa_{1-t} r^{-t}).
LogBracket normalized_surface(const FractalString& str, double t, const LogScalar& r,
                              EvalMode mode = EvalMode::kStrict);

struct HMinimum {
  LogScalar x_min;
  LogScalar value;
};

/// Global minimum of h(x) = x^D M + x^{D-1} L on (0, inf).
HMinimum h_min(const LogScalar& M, const LogScalar& L, double D);

/// h(x) evaluated directly.
LogScalar h_eval(const LogScalar& M, const LogScalar& L, double D, const LogScalar& x);

enum class ContentKind { kVolume, kSurface };

std::string_view kind_name(ContentKind kind);

struct ProfileRow {
  int k = 0;
  ScheduleLabel label = ScheduleLabel::kLeftEndpoint;
  LogScalar radius;
  LogBracket value;
  std::optional<double> target;
  std::optional<double> rel_residual;
};

struct ContentProfile {
  double t = 0.0;
  ContentKind kind = ContentKind::kSurface;
  int ambient_dim = 1;
  std::vector<ProfileRow> rows;
};

/// Normalized content at every schedule radius. The residual column is filled
/// when a target is supplied.
ContentProfile build_profile(const FractalString& str, double t, ContentKind kind,
                             const ScaleSchedule& schedule,
                             std::optional<double> target = std::nullopt,
                             EvalMode mode = EvalMode::kStrict);

struct LabelLimit {
  ScheduleLabel label = ScheduleLabel::kLeftEndpoint;
  LogScalar value;           // last value on the subsequence
  double bracket_rel = 0.0;  // relative half-width of the last value's bracket
  double last_rel_change = 0.0;
  bool converged = false;
};

struct LimitEstimate {
  LogScalar liminf;
  LogScalar limsup;
  ScheduleLabel liminf_label = ScheduleLabel::kLeftEndpoint;
  ScheduleLabel limsup_label = ScheduleLabel::kLeftEndpoint;
  double liminf_uncertainty = 0.0;  // relative: bracket half-width + last change
  double limsup_uncertainty = 0.0;
  bool converged = false;
  std::vector<LabelLimit> per_label;
  std::vector<std::string> warnings;
};

/// Liminf/limsup reduced to the labeled subsequences. A subsequence is declared
/// Cauchy-converged when its last `window` successive relative changes are < tol.
/// Throws std::invalid_argument if some label has fewer than `window` rows.
LimitEstimate estimate_liminf_limsup(const ContentProfile& profile, int window = 3,
                                     double tol = 1e-9);

struct ContentTargets {
  double s = 0.0;
  double m = 0.0;
  double sq = 0.0;
  double upper_s_content = 0.0;       // at t = sq
  double lower_s_content = 0.0;       // at t = s
  double lower_m_published = 0.0;         // kappa_{1-m}^{-1} m^{-m} (1-m)^{m-1}
  double lower_m_corrected = 0.0;     // the same times 2^{1-m}
};

ContentTargets closed_form_targets(double s, double m);

/// Numerically observed lower Minkowski content at t = m against both
/// candidate constants.
struct LowerMinkowskiAdjudication {
  double limit = 0.0;
  double limit_times_kappa = 0.0;
  double ratio_to_published = 0.0;
  double ratio_to_corrected = 0.0;
  double last_rel_change = 0.0;
  bool converged = false;
  std::string matched;  // "published", "corrected" or "neither"
};

LowerMinkowskiAdjudication adjudicate_lower_minkowski(double s, double m, int k_min, int k_max,
                                                      double match_tol = 1e-5);

struct DimensionReport {
  int ambient_dim = 1;
  int depth = 0;
  double ldim_s = 0.0;
  double udim_s = 0.0;
  double ldim_m = 0.0;
  double udim_m = 0.0;
  std::optional<WinterParams> params;  // targets are s, m, sq shifted by d-1
  std::optional<int> onset_k;
  bool converged = true;
  bool inconclusive = false;
  std::vector<std::string> warnings;
  // product sets: (lower-bound slope, upper-bound slope) for
  // ldim_S, udim_S, ldim_M, udim_M
  std::optional<std::array<std::pair<double, double>, 4>> bracket_slopes;

  double target_ldim_s() const { return params->s + ambient_dim - 1; }
  double target_ldim_m() const { return params->m + ambient_dim - 1; }
  double target_udim() const { return params->upper_dim() + ambient_dim - 1; }
};

/// Log-log secant slopes along the matching subsequences: the last secant
/// between consecutive levels of each label, minimized/maximized over labels.
/// Generated strings use the critical schedule up to their depth; other
/// strings use a dyadic schedule reaching 30 binades below the smallest gap.
DimensionReport dimension_report(const FractalString& str, double tol = 1e-6);

enum class LemmaMode { kGrowing, kTail };

/// Least k0 such that the double-exponential sum bound with slack (1 + eps)
/// holds at k0 and the next `verify_levels` levels. Growing sums i = 1..k
/// (k >= 1); tail sums i = k..inf (k >= 0) with a rigorous truncation bound.
int lemma_onset(double a, double b, double eps, LemmaMode mode, int verify_levels = 20,
                int max_k0 = 200);

}  // namespace sdimlab
