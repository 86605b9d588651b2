#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdimlab/contents.hpp"

namespace sdimlab {

/// 0 < s < m < 1.
template <class T>
bool valid_params(const T& s, const T& m) {
  return T(0) < s && s < m && m < T(1);
}

/// (s, m) with c (m + d - 1) = s + d - 1. Requires (d-1)/d < c < 1.
/// T is double or an exact rational type.
template <class T>
std::pair<T, T> params_for_ratio(const T& c, int d) {
  if (d < 1) throw std::invalid_argument("params_for_ratio: d must be >= 1");
  const T lo = T(d - 1) / T(d);
  if (!(lo < c && c < T(1))) {
    throw std::invalid_argument("params_for_ratio: c must lie in ((d-1)/d, 1)");
  }
  const T s = c - lo;
  const T m = ((T(1) - c) * T(d - 1) + s) / c;
  if (!valid_params(s, m)) throw std::invalid_argument("params_for_ratio: no admissible (s, m)");
  return {s, m};
}

/// m = s / (1 + s - u), giving lower S-dimension s and upper dimension u.
template <class T>
T params_for_sdims(const T& s, const T& u) {
  if (!(T(0) < s && s < u && u < T(1))) {
    throw std::invalid_argument("params_for_sdims: requires 0 < s < u < 1");
  }
  const T m = s / (T(1) + s - u);
  if (!valid_params(s, m)) throw std::invalid_argument("params_for_sdims: no admissible m");
  return m;
}

/// s = m (1 - u) / (1 - m), the inverse of u = 1 + s - s/m.
template <class T>
T params_for_mdims(const T& m, const T& u) {
  if (!(T(0) < m && m < u && u < T(1))) {
    throw std::invalid_argument("params_for_mdims: requires 0 < m < u < 1");
  }
  const T s = m * (T(1) - u) / (T(1) - m);
  if (!valid_params(s, m)) throw std::invalid_argument("params_for_mdims: no admissible s");
  return s;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  /// v (1 -/+ rel), for v >= 0.
  static Interval around(double v, double rel) { return {v * (1.0 - rel), v * (1.0 + rel)}; }
  double mid() const { return 0.5 * (lo + hi); }
};

Interval operator*(double a, const Interval& x);

enum class Verdict { kHolds, kViolated, kInconclusive };

std::string_view verdict_name(Verdict v);

/// lhs <= mid <= rhs with bracket slack.
struct InequalityCheck {
  std::string name;
  Interval lhs;
  Interval mid;
  Interval rhs;
  Verdict verdict = Verdict::kInconclusive;
  bool certified = false;  // holds strictly, not only within tolerance
};

/// violated when some pair is separated the wrong way by more than slack.
/// holds when both pairs are ordered up to slack (certified), or when the
/// brackets overlap but all have relative width <= tol (equality cases).
/// Otherwise inconclusive.
Verdict decide(const Interval& lhs, const Interval& mid, const Interval& rhs, double slack,
               double tol, bool* certified = nullptr);

/// Content estimates at one exponent t, as brackets.
struct ContentEstimates {
  int ambient_dim = 1;
  double t = 0.0;
  Interval upper_s;                   // upper S-content at t
  Interval upper_m;                   // upper Minkowski content at t
  std::optional<Interval> lower_s;         // lower S-content at t
  std::optional<Interval> lower_m;         // lower Minkowski content at t
  std::optional<Interval> lower_m_scaled;  // lower Minkowski content at t d/(d-1)
};

/// Upper content and lower dimension sandwiches; the lower content sandwich
/// is added when c12 is given.
/// slack_rel is relative to the largest magnitude in each check; tol bounds
/// the relative bracket width accepted for equality cases.
std::vector<InequalityCheck> verify_inequalities(const ContentEstimates& contents,
                                                 const DimensionReport& dims,
                                                 std::optional<double> c12 = std::nullopt,
                                                 double tol = 1e-6, double slack_rel = 1e-12);

/// Upper contents at t = sq of a generated string, from the right-endpoint
/// and interior subsequences at levels k_min..k_max.
ContentEstimates estimate_upper_contents(double s, double m, int k_min, int k_max,
                                         double cauchy_tol = 1e-9);

}  // namespace sdimlab
