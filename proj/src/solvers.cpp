#include "sdimlab/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace sdimlab {

Interval operator*(double a, const Interval& x) {
  const double p = a * x.lo;
  const double q = a * x.hi;
  return {std::min(p, q), std::max(p, q)};
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double rel_width(const Interval& x) {
  const double scale = std::max(std::fabs(x.lo), std::fabs(x.hi));
  return scale == 0.0 ? 0.0 : (x.hi - x.lo) / scale;
}

}  // namespace

Verdict decide(const Interval& lhs, const Interval& mid, const Interval& rhs, double slack,
               double tol, bool* certified) {
  if (certified) *certified = false;
  if (lhs.lo > mid.hi + slack || mid.lo > rhs.hi + slack) return Verdict::kViolated;
  if (lhs.hi <= mid.lo + slack && mid.hi <= rhs.lo + slack) {
    if (certified) *certified = true;
    return Verdict::kHolds;
  }
  if (rel_width(lhs) <= tol && rel_width(mid) <= tol && rel_width(rhs) <= tol) {
    return Verdict::kHolds;
  }
  return Verdict::kInconclusive;
}

namespace {

double magnitude(const Interval& a, const Interval& b, const Interval& c) {
  return std::max({std::fabs(a.lo), std::fabs(a.hi), std::fabs(b.lo), std::fabs(b.hi),
                   std::fabs(c.lo), std::fabs(c.hi)});
}

InequalityCheck make_check(std::string name, Interval lhs, Interval mid, Interval rhs,
                           double tol, double slack_rel) {
  InequalityCheck c{std::move(name), lhs, mid, rhs, Verdict::kInconclusive, false};
  c.verdict = decide(lhs, mid, rhs, slack_rel * magnitude(lhs, mid, rhs), tol, &c.certified);
  return c;
}

// Dimension reports carry point estimates; widen them by the tolerance.
Interval dim_interval(double v, bool converged, double tol) {
  const double w = converged ? tol : 1e-3;
  return {v - w, v + w};
}

}  // namespace

std::vector<InequalityCheck> verify_inequalities(const ContentEstimates& contents,
                                                 const DimensionReport& dims,
                                                 std::optional<double> c12, double tol,
                                                 double slack_rel) {
  std::vector<InequalityCheck> out;
  const double d = contents.ambient_dim;

  out.push_back(make_check("upper_content_sandwich",
                           ((d - contents.t) / d) * contents.upper_s, contents.upper_m,
                           contents.upper_s, tol, slack_rel));

  const double dd = dims.ambient_dim;
  const Interval ldim_m = dim_interval(dims.ldim_m, dims.converged, tol);
  const Interval ldim_s = dim_interval(dims.ldim_s, dims.converged, tol);
  InequalityCheck dim_check = make_check("lower_dimension_sandwich", ((dd - 1) / dd) * ldim_m,
                                         ldim_s, ldim_m, tol, slack_rel);
  if (dims.inconclusive && dim_check.verdict == Verdict::kHolds) {
    dim_check.verdict = Verdict::kInconclusive;
  }
  out.push_back(dim_check);

  if (c12) {
    InequalityCheck c;
    c.name = "lower_content_sandwich";
    if (contents.ambient_dim >= 2 && contents.lower_s && contents.lower_m &&
        contents.lower_m_scaled) {
      const double e = (d - 1) / d;
      const Interval scaled{*c12 * std::pow(contents.lower_m_scaled->lo, e),
                            *c12 * std::pow(contents.lower_m_scaled->hi, e)};
      c = make_check(c.name, scaled, *contents.lower_s, *contents.lower_m, tol, slack_rel);
    }
    // d = 1 or missing estimates: the exponent t d/(d-1) is undefined or unmeasured
    out.push_back(c);
  }
  return out;
}

ContentEstimates estimate_upper_contents(double s, double m, int k_min, int k_max,
                                         double cauchy_tol) {
  const FractalString str = winter_string(s, m, k_max + 1);
  const double t = str.params()->upper_dim();
  const ScaleSchedule sched = critical_schedule(str, t, k_min, k_max);
  const LimitEstimate sur =
      estimate_liminf_limsup(build_profile(str, t, ContentKind::kSurface, sched), 3, cauchy_tol);
  const LimitEstimate vol =
      estimate_liminf_limsup(build_profile(str, t, ContentKind::kVolume, sched), 3, cauchy_tol);
  ContentEstimates out;
  out.ambient_dim = 1;
  out.t = t;
  out.upper_s = Interval::around(sur.limsup.to_double(), sur.limsup_uncertainty);
  out.upper_m = Interval::around(vol.limsup.to_double(), vol.limsup_uncertainty);
  return out;
}

}  // namespace sdimlab
