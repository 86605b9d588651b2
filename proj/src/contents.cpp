#include "sdimlab/contents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdimlab/special.hpp"

namespace sdimlab {

namespace {

void check_exponent(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("content exponent t must lie in (0, 1)");
}

double rel_change(const LogScalar& a, const LogScalar& b) {
  if (a.is_zero() || b.is_zero()) return a == b ? 0.0 : INFINITY;
  return std::fabs(std::expm1(a.log2_ratio(b) * std::numbers::ln2));
}

double rel_residual(const LogScalar& value, double target) {
  const LogScalar tgt = LogScalar::from_double(target);
  if (value.is_zero()) return 1.0;
  return rel_change(value, tgt);
}

struct SecantTrack {
  std::vector<LogScalar> radii;
  std::vector<LogScalar> values;

  std::vector<double> slopes() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < radii.size(); ++i) {
      if (values[i].is_zero() || values[i - 1].is_zero()) continue;
      const double du = -radii[i].log2_ratio(radii[i - 1]);
      if (du == 0.0) continue;
      out.push_back(values[i].log2_ratio(values[i - 1]) / du);
    }
    return out;
  }
};

struct SlopeResult {
  double value = 0.0;
  double change = INFINITY;
};

SlopeResult last_slope(const SecantTrack& track) {
  const auto s = track.slopes();
  if (s.empty()) throw std::invalid_argument("dimension estimate needs at least two levels");
  SlopeResult r;
  r.value = s.back();
  if (s.size() >= 2) r.change = std::fabs(s.back() - s[s.size() - 2]);
  return r;
}

}  // namespace

std::string_view label_name(ScheduleLabel label) {
  switch (label) {
    case ScheduleLabel::kLeftEndpoint:
      return "left_endpoint";
    case ScheduleLabel::kRightEndpoint:
      return "right_endpoint";
    case ScheduleLabel::kInteriorMin:
      return "interior_min";
    case ScheduleLabel::kDyadic:
      return "dyadic";
  }
  return "unknown";
}

std::string_view kind_name(ContentKind kind) {
  return kind == ContentKind::kVolume ? "volume" : "surface";
}

ScaleSchedule critical_schedule(const FractalString& str, double t, int k_min, int k_max) {
  check_exponent(t);
  if (k_min < 1 || k_max < k_min || k_max > str.depth()) {
    throw std::out_of_range("critical_schedule: level range must lie in [1, depth]");
  }
  ScaleSchedule sched;
  sched.t = t;
  const LogScalar shrink = LogScalar::from_double(kRightEndpointShrink);
  for (int k = k_min; k <= k_max; ++k) {
    sched.entries.push_back({k, str.scale(k).scaled_pow2(-1), ScheduleLabel::kLeftEndpoint, true});
  }
  for (int k = std::max(k_min, 2); k <= k_max; ++k) {
    sched.entries.push_back(
        {k, str.scale(k - 1).scaled_pow2(-1) * shrink, ScheduleLabel::kRightEndpoint, true});
  }
  const LogScalar factor = LogScalar::from_double((1.0 - t) / t);
  std::optional<int> onset;
  for (int k = k_min; k <= k_max; ++k) {
    const LogBracket two_m = str.cumulative_count(k) * LogScalar::from_log2(1.0);
    const LogBracket tail = str.tail_length(k, str.is_truncation());
    const LogScalar x_lo = factor * tail.lower / two_m.upper;
    const LogScalar x_hi = factor * tail.upper / two_m.lower;
    const LogScalar x = factor * tail.center() / two_m.center();
    const bool above = str.scale(k) < x_lo.scaled_pow2(1);
    const bool below = k == 1 || x_hi.scaled_pow2(1) < str.scale(k - 1);
    const bool inside = above && below;
    sched.entries.push_back({k, x, ScheduleLabel::kInteriorMin, inside});
    if (!inside) {
      onset.reset();
    } else if (!onset) {
      onset = k;
    }
  }
  sched.onset_k = onset;
  return sched;
}

ScaleSchedule dyadic_schedule(int j_min, int j_max) {
  if (j_max < j_min) throw std::invalid_argument("dyadic_schedule: empty range");
  ScaleSchedule sched;
  for (int j = j_min; j <= j_max; ++j) {
    sched.entries.push_back({j, LogScalar::from_log2(-j), ScheduleLabel::kDyadic, true});
  }
  return sched;
}

LogBracket normalized_volume(const FractalString& str, double t, const LogScalar& r,
                             EvalMode mode) {
  check_exponent(t);
  const LogScalar norm = LogScalar::from_double(kappa(1.0 - t)) * r.pow(1.0 - t);
  return parallel_volume(str, r, mode) / norm;
}

LogBracket normalized_surface(const FractalString& str, double t, const LogScalar& r,
                              EvalMode mode) {
  check_exponent(t);
  const LogScalar norm = LogScalar::from_double((1.0 - t) * kappa(1.0 - t));
  return boundary_count(str, r, mode) * r.pow(t) / norm;
}

HMinimum h_min(const LogScalar& M, const LogScalar& L, double D) {
  if (!(D > 0.0 && D < 1.0)) throw std::domain_error("h_min: D must lie in (0, 1)");
  if (M.is_zero() || L.is_zero()) throw std::domain_error("h_min: M and L must be positive");
  HMinimum out;
  out.x_min = LogScalar::from_double((1.0 - D) / D) * L / M;
  const double c = std::pow(D, -D) * std::pow(1.0 - D, D - 1.0);
  out.value = LogScalar::from_double(c) * L.pow(D) * M.pow(1.0 - D);
  return out;
}

LogScalar h_eval(const LogScalar& M, const LogScalar& L, double D, const LogScalar& x) {
  return x.pow(D) * M + x.pow(D - 1.0) * L;
}

ContentProfile build_profile(const FractalString& str, double t, ContentKind kind,
                             const ScaleSchedule& schedule, std::optional<double> target,
                             EvalMode mode) {
  ContentProfile prof;
  prof.t = t;
  prof.kind = kind;
  for (const auto& e : schedule.entries) {
    ProfileRow row;
    row.k = e.k;
    row.label = e.label;
    row.radius = e.radius;
    row.value = kind == ContentKind::kVolume ? normalized_volume(str, t, e.radius, mode)
                                             : normalized_surface(str, t, e.radius, mode);
    if (target) {
      row.target = target;
      row.rel_residual = rel_residual(row.value.center(), *target);
    }
    prof.rows.push_back(std::move(row));
  }
  return prof;
}

LimitEstimate estimate_liminf_limsup(const ContentProfile& profile, int window, double tol) {
  if (window < 2) throw std::invalid_argument("estimate_liminf_limsup: window must be >= 2");
  LimitEstimate est;
  std::vector<ScheduleLabel> labels;
  for (const auto& row : profile.rows) {
    if (std::find(labels.begin(), labels.end(), row.label) == labels.end()) {
      labels.push_back(row.label);
    }
  }
  if (labels.empty()) throw std::invalid_argument("estimate_liminf_limsup: empty profile");
  est.converged = true;
  for (ScheduleLabel label : labels) {
    std::vector<const ProfileRow*> seq;
    for (const auto& row : profile.rows) {
      if (row.label == label) seq.push_back(&row);
    }
    std::sort(seq.begin(), seq.end(), [](auto* a, auto* b) { return a->k < b->k; });
    if (static_cast<int>(seq.size()) < window) {
      throw std::invalid_argument("estimate_liminf_limsup: fewer rows than the window for " +
                                  std::string(label_name(label)));
    }
    LabelLimit lim;
    lim.label = label;
    lim.value = seq.back()->value.center();
    lim.bracket_rel = seq.back()->value.rel_halfwidth();
    lim.converged = true;
    for (std::size_t i = seq.size() - window + 1; i < seq.size(); ++i) {
      const double change = rel_change(seq[i]->value.center(), seq[i - 1]->value.center());
      lim.last_rel_change = change;
      if (!(change < tol)) lim.converged = false;
    }
    if (!lim.converged) {
      est.converged = false;
      est.warnings.push_back(std::string(label_name(label)) + " subsequence not Cauchy within " +
                             std::to_string(tol));
    }
    est.per_label.push_back(lim);
  }
  const auto by_value = [](const LabelLimit& a, const LabelLimit& b) { return a.value < b.value; };
  const auto lo = std::min_element(est.per_label.begin(), est.per_label.end(), by_value);
  const auto hi = std::max_element(est.per_label.begin(), est.per_label.end(), by_value);
  est.liminf = lo->value;
  est.liminf_label = lo->label;
  est.liminf_uncertainty = lo->bracket_rel + lo->last_rel_change;
  est.limsup = hi->value;
  est.limsup_label = hi->label;
  est.limsup_uncertainty = hi->bracket_rel + hi->last_rel_change;
  return est;
}

ContentTargets closed_form_targets(double s, double m) {
  const double q = winter_q(s, m);
  ContentTargets out;
  out.s = s;
  out.m = m;
  out.sq = s * q;
  out.upper_s_content = std::exp2(1.0 - out.sq) / ((1.0 - out.sq) * kappa(1.0 - out.sq));
  out.lower_s_content = std::exp2(1.0 - s) / ((1.0 - s) * kappa(1.0 - s));
  out.lower_m_published = std::pow(m, -m) * std::pow(1.0 - m, m - 1.0) / kappa(1.0 - m);
  out.lower_m_corrected = out.lower_m_published * std::exp2(1.0 - m);
  return out;
}

LowerMinkowskiAdjudication adjudicate_lower_minkowski(double s, double m, int k_min, int k_max,
                                                      double match_tol) {
  const FractalString str = winter_string(s, m, k_max + 1);
  const ScaleSchedule sched = critical_schedule(str, m, k_min, k_max);
  const ContentProfile prof = build_profile(str, m, ContentKind::kVolume, sched);
  const LimitEstimate est = estimate_liminf_limsup(prof);
  const ContentTargets tgt = closed_form_targets(s, m);
  LowerMinkowskiAdjudication out;
  out.limit = est.liminf.to_double();
  out.limit_times_kappa = out.limit * kappa(1.0 - m);
  out.ratio_to_published = out.limit / tgt.lower_m_published;
  out.ratio_to_corrected = out.limit / tgt.lower_m_corrected;
  for (const auto& l : est.per_label) {
    if (l.label == est.liminf_label) {
      out.last_rel_change = l.last_rel_change;
      out.converged = l.converged;
    }
  }
  if (std::fabs(out.ratio_to_corrected - 1.0) <= match_tol) {
    out.matched = "corrected";
  } else if (std::fabs(out.ratio_to_published - 1.0) <= match_tol) {
    out.matched = "published";
  } else {
    out.matched = "neither";
  }
  return out;
}

DimensionReport dimension_report(const FractalString& str, double tol) {
  DimensionReport rep;
  rep.depth = str.depth();
  rep.params = str.params();

  struct LabelTracks {
    SecantTrack surface;
    SecantTrack volume;
  };
  std::vector<LabelTracks> tracks;

  if (str.is_truncation()) {
    if (str.depth() < 4) throw std::invalid_argument("dimension_report: depth must be >= 4");
    // interior minima depend on t only through O(1) offsets; iterate t toward
    // the estimate so the schedule is self-consistent
    double t = 0.5;
    for (int pass = 0; pass < 3; ++pass) {
      const ScaleSchedule sched = critical_schedule(str, t, 2, str.depth());
      tracks.assign(3, {});
      for (const auto& e : sched.entries) {
        auto& tr = tracks[static_cast<int>(e.label)];
        tr.surface.radii.push_back(e.radius);
        tr.surface.values.push_back(boundary_count(str, e.radius).center());
        tr.volume.radii.push_back(e.radius);
        tr.volume.values.push_back(parallel_volume(str, e.radius).center());
      }
      const double est = 1.0 + last_slope(tracks[2].volume).value;
      t = std::clamp(est, 0.05, 0.95);
    }
    rep.onset_k = critical_schedule(str, str.params()->m, 1, str.depth()).onset_k;
  } else {
    const int finest = static_cast<int>(std::ceil(-str.scale(str.depth()).log2_mag()));
    const ScaleSchedule sched = dyadic_schedule(1, std::max(finest, 1) + 30);
    tracks.assign(1, {});
    for (const auto& e : sched.entries) {
      tracks[0].surface.radii.push_back(e.radius);
      tracks[0].surface.values.push_back(boundary_count(str, e.radius, EvalMode::kFinite).center());
      tracks[0].volume.radii.push_back(e.radius);
      tracks[0].volume.values.push_back(parallel_volume(str, e.radius, EvalMode::kFinite).center());
    }
  }

  double s_lo = INFINITY, s_hi = -INFINITY, m_lo = INFINITY, m_hi = -INFINITY;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const SlopeResult sur = last_slope(tracks[i].surface);
    const SlopeResult vol = last_slope(tracks[i].volume);
    s_lo = std::min(s_lo, sur.value);
    s_hi = std::max(s_hi, sur.value);
    m_lo = std::min(m_lo, 1.0 + vol.value);
    m_hi = std::max(m_hi, 1.0 + vol.value);
    if (!(sur.change < tol) || !(vol.change < tol)) {
      rep.converged = false;
      rep.warnings.push_back("secant slopes not converged within " + std::to_string(tol) +
                             "; increase depth");
    }
  }
  rep.ldim_s = s_lo;
  rep.udim_s = s_hi;
  rep.ldim_m = m_lo;
  rep.udim_m = m_hi;
  return rep;
}

}  // namespace sdimlab
