#include "sdimlab/products.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdimlab/special.hpp"
#include "sdimlab/steiner.hpp"

namespace sdimlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this, asin(x) = x and x sqrt(1-x^2) + asin(x) = 2x to double precision.
constexpr double kSmallArgLog2 = -27.0;

void require_2d(const ProductSpec& spec) {
  if (spec.ambient_dim != 2) throw std::invalid_argument("exact slice formulas need d = 2");
}

// Evaluation context shared by all slice formulas at one radius.
struct Slices {
  FractalString str;
  int level = 1;         // 2r in [r_k, r_{k-1})
  LogBracket wide;       // 1 + #{l_j > 2r}
  bool with_tail = false;

  Slices(const ProductSpec& spec, const LogScalar& r)
      : str(resolve_for_radius(spec.base, r, spec.mode)) {
    level = str.level_of(r);
    wide = str.cumulative_count(level);
    with_tail = spec.mode != EvalMode::kFinite && str.is_truncation();
  }
};

// log2 of x = l / (2r) for a narrow gap; <= 0
double half_ratio_log2(const LogScalar& l, const LogScalar& r) {
  return std::min(0.0, l.log2_ratio(r) - 1.0);
}

// asin(x) for x = 2^lx
LogScalar asin_pow2(double lx) {
  if (lx < kSmallArgLog2) return LogScalar::from_log2(lx);
  return LogScalar::from_double(std::asin(std::exp2(lx)));
}

// x sqrt(1 - x^2) + asin(x) for x = 2^lx
LogScalar cap_factor_pow2(double lx) {
  if (lx < kSmallArgLog2) return LogScalar::from_log2(lx + 1.0);
  const double x = std::exp2(lx);
  return LogScalar::from_double(x * std::sqrt(std::max(0.0, 1.0 - x * x)) + std::asin(x));
}

LogScalar lambda1(const ProductSpec& spec) { return LogScalar::from_double(spec.lambda1_f); }

LogBracket parallel_length(const ProductSpec& spec, const LogScalar& r) {
  LogBracket pv = parallel_volume(spec.base, r, spec.mode);
  pv.lower += lambda1(spec);
  pv.upper += lambda1(spec);
  return pv;
}

}  // namespace

ProductSpec ProductSpec::from_string(FractalString base, int d, EvalMode mode) {
  if (d < 2) throw std::invalid_argument("ProductSpec: ambient dimension must be >= 2");
  return ProductSpec{std::move(base), d, 0.0, mode};
}

ProductSpec ProductSpec::from_realized(const RealizedSet& set, int d, double lambda1_f) {
  if (d < 2) throw std::invalid_argument("ProductSpec: ambient dimension must be >= 2");
  if (!(lambda1_f >= 0.0)) throw std::invalid_argument("ProductSpec: lambda1(F) must be >= 0");
  std::vector<double> gaps;
  for (double g : set.gaps) {
    if (g > 0.0) gaps.push_back(g);
  }
  if (gaps.empty()) throw std::invalid_argument("ProductSpec: realized set has no gaps");
  return ProductSpec{FractalString::from_lengths(gaps), d, lambda1_f, EvalMode::kFinite};
}

LogBracket product_surface_2d(const ProductSpec& spec, const LogScalar& r) {
  require_2d(spec);
  const Slices sl(spec, r);
  const double rd = r.to_double();
  LogBracket out = sl.wide * LogScalar::from_double(2.0 + 2.0 * kPi * rd);
  out.lower += lambda1(spec).scaled_pow2(1);
  out.upper += lambda1(spec).scaled_pow2(1);
  const LogScalar four_r = r.scaled_pow2(2);
  for (int i = sl.level; i <= sl.str.depth(); ++i) {
    const double lx = half_ratio_log2(sl.str.scale(i), r);
    out += sl.str.multiplicity(i) * (four_r * asin_pow2(lx));
  }
  // beyond the depth every gap is narrow: 2 l <= 4 r asin(l / 2r) <= pi l
  if (sl.with_tail) out.upper += sl.str.tail_bound() * LogScalar::from_double(kPi);
  return out;
}

double product_surface_2d(const ProductSpec& spec, double r) {
  return product_surface_2d(spec, LogScalar::from_double(r)).center().to_double();
}

LogBracket product_volume_2d(const ProductSpec& spec, const LogScalar& r) {
  require_2d(spec);
  const Slices sl(spec, r);
  const double rd = r.to_double();
  LogBracket out = parallel_length(spec, r);
  // collars of the outer ends and of the wide gaps: two quarter discs each side
  out += sl.wide * LogScalar::from_double(kPi * rd * rd);
  const LogScalar two_r = r.scaled_pow2(1);
  out.lower += lambda1(spec) * two_r;
  out.upper += lambda1(spec) * two_r;
  const LogScalar two_r2 = r.pow(2.0).scaled_pow2(1);
  for (int i = sl.level; i <= sl.str.depth(); ++i) {
    const double lx = half_ratio_log2(sl.str.scale(i), r);
    out += sl.str.multiplicity(i) * (two_r2 * cap_factor_pow2(lx));
  }
  // cap factor is at most 2x, so each tail gap adds at most 2 r l
  if (sl.with_tail) out.upper += sl.str.tail_bound() * two_r;
  return out;
}

double product_volume_2d(const ProductSpec& spec, double r) {
  return product_volume_2d(spec, LogScalar::from_double(r)).center().to_double();
}

ProductBounds product_surface_bounds(const ProductSpec& spec, const LogScalar& r) {
  if (spec.ambient_dim < 2) throw std::invalid_argument("product bounds need d >= 2");
  const Slices sl(spec, r);
  const double rd = r.to_double();
  ProductBounds b;
  b.lower = boundary_count(spec.base, r, spec.mode);
  const LogScalar face = LogScalar::from_double(cube_parallel_surface(spec.ambient_dim - 1, rd));
  const LogScalar collar = LogScalar::from_double(embedded_cube_surface(spec.ambient_dim, rd));
  b.upper = sl.wide * collar;
  b.upper.lower += face * lambda1(spec);
  b.upper.upper += face * lambda1(spec);
  LogBracket narrow = sl.str.tail_length(sl.level, sl.with_tail);
  b.upper += narrow * (face * LogScalar::from_double(kPi));
  return b;
}

ProductBounds product_volume_bounds(const ProductSpec& spec, const LogScalar& r) {
  if (spec.ambient_dim < 2) throw std::invalid_argument("product bounds need d >= 2");
  ProductBounds b;
  b.lower = parallel_length(spec, r);
  const double cube = cube_parallel_volume(spec.ambient_dim - 1, r.to_double());
  b.upper = b.lower * LogScalar::from_double(cube);
  return b;
}

std::optional<int> proof_display_onset(const ProductSpec& spec, int k_min, int k_max) {
  const double c2 = embedded_cube_surface(spec.ambient_dim, 1.0);
  const LogScalar factor = LogScalar::from_double(c2 / 2.0 + 1.0);
  const LogScalar shrink = LogScalar::from_double(kRightEndpointShrink);
  std::optional<int> onset;
  for (int k = k_min; k <= k_max; ++k) {
    std::vector<LogScalar> radii = {spec.base.scale(k).scaled_pow2(-1)};
    if (k >= 2) radii.push_back(spec.base.scale(k - 1).scaled_pow2(-1) * shrink);
    bool ok = true;
    for (const auto& r : radii) {
      const ProductBounds b = product_surface_bounds(spec, r);
      const LogScalar bound = factor * boundary_count(spec.base, r, spec.mode).lower;
      if (!(b.upper.upper <= bound)) ok = false;
    }
    if (!ok) {
      onset.reset();
    } else if (!onset) {
      onset = k;
    }
  }
  return onset;
}

namespace {

struct BracketTrack {
  std::vector<LogScalar> radii;
  std::vector<LogScalar> lower;
  std::vector<LogScalar> upper;
};

double secant(const std::vector<LogScalar>& radii, const std::vector<LogScalar>& values,
              std::size_t i) {
  return values[i].log2_ratio(values[i - 1]) / -radii[i].log2_ratio(radii[i - 1]);
}

struct TrackSlopes {
  double lower = 0.0;
  double upper = 0.0;
  double change = INFINITY;
};

TrackSlopes track_slopes(const BracketTrack& tr) {
  const std::size_t n = tr.radii.size();
  if (n < 2) throw std::invalid_argument("product dimension needs at least two levels");
  TrackSlopes s;
  s.lower = secant(tr.radii, tr.lower, n - 1);
  s.upper = secant(tr.radii, tr.upper, n - 1);
  if (n >= 3) {
    s.change = std::max(std::fabs(s.lower - secant(tr.radii, tr.lower, n - 2)),
                        std::fabs(s.upper - secant(tr.radii, tr.upper, n - 2)));
  }
  return s;
}

}  // namespace

DimensionReport product_dimension_report(const FractalString& base, int d, double tol) {
  if (d < 2) throw std::invalid_argument("product_dimension_report: d must be >= 2");
  DimensionReport rep;
  rep.ambient_dim = d;
  rep.depth = base.depth();
  rep.params = base.params();

  ScaleSchedule sched;
  EvalMode mode = EvalMode::kStrict;
  if (base.is_truncation()) {
    const DimensionReport line = dimension_report(base);
    const double t = std::clamp(line.ldim_m, 0.05, 0.95);
    sched = critical_schedule(base, t, 2, base.depth());
    rep.onset_k = line.onset_k;
  } else {
    const int finest = static_cast<int>(std::ceil(-base.scale(base.depth()).log2_mag()));
    sched = dyadic_schedule(1, std::max(finest, 1) + 30);
    mode = EvalMode::kFinite;
  }
  const ProductSpec spec = ProductSpec::from_string(base, d, mode);

  struct LabelTracks {
    ScheduleLabel label;
    BracketTrack surface;
    BracketTrack volume;
  };
  std::vector<LabelTracks> tracks;
  for (const auto& e : sched.entries) {
    auto it = std::find_if(tracks.begin(), tracks.end(),
                           [&](const LabelTracks& t) { return t.label == e.label; });
    if (it == tracks.end()) {
      tracks.push_back({e.label, {}, {}});
      it = tracks.end() - 1;
    }
    const ProductBounds sb = product_surface_bounds(spec, e.radius);
    const ProductBounds vb = d == 2 ? ProductBounds{product_volume_2d(spec, e.radius),
                                                    product_volume_2d(spec, e.radius)}
                                    : product_volume_bounds(spec, e.radius);
    it->surface.radii.push_back(e.radius);
    it->surface.lower.push_back(sb.lower.center());
    it->surface.upper.push_back(d == 2 ? product_surface_2d(spec, e.radius).center()
                                       : sb.upper.center());
    it->volume.radii.push_back(e.radius);
    it->volume.lower.push_back(vb.lower.center());
    it->volume.upper.push_back(vb.upper.center());
  }

  // ldim_S, udim_S, ldim_M, udim_M as (lower-track, upper-track) slopes
  std::array<std::pair<double, double>, 4> br = {
      std::pair{INFINITY, INFINITY}, std::pair{-INFINITY, -INFINITY},
      std::pair{INFINITY, INFINITY}, std::pair{-INFINITY, -INFINITY}};
  const double shift_s = d - 1;
  const double shift_m = d;
  for (const auto& tr : tracks) {
    const TrackSlopes s = track_slopes(tr.surface);
    const TrackSlopes v = track_slopes(tr.volume);
    br[0].first = std::min(br[0].first, shift_s + s.lower);
    br[0].second = std::min(br[0].second, shift_s + s.upper);
    br[1].first = std::max(br[1].first, shift_s + s.lower);
    br[1].second = std::max(br[1].second, shift_s + s.upper);
    br[2].first = std::min(br[2].first, shift_m + v.lower);
    br[2].second = std::min(br[2].second, shift_m + v.upper);
    br[3].first = std::max(br[3].first, shift_m + v.lower);
    br[3].second = std::max(br[3].second, shift_m + v.upper);
    if (!(s.change < tol) || !(v.change < tol)) {
      rep.converged = false;
      rep.warnings.push_back(std::string(label_name(tr.label)) +
                             ": secant slopes not converged; increase depth");
    }
  }
  static constexpr const char* kNames[4] = {"ldim_S", "udim_S", "ldim_M", "udim_M"};
  for (int i = 0; i < 4; ++i) {
    if (!(std::fabs(br[i].first - br[i].second) <= tol)) {
      rep.inconclusive = true;
      rep.warnings.push_back(std::string(kNames[i]) + ": bracket slopes disagree");
    }
  }
  rep.bracket_slopes = br;
  rep.ldim_s = 0.5 * (br[0].first + br[0].second);
  rep.udim_s = 0.5 * (br[1].first + br[1].second);
  rep.ldim_m = 0.5 * (br[2].first + br[2].second);
  rep.udim_m = 0.5 * (br[3].first + br[3].second);
  return rep;
}

DimensionReport product_dimension_report(double s, double m, int d, int depth, double tol) {
  return product_dimension_report(winter_string(s, m, depth), d, tol);
}

ContentProfile product_profile(const ProductSpec& spec, double t, ContentKind kind,
                               const ScaleSchedule& schedule) {
  const int d = spec.ambient_dim;
  if (!(d - 1 < t && t < d)) throw std::invalid_argument("product_profile: t must lie in (d-1, d)");
  const double codim = d - t;
  ContentProfile prof;
  prof.t = t;
  prof.kind = kind;
  prof.ambient_dim = d;
  for (const auto& e : schedule.entries) {
    LogBracket value;
    LogScalar norm;
    if (kind == ContentKind::kVolume) {
      value = d == 2 ? product_volume_2d(spec, e.radius)
                     : [&] {
                         const ProductBounds b = product_volume_bounds(spec, e.radius);
                         return LogBracket(b.lower.lower, b.upper.upper);
                       }();
      norm = LogScalar::from_double(kappa(codim)) * e.radius.pow(codim);
    } else {
      value = d == 2 ? product_surface_2d(spec, e.radius)
                     : [&] {
                         const ProductBounds b = product_surface_bounds(spec, e.radius);
                         return LogBracket(b.lower.lower, b.upper.upper);
                       }();
      norm = LogScalar::from_double(codim * kappa(codim)) / e.radius.pow(t - (d - 1));
    }
    ProfileRow row;
    row.k = e.k;
    row.label = e.label;
    row.radius = e.radius;
    row.value = value / norm;
    prof.rows.push_back(std::move(row));
  }
  return prof;
}

}  // namespace sdimlab
