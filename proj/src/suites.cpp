#include "sdimlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "sdimlab/contents.hpp"
#include "sdimlab/oracle.hpp"
#include "sdimlab/products.hpp"
#include "sdimlab/solvers.hpp"

namespace sdimlab {

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInconclusive: return "inconclusive";
    case CheckStatus::kInfo: return "info";
  }
  return "info";
}

CheckStatus classify(double residual, double threshold, double uncertainty) {
  if (!std::isfinite(residual)) return CheckStatus::kFail;
  if (uncertainty > threshold) return CheckStatus::kInconclusive;
  return residual <= threshold ? CheckStatus::kPass : CheckStatus::kFail;
}

namespace {

struct Context {
  const SuiteOptions& opts;
  std::string suite;
  std::vector<SuiteCheck>& out;

  // floor on any relative uncertainty: accumulated rounding at the selected precision
  double floor() const { return 64.0 * std::ldexp(1.0, -opts.precision_bits); }

  void numeric(std::string name, double measured, double target, double threshold,
               double uncertainty, bool relative, std::string detail = {}) {
    SuiteCheck c;
    c.suite = suite;
    c.name = std::move(name);
    c.measured = measured;
    c.target = target;
    c.residual = std::fabs(measured - target) / (relative ? std::fabs(target) : 1.0);
    c.threshold = threshold;
    c.uncertainty = uncertainty;
    c.status = classify(c.residual, threshold, uncertainty);
    c.detail = std::move(detail);
    out.push_back(std::move(c));
  }

  void boolean(std::string name, bool ok, std::string detail = {}) {
    SuiteCheck c;
    c.suite = suite;
    c.name = std::move(name);
    c.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
    c.measured = ok ? 1.0 : 0.0;
    c.target = 1.0;
    c.detail = std::move(detail);
    out.push_back(std::move(c));
  }

  void info(std::string name, double measured, std::string detail) {
    SuiteCheck c;
    c.suite = suite;
    c.name = std::move(name);
    c.status = CheckStatus::kInfo;
    c.measured = measured;
    c.detail = std::move(detail);
    out.push_back(std::move(c));
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

const ProfileRow& row_at(const ContentProfile& prof, ScheduleLabel label, int k) {
  for (const auto& row : prof.rows) {
    if (row.label == label && row.k == k) return row;
  }
  throw std::logic_error("profile row missing");
}

void content_convergence(Context& cx) {
  const double s = 0.25, m = 1.0 / 3.0;
  const FractalString str = winter_string(s, m, 26);
  const ContentTargets tgt = closed_form_targets(s, m);
  struct Case {
    const char* name;
    double t;
    double target;
    ScheduleLabel label;
  };
  const Case cases[] = {
      {"lower_s_content_left_endpoints", s, tgt.lower_s_content, ScheduleLabel::kLeftEndpoint},
      {"upper_s_content_right_endpoints", tgt.sq, tgt.upper_s_content,
       ScheduleLabel::kRightEndpoint},
  };
  for (const auto& c : cases) {
    const ScaleSchedule sched = critical_schedule(str, c.t, 15, 25);
    const ContentProfile prof = build_profile(str, c.t, ContentKind::kSurface, sched, c.target);
    const ProfileRow& last = row_at(prof, c.label, 25);
    cx.numeric(c.name, last.value.center().to_double(), c.target, cx.opts.tol,
               last.value.rel_halfwidth() + cx.floor(), true, "k=25");
  }

  const LowerMinkowskiAdjudication adj = adjudicate_lower_minkowski(s, m, 15, 25);
  cx.info("lower_m_constant_adjudication", adj.limit_times_kappa,
          "limit*kappa=" + fmt(adj.limit_times_kappa) + " ratio_published=" + fmt(adj.ratio_to_published) +
              " ratio_corrected=" + fmt(adj.ratio_to_corrected) + " matched=" + adj.matched +
              (adj.converged ? "" : " (not converged)"));
  cx.numeric("lower_m_content_cauchy", adj.last_rel_change, 0.0, cx.opts.tol, cx.floor(), false,
             "last relative change along interior minima");

  const ContentEstimates up = estimate_upper_contents(s, m, 15, 25);
  const double ratio = up.upper_m.mid() / up.upper_s.mid();
  cx.info("upper_content_ratio", ratio,
          "uM/uS=" + fmt(ratio) + " vs 1-sq=" + fmt(1.0 - tgt.sq) + " and 1");

  // off-critical exponents: decay above sq, blow-up below s
  {
    const ScaleSchedule sched = critical_schedule(str, 0.9, 20, 25);
    const ContentProfile prof = build_profile(str, 0.9, ContentKind::kSurface, sched);
    double worst = -INFINITY;
    for (const auto& row : prof.rows) {
      if (row.k == 25) worst = std::max(worst, row.value.center().log2_mag());
    }
    cx.boolean("supercritical_surface_decay", worst < -100.0, "max log2 value at k=25: " + fmt(worst));
  }
  {
    const FractalString deep = winter_string(s, m, 31);
    const ScaleSchedule sched = critical_schedule(deep, 0.1, 30, 30);
    const ContentProfile prof = build_profile(deep, 0.1, ContentKind::kSurface, sched);
    const double v = row_at(prof, ScheduleLabel::kLeftEndpoint, 30).value.center().log2_mag();
    cx.boolean("subcritical_surface_blowup", v > 100.0, "log2 value at k=30: " + fmt(v));
  }
}

void dimension_checks(Context& cx) {
  const DimensionReport a = dimension_report(winter_string(0.25, 1.0 / 3.0, 20));
  const double thr = 10.0 * cx.opts.tol;
  const double unc = cx.floor();
  cx.numeric("dims_ldim_S(1/4,1/3)", a.ldim_s, 0.25, thr, unc, false);
  cx.numeric("dims_ldim_M(1/4,1/3)", a.ldim_m, 1.0 / 3.0, thr, unc, false);
  cx.numeric("dims_udim_S(1/4,1/3)", a.udim_s, 0.5, thr, unc, false);
  cx.numeric("dims_udim_M(1/4,1/3)", a.udim_m, 0.5, thr, unc, false);
  const DimensionReport b = dimension_report(winter_string(0.5, 0.75, 20));
  cx.numeric("dims_udim_M(1/2,3/4)", b.udim_m, 5.0 / 6.0, 100.0 * cx.opts.tol, unc, false);

  const std::pair<double, double> pairs[] = {{0.25, 1.0 / 3.0}, {0.5, 0.75}};
  for (const auto& [s, m] : pairs) {
    const FractalString str = winter_string(s, m, 20);
    const ScaleSchedule sched = critical_schedule(str, m, 1, 20);
    const bool ok = sched.onset_k && *sched.onset_k <= 5;
    cx.boolean("bracketing_onset(" + fmt(s) + "," + fmt(m) + ")", ok,
               sched.onset_k ? "k'=" + std::to_string(*sched.onset_k) : "no onset");
  }

  cx.boolean("lemma_onset_growing", lemma_onset(2, 2, 1, LemmaMode::kGrowing) == 1);
  cx.boolean("lemma_onset_tail", lemma_onset(2, 2, 1, LemmaMode::kTail) == 0);
}

void product_dimension_checks(Context& cx) {
  const double thr = 1000.0 * cx.opts.tol;
  for (int d : {2, 3}) {
    const DimensionReport rep = product_dimension_report(0.25, 1.0 / 3.0, d, 20);
    const auto& br = *rep.bracket_slopes;
    const std::string tag = "(d=" + std::to_string(d) + ")";
    const double unc = std::fabs(br[0].first - br[0].second) + cx.floor();
    cx.numeric("product_ldim_S_lower_track" + tag, br[0].first, 0.25 + d - 1, thr, cx.floor(), false);
    cx.numeric("product_ldim_S_upper_track" + tag, br[0].second, 0.25 + d - 1, thr, cx.floor(), false);
    cx.numeric("product_ldim_S" + tag, rep.ldim_s, 0.25 + d - 1, thr, unc, false);
    cx.numeric("product_udim" + tag, rep.udim_m, 0.5 + d - 1, thr,
               std::fabs(br[3].first - br[3].second) + cx.floor(), false);
    cx.numeric("product_ldim_M" + tag, rep.ldim_m, 1.0 / 3.0 + d - 1, thr,
               std::fabs(br[2].first - br[2].second) + cx.floor(), false);
  }
  const ProductSpec spec = ProductSpec::from_string(winter_string(0.25, 1.0 / 3.0, 12), 3);
  const auto onset = proof_display_onset(spec, 2, 11);
  cx.info("proof_display_onset(d=3)", onset ? *onset : -1,
          onset ? "upper <= (c2/2+1) H0 from level " + std::to_string(*onset) : "not reached");
}

void run_props(Context& cx) {
  content_convergence(cx);
  dimension_checks(cx);
  product_dimension_checks(cx);
}

InequalityCheck dims_only(const DimensionReport& rep, double tol, double slack) {
  ContentEstimates dummy;
  dummy.upper_s = dummy.upper_m = Interval::point(1.0);
  return verify_inequalities(dummy, rep, std::nullopt, tol, slack)[1];
}

void push_verdict(Context& cx, const InequalityCheck& c, const std::string& tag) {
  SuiteCheck sc;
  sc.suite = cx.suite;
  sc.name = c.name + tag;
  sc.measured = c.mid.mid();
  sc.status = c.verdict == Verdict::kHolds      ? CheckStatus::kPass
              : c.verdict == Verdict::kViolated ? CheckStatus::kFail
                                                : CheckStatus::kInconclusive;
  sc.detail = "[" + fmt(c.lhs.lo) + "," + fmt(c.lhs.hi) + "] <= [" + fmt(c.mid.lo) + "," +
              fmt(c.mid.hi) + "] <= [" + fmt(c.rhs.lo) + "," + fmt(c.rhs.hi) + "]" +
              (c.certified ? " certified" : " within tolerance");
  cx.out.push_back(std::move(sc));
}

void run_inequalities(Context& cx) {
  const double slack = cx.floor();
  ContentEstimates est = estimate_upper_contents(0.25, 1.0 / 3.0, 15, 25);
  // fold the rounding floor into the content brackets
  const auto widen = [&](Interval x) {
    const double w = x.mid() * cx.floor();
    return Interval{x.lo - w, x.hi + w};
  };
  est.upper_s = widen(est.upper_s);
  est.upper_m = widen(est.upper_m);
  const DimensionReport dims = dimension_report(winter_string(0.25, 1.0 / 3.0, 20));
  for (const auto& c : verify_inequalities(est, dims, cx.opts.c12, cx.opts.tol, slack)) {
    push_verdict(cx, c, "(d=1)");
  }

  for (int d : {1, 2, 3}) {
    const DimensionReport rep = d == 1 ? dims : product_dimension_report(0.25, 1.0 / 3.0, d, 20);
    const std::string tag = "(d=" + std::to_string(d) + ")";
    if (d > 1) push_verdict(cx, dims_only(rep, 1e-3, slack), tag);
    const bool ok = rep.target_ldim_s() == 0.25 + d - 1 &&
                    rep.target_ldim_m() == 1.0 / 3.0 + d - 1 &&
                    std::fabs(rep.target_udim() - (1.0 + 0.25 - 0.25 * 3.0 + d - 1)) < 1e-15;
    cx.boolean("target_identities" + tag, ok);
  }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  }
  return out;
}

void string_oracles(Context& cx) {
  struct Fixture {
    std::string name;
    FractalString str;
    bool dyadic;  // endpoints exact, so threshold radii are decided exactly
  };
  const double lengths[] = {0.3, 0.11, 0.11, 0.05, 0.013};
  std::vector<Fixture> fixtures = {
      {"winter(1/4,1/3,4)", winter_string(0.25, 1.0 / 3.0, 4), true},
      {"winter(1/2,3/4,3)", winter_string(0.5, 0.75, 3), false},
      {"custom5", FractalString::from_lengths(lengths), false},
  };
  for (const auto& f : fixtures) {
    const RealizedSet set = realize(f.str, f.str.depth());
    // rounded endpoints make ties at r = l/2 arbitrary; start just inside
    const double r_lo = f.str.scale_as_double(f.str.depth()) / 2.0 * (f.dyadic ? 1.0 : 1.0 + 1e-9);
    double worst_vol = 0.0;
    bool counts_equal = true;
    for (double r : log_spaced(r_lo, 1.0, 200)) {
      const LogScalar lr = LogScalar::from_double(r);
      const double v = parallel_volume(f.str, lr, EvalMode::kFinite).center().to_double();
      const double bv = brute_parallel_measure(set, r);
      worst_vol = std::max(worst_vol, std::fabs(v - bv) / bv);
      const auto exact = f.str.cumulative_count_exact(f.str.level_of(lr));
      counts_equal = counts_equal && exact && 2 * *exact == brute_boundary_count(set, r);
    }
    cx.numeric("parallel_volume_vs_brute[" + f.name + "]", worst_vol, 0.0, 1e-12, cx.floor(), false,
               "max relative error over 200 radii");
    cx.boolean("boundary_count_vs_brute[" + f.name + "]", counts_equal);
  }

  const RealizedSet set = realize(winter_string(0.25, 1.0 / 3.0, 4), 4);
  const auto vol = [&](double r) {
    return parallel_volume(FractalString::from_lengths(set.gaps), LogScalar::from_double(r),
                           EvalMode::kFinite)
        .center()
        .to_double();
  };
  const CheckedDerivative jump = finite_diff_checked(vol, 1.0 / 32.0, 1e-6);
  cx.boolean("derivative_jump_at_threshold", jump.jump,
             "forward=" + fmt(jump.forward) + " backward=" + fmt(jump.backward));
  const CheckedDerivative smooth = finite_diff_checked(vol, 0.045, 1e-6);
  cx.boolean("stacho_string", !smooth.jump && std::fabs(smooth.central - 2.0 * 3.0) < 1e-6,
             "slope=" + fmt(smooth.central) + " expected 2*cumulative_count=6");

  // grid counts of A x [0,1] against the product of the factors
  bool sub = true;
  for (double r : {0.3, 0.1, 0.03, 0.01, 0.004}) {
    std::set<std::pair<long long, long long>> cells;
    const long long rows = static_cast<long long>(std::floor(1.0 / r));
    for (double e : set.endpoints) {
      for (long long j = 0; j <= rows; ++j) {
        cells.insert({static_cast<long long>(std::floor(e / r)), j});
      }
    }
    const std::uint64_t nb = box_count(realized_from_endpoints({0.0, 1.0}), r);
    // the unit interval meets every cell j = 0..floor(1/r), not only its endpoints' cells
    sub = sub && cells.size() <= box_count(set, r) * std::max<std::uint64_t>(nb, rows + 1);
  }
  cx.boolean("box_count_submultiplicative", sub);
}

void product_oracles(Context& cx) {
  struct Fixture {
    std::string name;
    RealizedSet set;
  };
  const std::vector<Fixture> fixtures = {
      {"{0,1}", realized_from_endpoints({0.0, 1.0})},
      {"{0,0.5,1}", realized_from_endpoints({0.0, 0.5, 1.0})},
      {"winter(1/4,1/3,2)", realize(winter_string(0.25, 1.0 / 3.0, 2), 2)},
  };
  for (const auto& f : fixtures) {
    const ProductSpec spec = ProductSpec::from_realized(f.set, 2);
    for (double r : {0.05, 0.1, 0.3}) {
      const std::string tag = "[" + f.name + ",r=" + fmt(r) + "]";
      const double h = r / 100.0;
      const double exact = product_surface_2d(spec, r);
      const double per = marching_perimeter_2d(f.set, r, h);
      cx.numeric("perimeter_vs_marching" + tag, exact, per, 0.02, 0.0, true);
      const double area = product_volume_2d(spec, r);
      cx.numeric("area_vs_raster" + tag, area, raster_area_2d(f.set, r, h), 0.01, 0.0, true);

      bool near_threshold = false;
      for (double g : f.set.gaps) near_threshold = near_threshold || std::fabs(r - g / 2.0) < 1e-3;
      if (!near_threshold) {
        const double fd = finite_diff([&](double x) { return product_volume_2d(spec, x); }, r, 1e-6);
        cx.numeric("stacho_2d" + tag, fd, exact, 1e-6, cx.floor(), true);
      }
      const ProductBounds b = product_surface_bounds(spec, LogScalar::from_double(r));
      const double lo = b.lower.lower.to_double();
      const double hi = b.upper.upper.to_double();
      cx.boolean("sandwich_2d" + tag, lo <= exact * (1 + 1e-12) && exact <= hi * (1 + 1e-12),
                 fmt(lo) + " <= " + fmt(exact) + " <= " + fmt(hi));
    }
  }

  // observed raster order over h, h/2, h/4 at r = 0.1 on the stadium pair
  const RealizedSet pair = fixtures[0].set;
  double err_sum[3] = {0, 0, 0};
  // average over small radius shifts to suppress lattice aliasing
  for (int shift = 0; shift < 4; ++shift) {
    const double r = 0.1 + 1.37e-4 * shift;
    const double ex = product_volume_2d(ProductSpec::from_realized(pair, 2), r);
    for (int i = 0; i < 3; ++i) {
      const double h = r / (50.0 * (1 << i));
      err_sum[i] += std::fabs(raster_area_2d(pair, r, h) - ex);
    }
  }
  const double order = std::log2(std::sqrt(err_sum[0] / err_sum[2]));
  cx.boolean("raster_area_order", order >= 0.9, "observed order " + fmt(order));
}

void run_oracle(Context& cx) {
  string_oracles(cx);
  product_oracles(cx);
}

}  // namespace

std::vector<SuiteCheck> run_suite(std::string_view suite, const SuiteOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("suite tolerance must be positive");
  if (opts.precision_bits < 8 || opts.precision_bits > 53) {
    throw std::invalid_argument("precision bits must lie in [8, 53]");
  }
  std::vector<SuiteCheck> out;
  const auto run = [&](const char* name, void (*fn)(Context&)) {
    Context cx{opts, name, out};
    fn(cx);
  };
  if (suite == "props" || suite == "all") run("props", run_props);
  if (suite == "inequalities" || suite == "all") run("inequalities", run_inequalities);
  if (suite == "oracle" || suite == "all") run("oracle", run_oracle);
  if (suite != "props" && suite != "inequalities" && suite != "oracle" && suite != "all") {
    throw std::invalid_argument("unknown suite: " + std::string(suite));
  }
  return out;
}

int suite_exit_code(const std::vector<SuiteCheck>& checks) {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::kFail) return 1;
    inconclusive = inconclusive || c.status == CheckStatus::kInconclusive;
  }
  return inconclusive ? 3 : 0;
}

std::string suite_report_json(const std::vector<SuiteCheck>& checks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["suite"] = c.suite;
    e["name"] = c.name;
    e["status"] = std::string(status_name(c.status));
    e["measured"] = num(c.measured);
    e["target"] = num(c.target);
    e["residual"] = num(c.residual);
    e["threshold"] = num(c.threshold);
    e["uncertainty"] = num(c.uncertainty);
    e["detail"] = c.detail;
    arr.push_back(e);
  }
  return arr.dump(2) + "\n";
}

}  // namespace sdimlab
