// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "sdimlab/contents.hpp"
#include "sdimlab/fractal_string.hpp"
#include "sdimlab/oracle.hpp"
#include "sdimlab/products.hpp"
#include "sdimlab/solvers.hpp"
#include "sdimlab/special.hpp"

using namespace sdimlab;
using Clock = std::chrono::steady_clock;
using boost::multiprecision::cpp_rational;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, title, ok, detail);
}

std::string num(double v, int prec = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const double kS = 0.25, kM = 1.0 / 3.0;

double row_value(const ContentProfile& p, ScheduleLabel label, int k) {
  for (const auto& row : p.rows) {
    if (row.label == label && row.k == k) return row.value.center().to_double();
  }
  throw std::runtime_error("missing profile row");
}

}  // namespace

int main() {
  const auto start = Clock::now();

  criterion(1, "oracle equivalence (strings)", [](std::string& d) {
    const auto t0 = Clock::now();
    const FractalString f = winter_string(kS, kM, 4);
    const RealizedSet set = realize(f, 4);
    const double lo = f.scale_as_double(4) / 2, hi = 1.0;
    double worst_vol = 0.0, worst_count = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double r = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / 199.0);
      const LogScalar lr = LogScalar::from_double(r);
      const double v = parallel_volume(f, lr, EvalMode::kFinite).center().to_double();
      const double c = boundary_count(f, lr, EvalMode::kFinite).center().to_double();
      const double bv = brute_parallel_measure(set, r);
      const double bc = static_cast<double>(brute_boundary_count(set, r));
      worst_vol = std::max(worst_vol, std::fabs(v - bv) / bv);
      worst_count = std::max(worst_count, std::fabs(c - bc) / bc);
    }
    const double secs = seconds_since(t0);
    d = "max rel err volume " + num(worst_vol, 3) + ", count " + num(worst_count, 3) + ", " +
        num(secs, 3) + " s";
    return worst_vol <= 1e-12 && worst_count <= 1e-12 && secs < 5.0;
  });

  const FractalString deep = winter_string(kS, kM, 26);
  const ContentTargets tgt = closed_form_targets(kS, kM);

  criterion(2, "lower S-content at t=s", [&](std::string& d) {
    // independent closed form (4/3) 2^{3/4} / kappa_{3/4}
    const double target = 4.0 / 3.0 * std::pow(2.0, 0.75) / kappa(0.75);
    const ScaleSchedule sched = critical_schedule(deep, kS, 15, 25);
    const ContentProfile p = build_profile(deep, kS, ContentKind::kSurface, sched);
    const double v = row_value(p, ScheduleLabel::kLeftEndpoint, 25);
    const double res = std::fabs(v - target) / target;
    d = "value " + num(v, 12) + " target " + num(target, 12) + " residual " + num(res, 3);
    return res <= 1e-6;
  });

  criterion(3, "upper S-content at t=sq", [&](std::string& d) {
    const double target = 2.0 * std::sqrt(2.0) / kappa(0.5);
    const ScaleSchedule sched = critical_schedule(deep, 0.5, 15, 25);
    const ContentProfile p = build_profile(deep, 0.5, ContentKind::kSurface, sched);
    const double v = row_value(p, ScheduleLabel::kRightEndpoint, 25);
    const double res = std::fabs(v - target) / target;
    d = "value " + num(v, 12) + " target " + num(target, 12) + " residual " + num(res, 3);
    return res <= 1e-6;
  });

  criterion(4, "lower Minkowski adjudication", [&](std::string& d) {
    const LowerMinkowskiAdjudication a = adjudicate_lower_minkowski(kS, kM, 15, 25);
    d = "C*kappa " + num(a.limit_times_kappa, 12) + " ratio_published " + num(a.ratio_to_published, 8) +
        " ratio_corrected " + num(a.ratio_to_corrected, 12) + " change " +
        num(a.last_rel_change, 3) + " matched " + a.matched;
    const bool one_matches =
        std::fabs(a.ratio_to_published - 1) <= 1e-5 || std::fabs(a.ratio_to_corrected - 1) <= 1e-5;
    return a.last_rel_change <= 1e-6 && one_matches;
  });

  criterion(5, "dimension slopes", [](std::string& d) {
    const DimensionReport a = dimension_report(winter_string(kS, kM, 20));
    const DimensionReport b = dimension_report(winter_string(0.5, 0.75, 20));
    const double e1 = std::fabs(a.ldim_s - 0.25), e2 = std::fabs(a.ldim_m - kM);
    const double e3 = std::max(std::fabs(a.udim_s - 0.5), std::fabs(a.udim_m - 0.5));
    const double e4 = std::max(std::fabs(b.udim_s - 5.0 / 6.0), std::fabs(b.udim_m - 5.0 / 6.0));
    d = "errs " + num(e1, 3) + " " + num(e2, 3) + " " + num(e3, 3) + " | udim(1/2,3/4) err " +
        num(e4, 3);
    return e1 <= 1e-5 && e2 <= 1e-5 && e3 <= 1e-5 && e4 <= 1e-4;
  });

  criterion(6, "bracketing onset", [](std::string& d) {
    bool ok = true;
    for (auto [s, m] : {std::pair{kS, kM}, std::pair{0.5, 0.75}}) {
      const ScaleSchedule sched = critical_schedule(winter_string(s, m, 20), m, 1, 20);
      // recheck r_k < 2 x_k < r_{k-1} directly from the schedule radii
      bool bracketed = sched.onset_k.has_value();
      for (const auto& e : sched.entries) {
        if (e.label != ScheduleLabel::kInteriorMin || !sched.onset_k || e.k < *sched.onset_k) continue;
        const double two_x = e.radius.log2_mag() + 1;
        const double q = winter_q(s, m);
        // r_0 is infinite by convention
        bracketed = bracketed && -std::pow(q, e.k) < two_x &&
                    (e.k == 1 || two_x < -std::pow(q, e.k - 1));
      }
      ok = ok && bracketed && *sched.onset_k <= 5;
      d += "(" + num(s, 3) + "," + num(m, 3) + ") k'=" +
           (sched.onset_k ? std::to_string(*sched.onset_k) : "none") + " ";
    }
    return ok;
  });

  criterion(7, "inequality suite", [](std::string& d) {
    const ContentEstimates est = estimate_upper_contents(kS, kM, 15, 25);
    const DimensionReport dims = dimension_report(winter_string(kS, kM, 20));
    bool ok = true;
    for (const auto& c : verify_inequalities(est, dims)) {
      ok = ok && c.verdict == Verdict::kHolds;
      d += c.name + "=" + std::string(verdict_name(c.verdict)) + " ";
    }
    for (int dim : {1, 2, 3}) {
      const DimensionReport r = dim == 1 ? dims : product_dimension_report(kS, kM, dim, 20);
      ok = ok && r.target_ldim_s() == kS + dim - 1 && r.target_ldim_m() == kM + dim - 1 &&
           std::fabs(r.target_udim() - (0.5 + dim - 1)) < 1e-15;
    }
    d += "targets d=1,2,3 checked";
    return ok;
  });

  criterion(8, "products d=2", [](std::string& d) {
    const RealizedSet fixtures[] = {realized_from_endpoints({0.0, 1.0}),
                                    realized_from_endpoints({0.0, 0.5, 1.0}),
                                    realize(winter_string(kS, kM, 2), 2)};
    double worst_per = 0, worst_fd = 0;
    bool sandwich = true;
    for (const auto& set : fixtures) {
      const ProductSpec spec = ProductSpec::from_realized(set, 2);
      for (double r : {0.05, 0.1, 0.3}) {
        const double exact = product_surface_2d(spec, r);
        worst_per = std::max(worst_per,
                             std::fabs(exact - marching_perimeter_2d(set, r, r / 100)) / exact);
        bool near = false;
        for (double g : set.gaps) near = near || std::fabs(r - g / 2) < 1e-3;
        if (!near) {
          const double fd =
              finite_diff([&](double x) { return product_volume_2d(spec, x); }, r, 1e-6);
          worst_fd = std::max(worst_fd, std::fabs(fd - exact) / exact);
        }
        const ProductBounds b = product_surface_bounds(spec, LogScalar::from_double(r));
        sandwich = sandwich && b.lower.lower.to_double() <= exact * (1 + 1e-12) &&
                   exact <= b.upper.upper.to_double() * (1 + 1e-12);
      }
    }
    d = "perimeter err " + num(worst_per, 3) + " stacho err " + num(worst_fd, 3) +
        (sandwich ? " sandwich ok" : " sandwich broken");
    return worst_per <= 0.02 && worst_fd <= 1e-6 && sandwich;
  });

  criterion(9, "products d=3 bracket slopes", [](std::string& d) {
    const DimensionReport r = product_dimension_report(kS, kM, 3, 20);
    const auto [lo, hi] = (*r.bracket_slopes)[0];
    d = "lower track " + num(lo, 8) + " upper track " + num(hi, 8) + " target 2.25";
    return std::fabs(lo - 2.25) <= 1e-3 && std::fabs(hi - 2.25) <= 1e-3;
  });

  criterion(10, "solver round trips", [](std::string& d) {
    const double m = params_for_sdims(0.25, 0.5);
    const DimensionReport a = dimension_report(winter_string(0.25, m, 20));
    const bool sdims = std::fabs(m - kM) < 1e-15 && std::fabs(a.ldim_s - 0.25) <= 1e-5 &&
                       std::fabs(a.udim_s - 0.5) <= 1e-5;
    const cpp_rational c(3, 4);
    const auto [rs, rm] = params_for_ratio(c, 2);
    const bool ratio = c * (rm + 1) == rs + 1;
    const double s = params_for_mdims(kM, 0.5);
    const DimensionReport b = dimension_report(winter_string(s, kM, 20));
    const bool mdims = std::fabs(s - 0.25) < 1e-15 && std::fabs(b.ldim_m - kM) <= 1e-5 &&
                       std::fabs(b.udim_m - 0.5) <= 1e-5;
    d = "sdims m=" + num(m, 16) + " ratio (s,m)=(" + rs.str() + "," + rm.str() + ") mdims s=" +
        num(s, 16);
    return sdims && ratio && mdims;
  });

  criterion(11, "lemma onsets", [](std::string& d) {
    const int g = lemma_onset(2, 2, 1, LemmaMode::kGrowing, 20);
    const int t = lemma_onset(2, 2, 1, LemmaMode::kTail, 20);
    d = "growing " + std::to_string(g) + " tail " + std::to_string(t);
    return g == 1 && t == 0;
  });

  const double total = seconds_since(start);
  report(12, "full run under 60 s", total < 60.0, num(total, 4) + " s");
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}
