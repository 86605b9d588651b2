#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "sdimlab/fractal_string.hpp"
#include "sdimlab/oracle.hpp"

using namespace sdimlab;
using boost::multiprecision::cpp_bin_float_100;

namespace {

const double kThird = 1.0 / 3.0;

// L for s = 1/4, m = 1/3: N_k r_k = 2^{-2^{k-1}} exactly, summed to convergence.
double flagship_length() {
  cpp_bin_float_100 sum = 0;
  for (int k = 1; k <= 12; ++k) sum += pow(cpp_bin_float_100(2), -(1 << (k - 1)));
  return static_cast<double>(sum);
}

double ls(const LogBracket& b) { return b.center().to_double(); }

LogScalar R(double r) { return LogScalar::from_double(r); }

}  // namespace

TEST(WinterString, FlagshipLevels) {
  const FractalString f = winter_string(0.25, kThird, 4);
  ASSERT_EQ(f.depth(), 4);
  EXPECT_DOUBLE_EQ(f.params()->q, 2.0);
  const int exps[] = {2, 4, 8, 16};
  const std::uint64_t mults[] = {2, 4, 16, 256};
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(f.scale(k).log2_mag(), -exps[k - 1]);
    ASSERT_TRUE(f.multiplicities()[k - 1].is_exact());
    EXPECT_EQ(f.multiplicities()[k - 1].exact_value(), mults[k - 1]);
  }
}

TEST(WinterString, FractionalExponent) {
  const FractalString f = winter_string(0.5, 0.75, 1);
  EXPECT_NEAR(f.params()->q, 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.scale(1).log2_mag(), -5.0 / 3.0, 1e-15);
  EXPECT_EQ(f.multiplicities()[0].exact_value(), 2u);  // floor(2^{25/18})
}

TEST(WinterString, RejectsInvalidParameters) {
  EXPECT_THROW(winter_string(kThird, kThird, 4), std::invalid_argument);
  EXPECT_THROW(winter_string(0.0, 0.5, 4), std::invalid_argument);
  EXPECT_THROW(winter_string(0.5, 1.0, 4), std::invalid_argument);
  EXPECT_THROW(winter_string(0.25, 0.5, 0), std::invalid_argument);
}

TEST(WinterString, InvariantsAcrossParameters) {
  for (double s : {0.1, 0.25, 0.5, 0.7}) {
    for (double m : {s + 0.05, (s + 1) / 2, 0.95}) {
      const FractalString f = winter_string(s, m, 12);
      const WinterParams& p = *f.params();
      EXPECT_NEAR(p.q, 1 + 1 / s - 1 / m, 1e-15);
      EXPECT_LT(p.q * s, 1.0);
      for (int k = 2; k <= f.depth(); ++k) EXPECT_LT(f.scale(k), f.scale(k - 1));
    }
  }
}

TEST(Multiplicity, ExactFloorNearTheLimit) {
  // floor(2^{61.5}) = floor(2^61 sqrt 2)
  const cpp_bin_float_100 ref = floor(pow(cpp_bin_float_100(2), 61) * sqrt(cpp_bin_float_100(2)));
  const Multiplicity n = Multiplicity::floor_pow2(61.5);
  ASSERT_TRUE(n.is_exact());
  EXPECT_EQ(n.exact_value(), ref.convert_to<std::uint64_t>());
}

TEST(Multiplicity, LargeExponentsAreBracketed) {
  const Multiplicity n = Multiplicity::floor_pow2(200.5);
  EXPECT_FALSE(n.is_exact());
  const LogBracket b = n.value();
  EXPECT_LE(b.lower, b.upper);
  EXPECT_NEAR(b.upper.log2_mag(), 200.5, 1e-15);
}

TEST(TotalLength, Examples) {
  const double lengths[] = {1.0};
  EXPECT_DOUBLE_EQ(ls(FractalString::from_lengths(lengths).total_length()), 1.0);
  EXPECT_DOUBLE_EQ(ls(winter_string(0.25, kThird, 2).total_length()), 0.75);
  EXPECT_NEAR(ls(winter_string(0.25, kThird, 20).total_length()), flagship_length(), 1e-15);
  EXPECT_NEAR(flagship_length(), 0.816421509, 1e-9);
}

TEST(TotalLength, TailBracketContainsTheLimit) {
  const double L = flagship_length();
  for (int depth = 2; depth <= 6; ++depth) {
    const LogBracket b = winter_string(0.25, kThird, depth).total_length(true);
    EXPECT_LE(b.lower.to_double(), L);
    EXPECT_GE(b.upper.to_double(), L) << depth;
  }
}

TEST(TotalLength, TruncationIncrementsShrink) {
  // partial sums settle below 2^-60 relative by depth 8 for the flagship string
  const double a = ls(winter_string(0.25, kThird, 7).total_length());
  const double b = ls(winter_string(0.25, kThird, 8).total_length());
  EXPECT_LT((b - a) / a, std::ldexp(1.0, -60));
}

TEST(CumulativeCount, Examples) {
  const FractalString f = winter_string(0.25, kThird, 6);
  EXPECT_EQ(*f.cumulative_count_exact(1), 1u);
  EXPECT_EQ(*f.cumulative_count_exact(2), 3u);
  EXPECT_EQ(*f.cumulative_count_exact(4), 23u);
  EXPECT_DOUBLE_EQ(ls(f.cumulative_count(4)), 23.0);
  EXPECT_THROW(f.cumulative_count(0), std::out_of_range);
  EXPECT_THROW(f.cumulative_count(8), std::out_of_range);
}

TEST(TailLength, Examples) {
  const FractalString f = winter_string(0.25, kThird, 20);
  const double L = flagship_length();
  EXPECT_NEAR(ls(f.tail_length(1)), L, 1e-15);
  EXPECT_NEAR(ls(f.tail_length(2)), L - 0.5, 1e-15);
  EXPECT_NEAR(ls(f.tail_length(2)), 0.316421509, 1e-9);
  EXPECT_NEAR(ls(f.tail_length(3)), 0.066421509, 1e-9);
  EXPECT_THROW(f.tail_length(22), std::out_of_range);
}

TEST(BoundaryCount, Examples) {
  const FractalString f = winter_string(0.25, kThird, 4);
  EXPECT_DOUBLE_EQ(ls(boundary_count(f, R(1.0 / 16))), 6.0);
  EXPECT_DOUBLE_EQ(ls(boundary_count(f, R(1.0 / 32))), 6.0);  // 2r = r_2 belongs to k = 2
  EXPECT_DOUBLE_EQ(ls(boundary_count(f, R(0.125))), 2.0);
  EXPECT_DOUBLE_EQ(ls(boundary_count(f, R(10.0))), 2.0);
}

TEST(BoundaryCount, ResolutionLimit) {
  const FractalString f = winter_string(0.25, kThird, 4);
  const LogScalar tiny = LogScalar::from_log2(-40);
  EXPECT_THROW(boundary_count(f, tiny), std::out_of_range);
  const LogBracket a = boundary_count(f, tiny, EvalMode::kAsymptotic);
  const LogBracket b = boundary_count(winter_string(0.25, kThird, 8), tiny);
  EXPECT_NEAR(a.center().log2_ratio(b.center()), 0.0, 1e-15);
  // finite mode treats the list as the whole string
  EXPECT_DOUBLE_EQ(ls(boundary_count(f, tiny, EvalMode::kFinite)), 2.0 * (1 + 2 + 4 + 16 + 256));
}

TEST(ParallelVolume, Examples) {
  const FractalString f = winter_string(0.25, kThird, 20);
  const double L = flagship_length();
  EXPECT_NEAR(ls(parallel_volume(f, R(1.0 / 16))), 0.375 + L - 0.5, 1e-15);
  EXPECT_NEAR(ls(parallel_volume(f, R(1.0 / 16))), 0.691421509, 1e-9);
  for (double r : {0.125, 0.3, 2.0}) EXPECT_NEAR(ls(parallel_volume(f, R(r))), 2 * r + L, 1e-15);
}

TEST(ParallelVolume, VanishesAlongLeftEndpoints) {
  const FractalString f = winter_string(0.25, kThird, 12);
  double prev = INFINITY;
  for (int k = 1; k <= 12; ++k) {
    const double v = ls(parallel_volume(f, f.scale(k).scaled_pow2(-1)));
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-300 + 1e-200);
}

TEST(Functionals, MonotoneInRadius) {
  const FractalString f = winter_string(0.5, 0.75, 8);
  double v_prev = 0.0, c_prev = INFINITY;
  for (int i = 0; i < 400; ++i) {
    const LogScalar r = LogScalar::from_log2(-30.0 + 0.08 * i);
    const double v = ls(parallel_volume(f, r));
    const double c = ls(boundary_count(f, r));
    EXPECT_GE(v, v_prev);
    EXPECT_LE(c, c_prev);
    v_prev = v;
    c_prev = c;
  }
}

TEST(Functionals, BoundaryCountIsTheSlopeOfVolume) {
  // inside (r_k/2, r_{k-1}/2) the volume is affine with slope 2 cumulative_count(k)
  const FractalString f = winter_string(0.25, kThird, 5);
  for (int k = 2; k <= 5; ++k) {
    const double lo = f.scale(k).to_double() / 2;
    const double hi = f.scale(k - 1).to_double() / 2;
    const double r = std::sqrt(lo * hi);
    const double h = (hi - lo) * 1e-4;
    const double fd = (ls(parallel_volume(f, R(r + h), EvalMode::kFinite)) -
                       ls(parallel_volume(f, R(r - h), EvalMode::kFinite))) / (2 * h);
    const double slope = ls(boundary_count(f, R(r), EvalMode::kFinite));
    EXPECT_DOUBLE_EQ(slope, 2.0 * *f.cumulative_count_exact(k));
    EXPECT_NEAR(fd / slope, 1.0, 1e-7) << k;
  }
}

TEST(Realize, ConsecutivePacking) {
  const double lengths[] = {0.4, 0.6};
  const RealizedSet a = realize(FractalString::from_lengths(lengths), 2);
  EXPECT_EQ(a.endpoints, (std::vector<double>{0.0, 0.6, 1.0}));
  const RealizedSet b = realize(winter_string(0.25, kThird, 2), 2);
  EXPECT_EQ(b.endpoints,
            (std::vector<double>{0.0, 0.25, 0.5, 0.5625, 0.625, 0.6875, 0.75}));
  EXPECT_DOUBLE_EQ(b.length(), 0.75);
}

TEST(Realize, GapMultisetMatchesString) {
  const FractalString f = winter_string(0.25, kThird, 4);
  const RealizedSet set = realize(f, 4);
  EXPECT_EQ(set.gaps.size(), 2u + 4 + 16 + 256);
  const FractalString back = FractalString::from_lengths(set.gaps);
  ASSERT_EQ(back.depth(), 4);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(back.scale(k).log2_mag(), f.scale(k).log2_mag());
    EXPECT_EQ(back.multiplicities()[k - 1].exact_value(), f.multiplicities()[k - 1].exact_value());
  }
}

TEST(Realize, CountCap) {
  EXPECT_THROW(realize(winter_string(0.25, kThird, 6), 6), std::length_error);  // N_6 = 2^32
}

TEST(BoxCount, Examples) {
  EXPECT_EQ(box_count(realized_from_endpoints({0.0, 1.0}), 0.5), 2u);
  EXPECT_EQ(box_count(realized_from_endpoints({0.0, 0.6, 1.0}), 0.25), 3u);
  EXPECT_EQ(box_count(realized_from_endpoints({0.0, 1.0}), 2.0), 1u);
  EXPECT_THROW(box_count(realized_from_endpoints({0.0}), 0.0), std::domain_error);
}

TEST(StringIo, JsonRoundTrip) {
  for (const FractalString& f : {winter_string(0.25, kThird, 10), winter_string(0.5, 0.75, 30)}) {
    const FractalString g = string_from_json(to_json(f));
    ASSERT_EQ(g.depth(), f.depth());
    EXPECT_EQ(g.params()->s, f.params()->s);
    for (int k = 1; k <= f.depth(); ++k) {
      EXPECT_NEAR(g.scale(k).log2_ratio(f.scale(k)), 0.0, 1e-12);
      EXPECT_EQ(g.multiplicities()[k - 1].is_exact(), f.multiplicities()[k - 1].is_exact());
    }
  }
}

TEST(StringIo, MalformedInputRejected) {
  EXPECT_THROW(string_from_json("not json"), std::invalid_argument);
  EXPECT_THROW(string_from_json(R"({"params": null, "depth": 2, "scales_log2": [-1]})"),
               std::invalid_argument);
  EXPECT_THROW(
      string_from_json(R"({"params": {"s": 0.25, "m": 0.3333333333333333, "q": 3}, "depth": 1,
                          "scales_log2": [-2], "multiplicities": [{"exact": 2}]})"),
      std::invalid_argument);
}

TEST(StringIo, RealizationCsvHas17Digits) {
  const std::string csv = realization_csv(realized_from_endpoints({0.0, 0.1, 1.0 / 3.0}));
  EXPECT_NE(csv.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
}
