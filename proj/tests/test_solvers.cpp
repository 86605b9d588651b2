#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "sdimlab/contents.hpp"
#include "sdimlab/solvers.hpp"

using namespace sdimlab;
using boost::multiprecision::cpp_rational;

TEST(ParamsForRatio, Example) {
  const auto [s, m] = params_for_ratio(0.75, 2);
  EXPECT_NEAR(s, 0.25, 1e-15);
  EXPECT_NEAR(m, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(0.75 * (m + 1), s + 1, 1e-15);
}

TEST(ParamsForRatio, ExactRationalIdentity) {
  const cpp_rational c(3, 4);
  const auto [s, m] = params_for_ratio(c, 2);
  EXPECT_EQ(s, cpp_rational(1, 4));
  EXPECT_EQ(m, cpp_rational(2, 3));
  EXPECT_EQ(c * (m + 1), s + 1);
  for (int d = 2; d <= 6; ++d) {
    for (int num = 1; num < 8; ++num) {
      const cpp_rational lo(d - 1, d);
      const cpp_rational cc = lo + (1 - lo) * cpp_rational(num, 8);
      const auto [ss, mm] = params_for_ratio(cc, d);
      EXPECT_TRUE(valid_params(ss, mm));
      EXPECT_EQ(cc * (mm + d - 1), ss + d - 1);
    }
  }
}

TEST(ParamsForRatio, BoundariesRejected) {
  EXPECT_THROW(params_for_ratio(0.5, 2), std::invalid_argument);
  EXPECT_THROW(params_for_ratio(1.0, 2), std::invalid_argument);
  EXPECT_THROW(params_for_ratio(0.9, 1), std::invalid_argument);  // m = s/c = 1
  EXPECT_THROW(params_for_ratio(0.9, 0), std::invalid_argument);
}

TEST(ParamsForSdims, Examples) {
  EXPECT_NEAR(params_for_sdims(0.25, 0.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(winter_q(0.25, params_for_sdims(0.25, 0.5)), 2.0, 1e-14);
  EXPECT_NEAR(params_for_sdims(0.5, 0.75), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(params_for_sdims(cpp_rational(1, 4), cpp_rational(1, 2)), cpp_rational(1, 3));
  EXPECT_THROW(params_for_sdims(0.3, 0.3), std::invalid_argument);
}

TEST(ParamsForMdims, Examples) {
  EXPECT_NEAR(params_for_mdims(1.0 / 3.0, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(params_for_mdims(0.5, 0.75), 0.25, 1e-15);
  const cpp_rational s = params_for_mdims(cpp_rational(1, 3), cpp_rational(1, 2));
  EXPECT_EQ(s, cpp_rational(1, 4));
  EXPECT_EQ(1 + s - s / cpp_rational(1, 3), cpp_rational(1, 2));
  EXPECT_THROW(params_for_mdims(0.5, 0.4), std::invalid_argument);
  EXPECT_LT(params_for_mdims(0.5, 1.0 - 1e-9), 1e-8);
}

TEST(Solvers, OutputsAlwaysValidOrRejected) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng);
    try {
      const double m = params_for_sdims(a, b);
      EXPECT_TRUE(valid_params(a, m));
    } catch (const std::invalid_argument&) {
    }
    try {
      const double s = params_for_mdims(a, b);
      EXPECT_TRUE(valid_params(s, a));
    } catch (const std::invalid_argument&) {
    }
    try {
      const auto [s, m] = params_for_ratio(a, 1 + i % 4);
      EXPECT_TRUE(valid_params(s, m));
    } catch (const std::invalid_argument&) {
    }
  }
}

TEST(Solvers, RoundTripThroughDimensionReport) {
  const double m = params_for_sdims(0.25, 0.5);
  const DimensionReport a = dimension_report(winter_string(0.25, m, 20));
  EXPECT_NEAR(a.ldim_s, 0.25, 1e-4);
  EXPECT_NEAR(a.udim_s, 0.5, 1e-4);
  const double s = params_for_mdims(1.0 / 3.0, 0.5);
  const DimensionReport b = dimension_report(winter_string(s, 1.0 / 3.0, 20));
  EXPECT_NEAR(b.ldim_m, 1.0 / 3.0, 1e-4);
  EXPECT_NEAR(b.udim_m, 0.5, 1e-4);
}

TEST(Decide, Cases) {
  const Interval a{1, 2}, b{3, 4}, c{5, 6};
  EXPECT_EQ(decide(a, b, c, 0, 1e-6), Verdict::kHolds);
  EXPECT_EQ(decide(c, b, a, 0, 1e-6), Verdict::kViolated);
  // overlapping wide brackets
  EXPECT_EQ(decide({1, 3.5}, b, c, 0, 1e-6), Verdict::kInconclusive);
  // equality case with tight brackets
  const Interval tight = Interval::point(5);
  bool certified = true;
  EXPECT_EQ(decide({2, 2 + 1e-12}, {2, 2 + 1e-12}, tight, 0, 1e-9, &certified), Verdict::kHolds);
  EXPECT_FALSE(certified);
  EXPECT_EQ(decide({2, 2 + 1e-12}, {2, 2 + 1e-12}, tight, 0, 1e-15), Verdict::kInconclusive);
  EXPECT_EQ(decide({2, 2 + 1e-12}, {2, 2 + 1e-12}, c, 0, 1e-9), Verdict::kInconclusive);
}

TEST(VerifyInequalities, FlagshipHolds) {
  const ContentEstimates est = estimate_upper_contents(0.25, 1.0 / 3.0, 15, 25);
  EXPECT_NEAR(est.t, 0.5, 1e-15);
  const DimensionReport dims = dimension_report(winter_string(0.25, 1.0 / 3.0, 20));
  const auto checks = verify_inequalities(est, dims);
  ASSERT_EQ(checks.size(), 2u);
  for (const auto& c : checks) EXPECT_EQ(c.verdict, Verdict::kHolds) << c.name;
  // the measured ratio sits at the lower end of the sandwich
  EXPECT_NEAR(est.upper_m.mid() / est.upper_s.mid(), 1 - est.t, 1e-6);
}

TEST(VerifyInequalities, ConstantNeededForContentCheck) {
  ContentEstimates est;
  est.t = 0.5;
  est.upper_s = Interval::point(2);
  est.upper_m = Interval::point(1.5);
  DimensionReport dims;
  dims.ldim_s = 0.25;
  dims.ldim_m = 1.0 / 3.0;
  EXPECT_EQ(verify_inequalities(est, dims).size(), 2u);
  const auto with_c = verify_inequalities(est, dims, 0.5);
  ASSERT_EQ(with_c.size(), 3u);
  EXPECT_EQ(with_c[2].verdict, Verdict::kInconclusive);  // d = 1: exponent undefined
}

TEST(VerifyInequalities, DetectsViolation) {
  ContentEstimates est;
  est.t = 0.5;
  est.upper_s = Interval::point(1.0);
  est.upper_m = Interval::point(1.2);  // above the upper S-content
  DimensionReport dims;
  dims.ldim_s = 0.5;
  dims.ldim_m = 0.25;  // ldim_S > ldim_M
  const auto checks = verify_inequalities(est, dims);
  EXPECT_EQ(checks[0].verdict, Verdict::kViolated);
  EXPECT_EQ(checks[1].verdict, Verdict::kViolated);
}

TEST(VerifyInequalities, LowerContentSandwichInThePlane) {
  ContentEstimates est;
  est.ambient_dim = 2;
  est.t = 1.25;
  est.upper_s = Interval::point(2);
  est.upper_m = Interval::point(1.5);
  est.lower_s = Interval::point(1.0);
  est.lower_m = Interval::point(1.5);
  est.lower_m_scaled = Interval::point(0.25);
  DimensionReport dims;
  dims.ambient_dim = 2;
  dims.ldim_s = 1.25;
  dims.ldim_m = 4.0 / 3.0;
  const auto checks = verify_inequalities(est, dims, 1.0);
  ASSERT_EQ(checks.size(), 3u);
  EXPECT_EQ(checks[2].verdict, Verdict::kHolds);  // 0.5 <= 1 <= 1.5
}
