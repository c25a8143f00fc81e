#include <gtest/gtest.h>

#include <cmath>

#include "knot/verify.hpp"

using namespace knot;

TEST(Verify, CasePassesExactlyWhenWithinTolerance) {
  VerificationReport r;
  r.add("a", "q", 1.0, 1.0);
  r.add("b", "q", 1.0, 1.0 + 1e-15);
  r.add("c", "q", 0.0, 0.0);
  r.add("d", "q", 1.0, std::nan(""));
  EXPECT_TRUE(r.cases[0].pass);
  EXPECT_FALSE(r.cases[1].pass);
  EXPECT_TRUE(r.cases[2].pass);
  EXPECT_FALSE(r.cases[3].pass);
  EXPECT_EQ(r.failures(), 2);
  EXPECT_FALSE(r.passed());
}

TEST(Verify, ReportJsonLayout) {
  VerificationReport r;
  r.suite = "demo";
  r.seed = 9;
  r.environment = environment_string();
  r.add("x", "quantity", 2.0, 1.0);
  const Json j = report_to_json(r);
  EXPECT_EQ(j["suite"], "demo");
  EXPECT_EQ(j["seed"], 9);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["failures"], 0);
  ASSERT_EQ(j["cases"].size(), 1u);
  EXPECT_EQ(j["cases"][0]["measured"], 1.0);
  EXPECT_EQ(dump_json(j), dump_json(report_to_json(r)));
}

TEST(Verify, CurveSetIsCertifiedAndSeeded) {
  VerifyOptions o;
  const auto a = verification_curves(o);
  ASSERT_EQ(a.size(), 5u);
  for (const auto& c : a) EXPECT_TRUE(c.curve.certified()) << c.name;
  o.seed = 8;
  const auto b = verification_curves(o);
  EXPECT_EQ(a[0].curve.coeffs(), b[0].curve.coeffs());  // the circle does not depend on the seed
  EXPECT_NE(a[1].curve.coeffs(), b[1].curve.coeffs());
  EXPECT_EQ(a[2].curve.coeffs(), b[1].curve.coeffs());  // seeds are consecutive
}

TEST(Verify, FastSuitesPassAndRepeat) {
  VerifyOptions o;
  for (const char* suite : {"bilinear", "leibniz", "cor42"}) {
    const VerificationReport a = run_suite(suite, o), b = run_suite(suite, o);
    EXPECT_TRUE(a.passed()) << suite;
    EXPECT_EQ(dump_json(report_to_json(a)), dump_json(report_to_json(b))) << suite;
  }
}

TEST(Verify, RejectsBadOptions) {
  VerifyOptions o;
  EXPECT_THROW(run_suite("nonsense", o), ParameterError);
  o.alphas = {3.5};
  EXPECT_THROW(run_suite("cor42", o), ParameterError);
  o.alphas = {};
  EXPECT_THROW(run_suite("cor42", o), ParameterError);
}
