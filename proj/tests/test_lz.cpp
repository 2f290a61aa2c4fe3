#include <cmath>
#include <numbers>
#include <vector>

#include "crossing/lz.hpp"
#include "doctest.h"

using crossing::ComparisonSettings;
using crossing::LZComparison;
using crossing::lz_compare;
using crossing::lz_survival;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed form at pinned arguments") {
  // Reference values computed with extended precision, frozen here.
  CHECK(lz_survival(10.0) == doctest::Approx(0.53348809109110325).epsilon(1e-15));
  CHECK(lz_survival(4.0) == doctest::Approx(0.20787957635076190).epsilon(1e-15));
  CHECK(lz_survival(0.5) == doctest::Approx(3.4873423562089955e-06).epsilon(1e-14));
  // At lambda = 2 pi the exponent is exactly -1.
  CHECK(lz_survival(2.0 * kPi) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(lz_survival(0.0) == 0.0);
}

TEST_CASE("closed form is a strictly increasing map into (0, 1)") {
  std::vector<double> lambdas;
  for (int i = 1; i <= 200; ++i) lambdas.push_back(0.25 * i);
  double prev = 0.0;
  for (const double lambda : lambdas) {
    const double p = lz_survival(lambda);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(p > prev);
    prev = p;
  }
  // Limits: deep adiabatic means vanishing survival, fast sweeps keep it.
  CHECK(lz_survival(1e-3) < 1e-300);
  CHECK(lz_survival(1e6) > 0.99999);
}

TEST_CASE("closed form rejects invalid arguments") {
  CHECK_THROWS_AS(lz_survival(-1.0), crossing::DomainError);
  CHECK_THROWS_AS(lz_survival(std::numeric_limits<double>::infinity()),
                  crossing::DomainError);
  CHECK_THROWS_AS(lz_survival(std::numeric_limits<double>::quiet_NaN()),
                  crossing::DomainError);
  CHECK_THROWS_AS(lz_compare(0.0), crossing::DomainError);
  CHECK_THROWS_AS(lz_compare(-3.0), crossing::DomainError);
}

TEST_CASE("numeric survival approaches the closed form at default settings") {
  // lambda = 10 at the defaults is the pinned regression point.
  const LZComparison c10 = lz_compare(10.0);
  CHECK(c10.p1_analytic == doctest::Approx(0.53348809109110325).epsilon(1e-15));
  CHECK(c10.p1_numeric == doctest::Approx(0.53780562960555311).epsilon(1e-9));
  CHECK(c10.abs_error == doctest::Approx(0.0043175385144498257).epsilon(1e-6));
  CHECK(c10.abs_error <= 0.02);
  CHECK(c10.rel_error == doctest::Approx(c10.abs_error / c10.p1_analytic).epsilon(1e-12));
  CHECK(c10.s0 == crossing::kDefaultS0);
  CHECK(c10.s_end == crossing::kDefaultSEnd);
  CHECK(c10.step == doctest::Approx(crossing::kDefaultStep).epsilon(1e-9));

  for (const double lambda : {2.0, 4.0}) {
    const LZComparison c = lz_compare(lambda);
    CHECK(c.abs_error <= 0.02);
  }
}

TEST_CASE("slow sweeps hit the finite-window floor") {
  // For lambda = 0.5 the start point still carries an adiabatic admixture of
  // sin^2(atan(2 / (lambda |s0|)) / 2) ~ 0.036, so the tail mean cannot reach
  // the closed form (~3.5e-6) from the default window.
  const LZComparison c = lz_compare(0.5);
  CHECK(c.p1_analytic == doctest::Approx(3.4873423562089955e-06).epsilon(1e-14));
  CHECK(c.p1_numeric >= 0.03);
  CHECK(c.p1_numeric <= 0.045);

  // Starting far earlier shrinks the admixture and the tail follows the
  // closed form to within 0.01.
  ComparisonSettings wide;
  wide.s0 = -30.0;
  const LZComparison far = lz_compare(0.5, wide);
  CHECK(far.abs_error <= 0.01);
  CHECK(far.p1_numeric < c.p1_numeric);
}

TEST_CASE("tail mean is stable against the window end") {
  double lo = 1.0, hi = 0.0;
  for (const double s_end : {20.0, 50.0, 100.0}) {
    ComparisonSettings s;
    s.s_end = s_end;
    const LZComparison c = lz_compare(10.0, s);
    lo = std::min(lo, c.p1_numeric);
    hi = std::max(hi, c.p1_numeric);
  }
  CHECK(hi - lo <= 0.005);
}

TEST_CASE("make_comparison reproduces lz_compare from the same trajectory") {
  crossing::DimensionlessLZProblem p;
  p.lambda = 6.0;
  p.sample_stride = 1;
  const crossing::Trajectory t = crossing::integrate_dimensionless(p);
  const LZComparison a = crossing::make_comparison(6.0, t);
  const LZComparison b = lz_compare(6.0);
  CHECK(a.p1_numeric == b.p1_numeric);
  CHECK(a.p1_analytic == b.p1_analytic);
  CHECK(a.abs_error == b.abs_error);
  CHECK(a.rel_error == b.rel_error);
  CHECK(a.s0 == b.s0);
  CHECK(a.s_end == b.s_end);
  CHECK(a.step == b.step);
}
