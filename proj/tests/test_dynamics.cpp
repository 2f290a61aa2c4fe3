#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "crossing/dynamics.hpp"
#include "crossing/lz.hpp"
#include "crossing/rk4.hpp"
#include "doctest.h"

using crossing::Complex;
using crossing::DimensionlessLZProblem;
using crossing::PhysicalLZProblem;
using crossing::Trajectory;
using crossing::integrate_dimensionless;
using crossing::integrate_physical;
using crossing::reduce_to_dimensionless;

namespace {

constexpr double kPi = std::numbers::pi;

DimensionlessLZProblem problem(double lambda, double s0, double s_end, double step,
                               std::size_t stride = 1) {
  DimensionlessLZProblem p;
  p.lambda = lambda;
  p.s0 = s0;
  p.s_end = s_end;
  p.step = step;
  p.sample_stride = stride;
  return p;
}

// Physical parameters engineered to reduce to a given lambda with s = 0 at
// t = t_c and the requested s window.
PhysicalLZProblem physical_for(double lambda, double s0, double s_end,
                               Complex h12 = Complex(0.3, 0.0), double hbar = 1.0,
                               double slope_difference = 1.5, double t_c = 0.4) {
  PhysicalLZProblem p;
  p.h12 = h12;
  p.hbar = hbar;
  p.slope_difference = slope_difference;
  p.velocity = lambda * std::norm(h12) / (hbar * slope_difference);
  p.t_c = t_c;
  const double scale = std::abs(h12) / hbar;
  p.t0 = t_c + s0 / scale;
  p.t_end = t_c + s_end / scale;
  return p;
}

}  // namespace

TEST_CASE("reduction to the dimensionless problem") {
  PhysicalLZProblem p;
  p.h12 = Complex(0.1, 0.0);
  p.slope_difference = 2.0;
  p.velocity = 0.5;
  p.hbar = 1.0;
  p.t0 = -10.0;
  p.t_c = 0.0;
  p.t_end = 50.0;
  const DimensionlessLZProblem d = reduce_to_dimensionless(p);
  CHECK(d.lambda == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(d.s0 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.s_end == doctest::Approx(5.0).epsilon(1e-12));

  PhysicalLZProblem ones;
  ones.h12 = Complex(1.0, 0.0);
  ones.slope_difference = 1.0;
  ones.velocity = 1.0;
  ones.hbar = 1.0;
  CHECK(reduce_to_dimensionless(ones).lambda == doctest::Approx(1.0).epsilon(1e-15));

  // Settings ride along unchanged.
  p.step_s = 2e-3;
  p.refine.enabled = true;
  p.refine.tolerance = 1e-5;
  p.sample_stride = 7;
  const DimensionlessLZProblem d2 = reduce_to_dimensionless(p);
  CHECK(d2.step == 2e-3);
  CHECK(d2.refine.enabled);
  CHECK(d2.refine.tolerance == 1e-5);
  CHECK(d2.sample_stride == 7);
}

TEST_CASE("reduction requires a coupling and valid physical inputs") {
  PhysicalLZProblem p;
  p.h12 = Complex(0.0, 0.0);
  CHECK_THROWS_AS(reduce_to_dimensionless(p), crossing::SingularReductionError);
  CHECK_THROWS_AS(integrate_physical(p), crossing::SingularReductionError);

  p.h12 = Complex(0.1, 0.0);
  p.velocity = -1.0;
  CHECK_THROWS_AS(reduce_to_dimensionless(p), crossing::DomainError);
  p.velocity = 1.0;
  p.hbar = 0.0;
  CHECK_THROWS_AS(reduce_to_dimensionless(p), crossing::DomainError);
  p.hbar = 1.0;
  p.t_end = p.t0 - 1.0;
  CHECK_THROWS_AS(reduce_to_dimensionless(p), crossing::DomainError);
}

TEST_CASE("free oscillation at lambda = 0") {
  // Decoupled diagonal: c1(s) = cos(s - s0) exactly.
  const double s0 = -10.0;
  const Trajectory t = integrate_dimensionless(problem(0.0, s0, s0 + 4.0 * kPi, 1e-4));
  double worst = 0.0;
  for (const auto& smp : t.samples)
    worst = std::max(worst, std::abs(smp.c1 - Complex(std::cos(smp.s - s0), 0.0)));
  CHECK(worst <= 1e-8);
  CHECK(t.norm_drift <= 1e-10);

  // A quarter period later the survival probability vanishes.
  const Trajectory q = integrate_dimensionless(problem(0.0, s0, s0 + 0.5 * kPi, 1e-4));
  CHECK(q.samples.back().p1() <= 1e-24);
  CHECK(q.samples.back().p2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("first sample is the initial condition exactly") {
  const Trajectory t = integrate_dimensionless(problem(3.0, -2.5, 1.0, 1e-3));
  CHECK(t.samples.front().s == -2.5);
  CHECK(t.samples.front().c1 == Complex(1.0, 0.0));
  CHECK(t.samples.front().c2 == Complex(0.0, 0.0));
  CHECK(t.samples.back().s == 1.0);  // the step is fitted to land on s_end
}

TEST_CASE("zero-length window yields the single initial sample") {
  const Trajectory t = integrate_dimensionless(problem(5.0, 2.0, 2.0, 1e-4));
  REQUIRE(t.samples.size() == 1);
  CHECK(t.samples[0].s == 2.0);
  CHECK(t.samples[0].c1 == Complex(1.0, 0.0));
  CHECK(t.norm_drift == 0.0);

  PhysicalLZProblem p = physical_for(10.0, -1.0, -1.0);
  const Trajectory tp = integrate_physical(p);
  REQUIRE(tp.samples.size() == 1);
  CHECK(tp.samples[0].c1 == Complex(1.0, 0.0));
}

TEST_CASE("norm is conserved at the default step") {
  for (const double lambda : {2.0, 20.0}) {
    const Trajectory t = integrate_dimensionless(
        problem(lambda, crossing::kDefaultS0, crossing::kDefaultSEnd,
                crossing::kDefaultStep, 0));
    CHECK(t.norm_drift <= 1e-8);
  }
}

TEST_CASE("physical integrator matches its dimensionless reduction") {
  const double lambda = 10.0;
  const PhysicalLZProblem p =
      physical_for(lambda, -10.0, 10.0, Complex(0.2, 0.0) * std::polar(1.0, 0.3));
  const Trajectory tp = integrate_physical(p);
  const Trajectory td = integrate_dimensionless(reduce_to_dimensionless(p));

  REQUIRE(tp.samples.size() == td.samples.size());
  CHECK(tp.lambda == doctest::Approx(lambda).epsilon(1e-12));
  double worst_p1 = 0.0, worst_s = 0.0, worst_c2mag = 0.0;
  for (std::size_t i = 0; i < tp.samples.size(); ++i) {
    worst_s = std::max(worst_s, std::abs(tp.samples[i].s - td.samples[i].s));
    worst_p1 = std::max(worst_p1, std::abs(tp.samples[i].p1() - td.samples[i].p1()));
    worst_c2mag = std::max(
        worst_c2mag, std::abs(std::abs(tp.samples[i].c2) - std::abs(td.samples[i].c2)));
  }
  CHECK(worst_s <= 1e-9);
  CHECK(worst_p1 <= 1e-6);     // pointwise agreement bound
  CHECK(worst_c2mag <= 1e-9);  // c2 differs only by a constant gauge phase
}

TEST_CASE("coupling phase drops out of the populations") {
  const PhysicalLZProblem a = physical_for(5.0, -8.0, 8.0, Complex(0.1, 0.0));
  const PhysicalLZProblem b =
      physical_for(5.0, -8.0, 8.0, Complex(0.1, 0.0) * std::polar(1.0, 2.1));
  const Trajectory ta = integrate_physical(a);
  const Trajectory tb = integrate_physical(b);
  REQUIRE(ta.samples.size() == tb.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.samples.size(); ++i)
    worst = std::max(worst, std::abs(ta.samples[i].p1() - tb.samples[i].p1()));
  CHECK(worst <= 1e-10);
}

TEST_CASE("window ending before the crossing keeps p1 above the closed-form limit") {
  const double lambda = 10.0;
  const double limit = std::exp(-2.0 * kPi / lambda);

  const Trajectory before = integrate_physical(physical_for(lambda, -10.0, -1.0));
  double min_before = 1.0;
  for (const auto& smp : before.samples) min_before = std::min(min_before, smp.p1());
  CHECK(min_before >= limit);

  const Trajectory through = integrate_physical(physical_for(lambda, -10.0, 10.0));
  double min_through = 1.0;
  for (const auto& smp : through.samples) min_through = std::min(min_through, smp.p1());
  CHECK(min_through < min_before);
  CHECK(through.samples.back().p1() < 0.65);  // most of the drop happened
}

TEST_CASE("sweep direction symmetry") {
  const Trajectory up = integrate_dimensionless(problem(5.0, -10.0, 10.0, 1e-3));
  const Trajectory down = integrate_dimensionless(problem(-5.0, -10.0, 10.0, 1e-3));
  REQUIRE(up.samples.size() == down.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < up.samples.size(); ++i)
    worst = std::max(worst, std::abs(up.samples[i].p1() - down.samples[i].p1()));
  CHECK(worst <= 1e-12);
}

TEST_CASE("survival probability windows") {
  Trajectory flat;
  for (int i = 0; i < 50; ++i) {
    crossing::TrajectorySample smp;
    smp.s = i;
    smp.c1 = Complex(std::sqrt(0.4), 0.0);
    smp.c2 = Complex(0.0, std::sqrt(0.6));
    flat.samples.push_back(smp);
  }
  CHECK(crossing::survival_probability(flat, 0.2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(crossing::survival_probability(flat, 1.0) == doctest::Approx(0.4).epsilon(1e-15));

  // Mean of cos^2 over a whole number of periods.
  const Trajectory osc = integrate_dimensionless(problem(0.0, 0.0, 2.0 * kPi, 1e-3));
  CHECK(crossing::survival_probability(osc, 1.0) == doctest::Approx(0.5).epsilon(1e-3));

  CHECK_THROWS_AS(crossing::survival_probability(flat, 0.0), crossing::DomainError);
  CHECK_THROWS_AS(crossing::survival_probability(flat, 1.5), crossing::DomainError);
  CHECK_THROWS_AS(crossing::survival_probability(flat, 0.1),
                  crossing::InsufficientDataError);  // 5 samples in the window
  Trajectory empty;
  CHECK_THROWS_AS(crossing::survival_probability(empty, 1.0),
                  crossing::InsufficientDataError);
}

TEST_CASE("refinement halves the step until p1 settles") {
  DimensionlessLZProblem p = problem(5.0, -10.0, 10.0, 0.02);
  p.refine.enabled = true;
  p.refine.tolerance = 1e-6;
  const Trajectory refined = integrate_dimensionless(p);
  CHECK(refined.step < 0.02);
  // The effective step is the original halved an integral number of times.
  const double ratio = 0.02 / refined.step;
  CHECK(std::abs(ratio - std::round(ratio)) <= 1e-9);
  CHECK(refined.stride == static_cast<std::size_t>(std::llround(ratio)));
  // Retained grid does not change under refinement: still one sample per
  // original step.
  CHECK(refined.samples.size() == 1001);
  CHECK(refined.samples.back().s == 10.0);

  // Against a fine fixed-step run, the refined tail agrees to the tolerance.
  const Trajectory fine = integrate_dimensionless(problem(5.0, -10.0, 10.0, 1e-4));
  CHECK(refined.samples.back().p1() ==
        doctest::Approx(fine.samples.back().p1()).epsilon(1e-5));
}

TEST_CASE("divergence is reported with its location") {
  CHECK_THROWS_WITH_AS(integrate_dimensionless(problem(1e308, -10.0, -9.0, 0.01)),
                       doctest::Contains("s="), crossing::DivergenceError);
}

TEST_CASE("retention stride controls sample density") {
  // n = 60000 steps; automatic stride keeps about 20000 samples.
  const Trajectory autod = integrate_dimensionless(problem(1.0, 0.0, 60.0, 1e-3, 0));
  CHECK(autod.stride == 3);
  CHECK(autod.samples.size() == 20001);
  CHECK(autod.samples.back().s == 60.0);

  const Trajectory strided = integrate_dimensionless(problem(1.0, 0.0, 60.0, 1e-3, 7));
  CHECK(strided.stride == 7);
  // floor(60000/7) + first + misaligned last
  CHECK(strided.samples.size() == 8573);
  CHECK(strided.samples.back().s == 60.0);

  // Strided samples are a subset of the full-resolution run.
  const Trajectory full = integrate_dimensionless(problem(1.0, 0.0, 60.0, 1e-3, 1));
  CHECK(full.samples.size() == 60001);
  CHECK(strided.samples[1].s == full.samples[7].s);
  CHECK(strided.samples[1].c1 == full.samples[7].c1);
}

TEST_CASE("downsample caps retained samples without touching metadata") {
  const Trajectory full = integrate_dimensionless(problem(2.0, -10.0, 20.0, 1e-3, 1));
  REQUIRE(full.samples.size() == 30001);
  const Trajectory thin = crossing::downsample(full, 2000);
  CHECK(thin.samples.size() <= 2000);
  CHECK(thin.samples.front().s == full.samples.front().s);
  CHECK(thin.samples.back().s == full.samples.back().s);
  CHECK(thin.norm_drift == full.norm_drift);
  CHECK(thin.lambda == full.lambda);
  CHECK(thin.step == full.step);
  CHECK(thin.stride > full.stride);

  const Trajectory same = crossing::downsample(full, 40000);
  CHECK(same.samples.size() == full.samples.size());
}

TEST_CASE("absurd step requests are rejected up front") {
  CHECK_THROWS_AS(integrate_dimensionless(problem(1.0, 0.0, 60.0, 1e-12)),
                  crossing::DomainError);
  CHECK_THROWS_AS(integrate_dimensionless(problem(1.0, 0.0, 60.0, -1e-4)),
                  crossing::DomainError);
  DimensionlessLZProblem bad = problem(std::numeric_limits<double>::quiet_NaN(), 0, 1, 1e-2);
  CHECK_THROWS_AS(integrate_dimensionless(bad), crossing::DomainError);
}

TEST_CASE("agrees with the direct second-order recast") {
  // Independent oracle: RK4 on the raw state (c1, c1') of
  // c1'' = i lambda s c1' - c1, same grid. Mathematically identical; the
  // production integrator must reproduce its c1 to roundoff levels.
  const double lambda = 2.0;
  const double s0 = -5.0, s_end = 5.0, h = 1e-4;
  const std::size_t n = 100000;

  using State = Eigen::Vector2cd;
  auto deriv = [lambda](double s, const State& y) -> State {
    return State(y(1), Complex(0.0, lambda * s) * y(1) - y(0));
  };
  std::vector<Complex> oracle_c1;
  std::vector<double> oracle_dmag;
  oracle_c1.reserve(n + 1);
  State y(Complex(1.0, 0.0), Complex(0.0, 0.0));
  oracle_c1.push_back(y(0));
  oracle_dmag.push_back(std::abs(y(1)));
  for (std::size_t i = 0; i < n; ++i) {
    y = crossing::rk4_step(s0 + static_cast<double>(i) * h, h, y, deriv);
    oracle_c1.push_back(y(0));
    oracle_dmag.push_back(std::abs(y(1)));
  }

  const Trajectory t = integrate_dimensionless(problem(lambda, s0, s_end, h, 1));
  REQUIRE(t.samples.size() == n + 1);
  double worst_c1 = 0.0, worst_mag = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    worst_c1 = std::max(worst_c1, std::abs(t.samples[i].c1 - oracle_c1[i]));
    // |c2| must track |c1'| of the raw recast.
    worst_mag = std::max(worst_mag, std::abs(std::abs(t.samples[i].c2) - oracle_dmag[i]));
  }
  CHECK(worst_c1 <= 1e-10);
  CHECK(worst_mag <= 1e-10);
}
