#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "crossing/errors.hpp"

// Two-level amplitude propagation through an avoided crossing traversed at
// constant velocity: the diagonal gap sweeps linearly through zero while the
// coupling stays constant. In units of the coupling the whole family collapses
// onto one dimensionless problem,
//
//   c1'' = i lambda s c1' - c1,   c1(s0) = 1, c1'(s0) = 0,
//
// with s the scaled time (s = 0 at the crossing) and lambda the single
// adiabaticity parameter. It is integrated as the equivalent coupled
// first-order system
//
//   c1' = -i e^{+i lambda s^2/2} c2,   c2' = -i e^{-i lambda s^2/2} c1,
//
// where the fast quadratic phase is handled analytically and the state
// amplitudes stay slowly varying; c2 = i c1' e^{-i lambda s^2/2}, so
// |c2| = |c1'| and |c1|^2 + |c2|^2 is the conserved norm. The reported c2 is
// fixed in the gauge whose accumulated diagonal phase vanishes at the
// crossing; p1 and p2 are gauge-independent.

namespace crossing {

using Complex = std::complex<double>;

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kDefaultS0 = -10.0;
inline constexpr double kDefaultSEnd = 50.0;
inline constexpr double kDefaultWindowFraction = 0.2;
inline constexpr double kDefaultRefineTolerance = 1e-6;

// Step-halving control. When enabled, integration reruns with the step halved
// until the largest change in p1 across the retained samples drops below
// tolerance, up to max_halvings; the retained s-grid is identical across
// passes, so the comparison is pointwise exact.
struct RefineSettings {
  bool enabled = false;
  double tolerance = kDefaultRefineTolerance;
  int max_halvings = 8;
};

// The dimensionless problem: lambda plus an integration window in s.
// sample_stride retains every stride-th step (0 = choose automatically so at
// most ~20000 samples are kept). The step is fitted to the window: the
// effective step is (s_end - s0) / n for the smallest n that does not exceed
// the requested step.
struct DimensionlessLZProblem {
  double lambda = 0.0;
  double s0 = kDefaultS0;
  double s_end = kDefaultSEnd;
  double step = kDefaultStep;
  RefineSettings refine;
  std::size_t sample_stride = 1;
};

// The physical problem: constant coupling h12 (|h12| > 0), the slope
// difference d(H11 - H22)/dR at the crossing, constant velocity v > 0, hbar,
// and a time window containing (or not) the crossing time t_c. step_s is the
// integration step expressed in dimensionless units, so a physical run and
// its reduced dimensionless twin land on identical grids.
struct PhysicalLZProblem {
  Complex h12 = Complex(1.0, 0.0);
  double slope_difference = 1.0;
  double velocity = 1.0;
  double hbar = 1.0;
  double t0 = -10.0;
  double t_c = 0.0;
  double t_end = 50.0;
  double step_s = kDefaultStep;
  RefineSettings refine;
  std::size_t sample_stride = 1;
};

struct TrajectorySample {
  double s = 0.0;
  Complex c1 = Complex(1.0, 0.0);
  Complex c2 = Complex(0.0, 0.0);

  double p1() const { return std::norm(c1); }
  double p2() const { return std::norm(c2); }
};

// Retained samples plus run metadata. norm_drift is max |p1 + p2 - 1| over
// every integration step (not just retained ones); step is the effective step
// after window fitting and refinement; stride the retention stride relative
// to that step. The first sample is exactly the initial condition.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double norm_drift = 0.0;
  double lambda = 0.0;
  double s0 = 0.0;
  double step = 0.0;
  std::size_t stride = 1;
};

// Throw DomainError (or SingularReductionError for h12 = 0) when the problem
// violates its documented preconditions.
void validate(const DimensionlessLZProblem& p);
void validate(const PhysicalLZProblem& p);

// Map a physical problem onto its dimensionless twin:
//   lambda = hbar * slope_difference * velocity / |h12|^2,
//   s = |h12| (t - t_c) / hbar.
// h12 = 0 raises SingularReductionError: the coupling sets both scales.
DimensionlessLZProblem reduce_to_dimensionless(const PhysicalLZProblem& p);

// Fixed-step RK4 propagation of the dimensionless system over [s0, s_end].
// A zero-length window yields the single initial sample. Non-finite
// amplitudes raise DivergenceError naming the s where they appeared.
Trajectory integrate_dimensionless(const DimensionlessLZProblem& p);

// Same propagation driven by the physical parameters (phase accumulated
// analytically from alpha = slope_difference * velocity), samples reported in
// dimensionless s for comparability. Agrees with the reduced dimensionless
// run pointwise to integrator roundoff.
Trajectory integrate_physical(const PhysicalLZProblem& p);

// Mean p1 over the trailing window_fraction of samples (count rounded,
// clamped to [1, n]). The window must hold at least 10 samples, else
// InsufficientDataError; window_fraction must lie in (0, 1].
double survival_probability(const Trajectory& t,
                            double window_fraction = kDefaultWindowFraction);

// Thin the trajectory to at most max_samples (first and last kept, stride
// metadata updated). Never alters anything but output volume.
Trajectory downsample(const Trajectory& t, std::size_t max_samples);

}  // namespace crossing
