#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crossing/dynamics.hpp"
#include "crossing/lz.hpp"
#include "crossing/model.hpp"

// Batch drivers: lambda sweeps with per-value fault isolation, and the two
// canonical figure datasets (avoided-crossing curves; survival traces with
// their closed-form limit lines).

namespace crossing {

// One sweep row. Exactly one of {comparison, error} is meaningful for
// lambda > 0; lambda = 0 entries (allowed only when traces are retained)
// carry a trace but no comparison. Failed entries keep their slot so row
// order always matches the requested lambda order.
struct SweepEntry {
  double lambda = 0.0;
  std::optional<LZComparison> comparison;
  std::optional<Trajectory> trace;  // present when retain_traces, downsampled
  std::string error;                // "category: detail" when the run failed
};

struct SweepSpec {
  std::vector<double> lambda_values;
  ComparisonSettings settings;
  bool retain_traces = false;
};

// Run the sweep, one entry per lambda in input order. Entries run
// independently (worker threads, capped by the CROSSING_LAB_THREADS
// environment variable when set); a failure in one lambda is recorded in its
// entry and never aborts the rest. Results are bitwise independent of the
// thread count. lambda < 0 anywhere, or lambda = 0 without retain_traces,
// rejects the whole spec up front.
std::vector<SweepEntry> run_lambda_sweep(const SweepSpec& spec);

// Adiabatic curves on a uniform n_points grid over [r_lo, r_hi] (n >= 2,
// r_hi > r_lo), endpoints exact. This is the avoided-crossing figure dataset.
std::vector<AdiabaticSolution> reproduce_curve_figure(const DiabaticModel& model,
                                                      double r_lo, double r_hi,
                                                      std::size_t n_points);

struct LimitLine {
  double lambda = 0.0;
  double p1_analytic = 0.0;
};

// Survival traces for a set of lambda values plus the matching closed-form
// limit lines. Traces are downsampled for plotting; lambda = 0 is accepted
// here (undamped oscillation trace, limit 0 by convention).
struct ProbabilityFigureData {
  std::vector<Trajectory> traces;   // one per lambda, input order
  std::vector<LimitLine> limits;
};

ProbabilityFigureData reproduce_probability_figure(
    const std::vector<double>& lambda_values, double s0 = kDefaultS0,
    double s_end = kDefaultSEnd, double step = kDefaultStep);

}  // namespace crossing
