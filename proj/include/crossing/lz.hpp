#pragma once

#include "crossing/dynamics.hpp"
#include "crossing/errors.hpp"

// The closed-form survival probability of the diabatic sweep in the
// infinite-window limit, exp(-2 pi / lambda), and its comparison against the
// numerically integrated finite-window value.

namespace crossing {

// exp(-2 pi / lambda) for lambda > 0. lambda = 0 returns 0 by convention (the
// adiabatic limit transfers everything); negative or non-finite lambda raises
// DomainError.
double lz_survival(double lambda);

struct LZComparison {
  double lambda = 0.0;
  double p1_numeric = 0.0;
  double p1_analytic = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double s0 = 0.0;
  double s_end = 0.0;
  double step = 0.0;  // effective step of the underlying run
};

// Window and integration controls shared by lz_compare and the sweep drivers.
struct ComparisonSettings {
  double s0 = kDefaultS0;
  double s_end = kDefaultSEnd;
  double step = kDefaultStep;
  RefineSettings refine;
  double window_fraction = kDefaultWindowFraction;
};

// Assemble the comparison from an existing trajectory (tail mean vs the
// closed form). Exposed so drivers that already hold the trajectory do not
// integrate twice.
LZComparison make_comparison(double lambda, const Trajectory& t,
                             double window_fraction = kDefaultWindowFraction);

// Integrate the dimensionless problem at full sample resolution and compare
// the tail-window mean of p1 against lz_survival(lambda). Requires
// lambda > 0.
LZComparison lz_compare(double lambda, const ComparisonSettings& settings = {});

}  // namespace crossing
