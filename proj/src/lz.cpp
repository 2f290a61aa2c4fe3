#include "crossing/lz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace crossing {

double lz_survival(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be finite and >= 0");
  if (lambda == 0.0) return 0.0;  // adiabatic limit: complete transfer
  return std::exp(-2.0 * std::numbers::pi / lambda);
}

LZComparison make_comparison(double lambda, const Trajectory& t, double window_fraction) {
  LZComparison c;
  c.lambda = lambda;
  c.p1_numeric = survival_probability(t, window_fraction);
  c.p1_analytic = lz_survival(lambda);
  c.abs_error = std::abs(c.p1_numeric - c.p1_analytic);
  c.rel_error = c.p1_analytic > 0.0
                    ? c.abs_error / c.p1_analytic
                    : std::numeric_limits<double>::quiet_NaN();
  c.s0 = t.s0;
  c.s_end = t.samples.empty() ? t.s0 : t.samples.back().s;
  c.step = t.step;
  return c;
}

LZComparison lz_compare(double lambda, const ComparisonSettings& settings) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be > 0");
  DimensionlessLZProblem p;
  p.lambda = lambda;
  p.s0 = settings.s0;
  p.s_end = settings.s_end;
  p.step = settings.step;
  p.refine = settings.refine;
  p.sample_stride = 1;  // the tail mean is always taken at full resolution
  const Trajectory t = integrate_dimensionless(p);
  return make_comparison(lambda, t, settings.window_fraction);
}

}  // namespace crossing
