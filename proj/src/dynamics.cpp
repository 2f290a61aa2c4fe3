#include "crossing/dynamics.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossing/rk4.hpp"

namespace crossing {

namespace {

using State = Eigen::Vector2cd;

constexpr std::size_t kMaxStepsPerRun = 200'000'000;
constexpr std::size_t kAutoRetainTarget = 20'000;

std::string format_s(double s) {
  std::ostringstream os;
  os.precision(17);
  os << s;
  return os.str();
}

struct StepGrid {
  std::size_t n = 0;  // number of steps; grid has n + 1 points
  double h = 0.0;     // effective step, span / n exactly
};

// Fit the requested step to the window: smallest n with span/n <= step, up to
// a relative slack of 1e-12 that keeps runs over equal windows (for example a
// physical run and its dimensionless reduction) on identical grids despite
// last-ulp differences in span/step. Halving the step doubles n exactly, so
// refinement passes land on bit-identical s values.
StepGrid fit_step(double span, double step) {
  const double raw = span / step;
  if (!(raw > 0.0)) return {1, span};
  if (raw * (1.0 - 1e-12) > static_cast<double>(kMaxStepsPerRun))
    throw DomainError("step " + format_s(step) + " over a span of " + format_s(span) +
                      " needs more than 2e8 integration steps");
  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-12))));
  return {n, span / static_cast<double>(n)};
}

std::size_t resolve_stride(std::size_t requested, std::size_t n) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, (n + kAutoRetainTarget - 1) / kAutoRetainTarget);
}

struct RunResult {
  std::vector<TrajectorySample> samples;
  double drift = 0.0;
};

// Shared propagation skeleton: n RK4 steps from begin, retaining every
// stride-th point plus both endpoints, tracking max |p1 + p2 - 1| at every
// step. The final sample is recorded at the exact window end (the fitted grid
// lands there up to one rounding). Deriv maps (t, state) -> state derivative;
// Sample maps (t, state) to the stored sample.
template <typename Deriv, typename Sample>
RunResult propagate(double begin, double end, double h, std::size_t n,
                    std::size_t stride, Deriv&& deriv, Sample&& sample) {
  RunResult out;
  out.samples.reserve(n / stride + 2);
  State y(Complex(1.0, 0.0), Complex(0.0, 0.0));
  out.samples.push_back(sample(begin, y));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = begin + static_cast<double>(i) * h;
    y = rk4_step(t, h, y, deriv);
    const double t_next = i + 1 == n ? end : begin + static_cast<double>(i + 1) * h;
    const double norm = std::norm(y(0)) + std::norm(y(1));
    if (!std::isfinite(norm))
      throw DivergenceError("non-finite amplitudes at s=" + format_s(sample(t_next, y).s));
    out.drift = std::max(out.drift, std::abs(norm - 1.0));
    if ((i + 1) % stride == 0 || i + 1 == n) out.samples.push_back(sample(t_next, y));
  }
  return out;
}

// Run once at the fitted grid, then (when enabled) rerun with the step halved
// until p1 settles on the retained samples. The stride doubles with n, so the
// retained s-grid never changes and samples compare index to index.
template <typename MakeDeriv, typename MakeSample>
Trajectory integrate_refined(double begin, double end, StepGrid grid,
                             std::size_t stride0, const RefineSettings& refine,
                             MakeDeriv&& make_deriv, MakeSample&& make_sample) {
  std::size_t n = grid.n;
  double h = grid.h;
  std::size_t stride = stride0;
  RunResult run = propagate(begin, end, h, n, stride, make_deriv(), make_sample());
  if (refine.enabled) {
    for (int pass = 0; pass < refine.max_halvings; ++pass) {
      if (n > kMaxStepsPerRun / 2) break;
      RunResult fine =
          propagate(begin, end, 0.5 * h, 2 * n, 2 * stride, make_deriv(), make_sample());
      double dmax = 0.0;
      for (std::size_t i = 0; i < run.samples.size(); ++i)
        dmax = std::max(dmax, std::abs(run.samples[i].p1() - fine.samples[i].p1()));
      run = std::move(fine);
      n *= 2;
      h *= 0.5;
      stride *= 2;
      if (dmax < refine.tolerance) break;
    }
  }
  Trajectory t;
  t.samples = std::move(run.samples);
  t.norm_drift = run.drift;
  t.step = h;
  t.stride = stride;
  return t;
}

}  // namespace

void validate(const DimensionlessLZProblem& p) {
  if (!std::isfinite(p.lambda)) throw DomainError("lambda must be finite");
  if (!std::isfinite(p.s0) || !std::isfinite(p.s_end))
    throw DomainError("the window [s0, s_end] must be finite");
  if (!(p.s_end >= p.s0)) throw DomainError("s_end must not precede s0");
  if (!(p.step > 0.0) || !std::isfinite(p.step)) throw DomainError("step must be > 0");
  if (p.refine.enabled && !(p.refine.tolerance > 0.0))
    throw DomainError("refine tolerance must be > 0");
  if (p.s_end > p.s0) fit_step(p.s_end - p.s0, p.step);  // step-count guard
}

void validate(const PhysicalLZProblem& p) {
  if (std::abs(p.h12) == 0.0)
    throw SingularReductionError(
        "h12 = 0 admits no dimensionless reduction (the coupling sets the scales)");
  if (!std::isfinite(p.h12.real()) || !std::isfinite(p.h12.imag()))
    throw DomainError("h12 must be finite");
  if (!std::isfinite(p.slope_difference) || p.slope_difference == 0.0)
    throw DomainError("slope_difference must be finite and nonzero");
  if (!(p.velocity > 0.0) || !std::isfinite(p.velocity))
    throw DomainError("velocity must be > 0");
  if (!(p.hbar > 0.0) || !std::isfinite(p.hbar)) throw DomainError("hbar must be > 0");
  if (!std::isfinite(p.t0) || !std::isfinite(p.t_c) || !std::isfinite(p.t_end))
    throw DomainError("the window [t0, t_end] and t_c must be finite");
  if (!(p.t_end >= p.t0)) throw DomainError("t_end must not precede t0");
  if (!(p.step_s > 0.0) || !std::isfinite(p.step_s)) throw DomainError("step_s must be > 0");
  if (p.refine.enabled && !(p.refine.tolerance > 0.0))
    throw DomainError("refine tolerance must be > 0");
  if (p.t_end > p.t0)
    fit_step((p.t_end - p.t0) * (std::abs(p.h12) / p.hbar), p.step_s);
}

DimensionlessLZProblem reduce_to_dimensionless(const PhysicalLZProblem& p) {
  validate(p);
  const double scale = std::abs(p.h12) / p.hbar;  // ds/dt
  DimensionlessLZProblem out;
  out.lambda = p.hbar * p.slope_difference * p.velocity / std::norm(p.h12);
  out.s0 = scale * (p.t0 - p.t_c);
  out.s_end = scale * (p.t_end - p.t_c);
  out.step = p.step_s;
  out.refine = p.refine;
  out.sample_stride = p.sample_stride;
  return out;
}

Trajectory integrate_dimensionless(const DimensionlessLZProblem& p) {
  validate(p);

  Trajectory t;
  t.lambda = p.lambda;
  t.s0 = p.s0;

  if (p.s_end == p.s0) {
    t.samples.push_back(TrajectorySample{p.s0, Complex(1.0, 0.0), Complex(0.0, 0.0)});
    t.step = p.step;
    t.stride = std::max<std::size_t>(1, p.sample_stride);
    return t;
  }

  const StepGrid grid = fit_step(p.s_end - p.s0, p.step);
  const std::size_t stride = resolve_stride(p.sample_stride, grid.n);
  const double lambda = p.lambda;

  auto make_deriv = [lambda] {
    return [lambda](double s, const State& y) -> State {
      // c1' = -i e^{+i lam s^2/2} c2, c2' = -i e^{-i lam s^2/2} c1.
      const Complex w = std::polar(1.0, 0.5 * lambda * s * s);
      return State(Complex(0.0, -1.0) * (w * y(1)), Complex(0.0, -1.0) * (std::conj(w) * y(0)));
    };
  };
  auto make_sample = [] {
    return [](double s, const State& y) -> TrajectorySample {
      return TrajectorySample{s, y(0), y(1)};
    };
  };

  Trajectory run =
      integrate_refined(p.s0, p.s_end, grid, stride, p.refine, make_deriv, make_sample);
  run.lambda = p.lambda;
  run.s0 = p.s0;
  return run;
}

Trajectory integrate_physical(const PhysicalLZProblem& p) {
  validate(p);
  const double scale = std::abs(p.h12) / p.hbar;  // ds/dt
  const double lambda = p.hbar * p.slope_difference * p.velocity / std::norm(p.h12);

  Trajectory t;
  t.lambda = lambda;
  t.s0 = scale * (p.t0 - p.t_c);

  if (p.t_end == p.t0) {
    t.samples.push_back(TrajectorySample{t.s0, Complex(1.0, 0.0), Complex(0.0, 0.0)});
    t.step = p.step_s;
    t.stride = std::max<std::size_t>(1, p.sample_stride);
    return t;
  }

  // The grid is laid out in s so that physical and reduced runs of the same
  // window land on identical samples; time enters only through the analytic
  // phase of the coupling.
  const double s_end = scale * (p.t_end - p.t_c);
  const StepGrid grid = fit_step(s_end - t.s0, p.step_s);
  const std::size_t stride = resolve_stride(p.sample_stride, grid.n);

  const Complex h12 = p.h12;
  const double hbar = p.hbar;
  const double alpha = p.slope_difference * p.velocity;  // d(H11 - H22)/dt
  const double s0 = t.s0;

  auto make_deriv = [h12, hbar, alpha, scale, s0] {
    // dc/ds = (dc/dt) / scale with w(t) = (h12/hbar) e^{i alpha (t - t_c)^2 / (2 hbar)}
    // and t - t_c = s / scale.
    return [h12, hbar, alpha, scale, s0](double s, const State& y) -> State {
      const double dt_c = s / scale;  // t - t_c
      const Complex w = (h12 / hbar) * std::polar(1.0, 0.5 * (alpha / hbar) * dt_c * dt_c);
      const Complex dc1_dt = Complex(0.0, -1.0) * (w * y(1));
      const Complex dc2_dt = Complex(0.0, -1.0) * (std::conj(w) * y(0));
      return State(dc1_dt / scale, dc2_dt / scale);
    };
  };
  auto make_sample = [] {
    return [](double s, const State& y) -> TrajectorySample {
      return TrajectorySample{s, y(0), y(1)};
    };
  };

  Trajectory run =
      integrate_refined(s0, s_end, grid, stride, p.refine, make_deriv, make_sample);
  run.lambda = lambda;
  run.s0 = s0;
  return run;
}

double survival_probability(const Trajectory& t, double window_fraction) {
  if (!(window_fraction > 0.0) || window_fraction > 1.0)
    throw DomainError("window_fraction must lie in (0, 1]");
  const std::size_t total = t.samples.size();
  std::size_t count = 0;
  if (total > 0) {
    const double want = window_fraction * static_cast<double>(total);
    count = static_cast<std::size_t>(std::llround(want));
    count = std::clamp<std::size_t>(count, 1, total);
  }
  if (count < 10)
    throw InsufficientDataError("the tail window holds " + std::to_string(count) +
                                " samples; at least 10 are required");
  double sum = 0.0;
  for (std::size_t i = total - count; i < total; ++i) sum += t.samples[i].p1();
  return sum / static_cast<double>(count);
}

Trajectory downsample(const Trajectory& t, std::size_t max_samples) {
  if (max_samples < 2) throw DomainError("downsample needs max_samples >= 2");
  const std::size_t n = t.samples.size();
  if (n <= max_samples) return t;
  // Keep every k-th sample plus the last; k = ceil(n / (max - 1)) bounds the
  // retained count by max_samples even when the tail is misaligned.
  const std::size_t k = (n + max_samples - 2) / (max_samples - 1);
  Trajectory out;
  out.norm_drift = t.norm_drift;
  out.lambda = t.lambda;
  out.s0 = t.s0;
  out.step = t.step;
  out.stride = t.stride * k;
  out.samples.reserve(n / k + 2);
  for (std::size_t i = 0; i < n; i += k) out.samples.push_back(t.samples[i]);
  if ((n - 1) % k != 0) out.samples.push_back(t.samples[n - 1]);
  return out;
}

}  // namespace crossing
