#include "crossing/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace crossing {

namespace {

constexpr std::size_t kTraceRetainTarget = 20'000;

std::size_t thread_cap(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CROSSING_LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) cap = parsed;
  }
  return std::min(cap, jobs);
}

// Run fn(i) for i in [0, jobs) on a small worker pool. Each index writes only
// its own slot, so results are bitwise independent of the thread count. The
// first exception (if any) is rethrown on the calling thread after all
// workers finish.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
  const std::size_t workers = thread_cap(jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&next, jobs, &fn, &first_error, &error_mutex] {
      for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SweepEntry run_entry(double lambda, const SweepSpec& spec) {
  SweepEntry entry;
  entry.lambda = lambda;
  try {
    DimensionlessLZProblem p;
    p.lambda = lambda;
    p.s0 = spec.settings.s0;
    p.s_end = spec.settings.s_end;
    p.step = spec.settings.step;
    p.refine = spec.settings.refine;
    p.sample_stride = 1;
    const Trajectory t = integrate_dimensionless(p);
    if (lambda > 0.0)
      entry.comparison = make_comparison(lambda, t, spec.settings.window_fraction);
    if (spec.retain_traces) entry.trace = downsample(t, kTraceRetainTarget);
  } catch (const Error& e) {
    entry.comparison.reset();
    entry.trace.reset();
    entry.error = e.category() + ": " + e.detail();
  } catch (const std::exception& e) {
    entry.comparison.reset();
    entry.trace.reset();
    entry.error = std::string("internal: ") + e.what();
  }
  return entry;
}

}  // namespace

std::vector<SweepEntry> run_lambda_sweep(const SweepSpec& spec) {
  if (spec.lambda_values.empty())
    throw DomainError("the sweep needs at least one lambda value");
  for (double lambda : spec.lambda_values) {
    if (!std::isfinite(lambda) || lambda < 0.0)
      throw DomainError("sweep lambda values must be finite and >= 0");
    if (lambda == 0.0 && !spec.retain_traces)
      throw DomainError("lambda = 0 has no closed-form comparison; "
                        "sweep it only with retain_traces");
  }

  std::vector<SweepEntry> out(spec.lambda_values.size());
  parallel_for(out.size(), [&out, &spec](std::size_t i) {
    out[i] = run_entry(spec.lambda_values[i], spec);
  });
  return out;
}

std::vector<AdiabaticSolution> reproduce_curve_figure(const DiabaticModel& model,
                                                      double r_lo, double r_hi,
                                                      std::size_t n_points) {
  if (n_points < 2) throw DomainError("the curve figure needs at least 2 grid points");
  if (!std::isfinite(r_lo) || !std::isfinite(r_hi) || !(r_hi > r_lo))
    throw DomainError("the curve figure needs a finite window with r_hi > r_lo");
  std::vector<double> grid(n_points);
  const double span = r_hi - r_lo;
  for (std::size_t i = 0; i < n_points; ++i)
    grid[i] = r_lo + span * (static_cast<double>(i) / static_cast<double>(n_points - 1));
  grid.front() = r_lo;
  grid.back() = r_hi;
  return sample_curves(model, grid);
}

ProbabilityFigureData reproduce_probability_figure(const std::vector<double>& lambda_values,
                                                   double s0, double s_end, double step) {
  if (lambda_values.empty())
    throw DomainError("the probability figure needs at least one lambda value");
  for (double lambda : lambda_values)
    if (!std::isfinite(lambda) || lambda < 0.0)
      throw DomainError("figure lambda values must be finite and >= 0");

  ProbabilityFigureData out;
  out.traces.resize(lambda_values.size());
  out.limits.resize(lambda_values.size());
  parallel_for(lambda_values.size(), [&](std::size_t i) {
    DimensionlessLZProblem p;
    p.lambda = lambda_values[i];
    p.s0 = s0;
    p.s_end = s_end;
    p.step = step;
    p.sample_stride = 0;  // auto stride: these samples exist only to be plotted
    out.traces[i] = integrate_dimensionless(p);
    out.limits[i] = LimitLine{lambda_values[i], lz_survival(lambda_values[i])};
  });
  return out;
}

}  // namespace crossing
