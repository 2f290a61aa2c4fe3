#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "crossing/dynamics.hpp"
#include "crossing/lz.hpp"
#include "crossing/model.hpp"
#include "crossing/sweep.hpp"

// Deterministic writers: every float is printed with %.17g (round-trip exact),
// newlines are LF, rows follow input order. Identical inputs produce
// byte-identical output.

namespace crossing {

// Shortest %.17g representation; round-trips to the same double.
std::string format_double(double x);

// CSV. Headers are stable API:
//   curves:     R,H11,H22,ReH12,ImH12,E1,E2,gap,c11sq
//   trajectory: s,re_c1,im_c1,re_c2,im_c2,p1,p2   (+ trailing "# key=value"
//               lines: lambda, s0, step, norm_drift, stride)
//   sweep:      lambda,p1_numeric,p1_analytic,abs_error,rel_error
//   limits:     lambda,p1_analytic
// Sweep entries without a comparison print nan in the numeric columns so row
// order is preserved.
void write_curves_csv(std::ostream& os, const std::vector<AdiabaticSolution>& rows);
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries);
void write_limits_csv(std::ostream& os, const std::vector<LimitLine>& limits);

// JSON mirrors of the same records (hand-rolled, same determinism contract).
// Comparison objects carry exactly: lambda, p1_numeric, p1_analytic,
// abs_error, rel_error, s0, s_end, step. Failed sweep entries carry lambda
// and error instead.
void write_curves_json(std::ostream& os, const std::vector<AdiabaticSolution>& rows);
void write_trajectory_json(std::ostream& os, const Trajectory& t);
void write_comparison_json(std::ostream& os, const LZComparison& c);
void write_sweep_json(std::ostream& os, const std::vector<SweepEntry>& entries);

// gnuplot scripts referencing already-written CSV files. The probability
// script draws each trace against its closed-form limit line, one plot per
// lambda by default or a single overlaid plot.
std::string curves_plot_script(const std::string& curves_csv);
std::string probability_plot_script(const std::vector<std::string>& trace_csvs,
                                    const std::vector<LimitLine>& limits,
                                    bool overlay);

// Open path for writing (binary, truncate) and hand the stream to fn; any
// failure raises IoError naming the path.
void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& fn);

}  // namespace crossing
