// crossing-lab: avoided-crossing curves and survival-probability experiments
// for two-level diabatic models on the command line.

#include <complex>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crossing/dynamics.hpp"
#include "crossing/errors.hpp"
#include "crossing/io.hpp"
#include "crossing/lz.hpp"
#include "crossing/model.hpp"
#include "crossing/sweep.hpp"

namespace {

using crossing::Complex;

int exit_code_for(const std::string& category) {
  if (category == "usage") return 2;
  if (category == "domain") return 3;
  if (category == "divergence") return 4;
  if (category == "io") return 5;
  return 1;
}

// "-" writes to stdout, anything else through write_file (binary, LF).
void emit(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path == "-") {
    fn(std::cout);
    std::cout.flush();
    if (!std::cout.good()) throw crossing::IoError("write to stdout failed");
    return;
  }
  crossing::write_file(path, fn);
}

std::string short_label(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// model selection shared by curves

struct ModelOpts {
  std::string preset = "toy";
  double e1_0 = 0, slope1 = 0, e2_0 = 0, slope2 = 0;
  double covalent_level = 0, ionic_asymptote = 0, coulomb = 0;
  double h12_re = 0, h12_im = 0;
  CLI::Option* o_e1_0 = nullptr;
  CLI::Option* o_slope1 = nullptr;
  CLI::Option* o_e2_0 = nullptr;
  CLI::Option* o_slope2 = nullptr;
  CLI::Option* o_cov = nullptr;
  CLI::Option* o_asym = nullptr;
  CLI::Option* o_coul = nullptr;
  CLI::Option* o_h12_re = nullptr;
  CLI::Option* o_h12_im = nullptr;
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--preset", m.preset, "built-in model: toy or ionic-covalent")
      ->check(CLI::IsMember({"toy", "ionic-covalent"}))
      ->capture_default_str();
  m.o_e1_0 = cmd->add_option("--e1-0", m.e1_0, "toy: H11 value at R=0");
  m.o_slope1 = cmd->add_option("--slope1", m.slope1, "toy: dH11/dR");
  m.o_e2_0 = cmd->add_option("--e2-0", m.e2_0, "toy: H22 value at R=0");
  m.o_slope2 = cmd->add_option("--slope2", m.slope2, "toy: dH22/dR");
  m.o_cov = cmd->add_option("--covalent-level", m.covalent_level,
                            "ionic-covalent: flat H11 level");
  m.o_asym = cmd->add_option("--ionic-asymptote", m.ionic_asymptote,
                             "ionic-covalent: H22 value as R -> inf");
  m.o_coul = cmd->add_option("--coulomb", m.coulomb,
                             "ionic-covalent: Coulomb coefficient C in H22 = asym - C/R");
  m.o_h12_re = cmd->add_option("--h12-re", m.h12_re, "coupling, real part");
  m.o_h12_im = cmd->add_option("--h12-im", m.h12_im, "coupling, imaginary part");
}

crossing::DiabaticModel build_model(const ModelOpts& m) {
  const bool linear_overrides =
      m.o_e1_0->count() || m.o_slope1->count() || m.o_e2_0->count() || m.o_slope2->count();
  const bool ionic_overrides = m.o_cov->count() || m.o_asym->count() || m.o_coul->count();
  if (m.preset == "toy") {
    if (ionic_overrides)
      throw crossing::UsageError(
          "--covalent-level/--ionic-asymptote/--coulomb apply to --preset ionic-covalent");
    crossing::LinearCrossing model = crossing::toy_model();
    if (m.o_e1_0->count()) model.e1_0 = m.e1_0;
    if (m.o_slope1->count()) model.slope1 = m.slope1;
    if (m.o_e2_0->count()) model.e2_0 = m.e2_0;
    if (m.o_slope2->count()) model.slope2 = m.slope2;
    if (m.o_h12_re->count() || m.o_h12_im->count())
      model.h12 = Complex(m.o_h12_re->count() ? m.h12_re : model.h12.real(),
                          m.o_h12_im->count() ? m.h12_im : model.h12.imag());
    return model;
  }
  if (linear_overrides)
    throw crossing::UsageError("--e1-0/--slope1/--e2-0/--slope2 apply to --preset toy");
  crossing::IonicCovalent model = crossing::ionic_covalent_model();
  if (m.o_cov->count()) model.covalent_level = m.covalent_level;
  if (m.o_asym->count()) model.ionic_asymptote = m.ionic_asymptote;
  if (m.o_coul->count()) model.coulomb_coefficient = m.coulomb;
  if (m.o_h12_re->count() || m.o_h12_im->count())
    model.h12 = Complex(m.o_h12_re->count() ? m.h12_re : model.h12.real(),
                        m.o_h12_im->count() ? m.h12_im : model.h12.imag());
  return model;
}

// ---------------------------------------------------------------------------
// subcommand options

struct CurvesOpts {
  ModelOpts model;
  double rmin = 0.0;
  double rmax = 1.0;
  std::size_t points = 201;
  std::string out = "-";
  std::string format = "csv";
  std::string plot_script;
};

struct EvolveOpts {
  double lambda = 0.0;
  bool allow_signed = false;
  double s0 = crossing::kDefaultS0;
  double s_end = crossing::kDefaultSEnd;
  double step = crossing::kDefaultStep;
  std::size_t stride = 0;
  bool refine = false;
  double refine_tol = crossing::kDefaultRefineTolerance;
  int max_halvings = 8;
  std::string out = "-";
  std::string format = "csv";
};

struct LzOpts {
  double lambda = 0.0;
  double s0 = crossing::kDefaultS0;
  double s_end = crossing::kDefaultSEnd;
  double step = crossing::kDefaultStep;
  double window_fraction = crossing::kDefaultWindowFraction;
  bool refine = false;
  double refine_tol = crossing::kDefaultRefineTolerance;
  int max_halvings = 8;
  std::string out = "-";
  std::string format = "csv";
};

struct SweepOpts {
  std::vector<double> lambdas;
  double s0 = crossing::kDefaultS0;
  double s_end = crossing::kDefaultSEnd;
  double step = crossing::kDefaultStep;
  double window_fraction = crossing::kDefaultWindowFraction;
  bool refine = false;
  double refine_tol = crossing::kDefaultRefineTolerance;
  int max_halvings = 8;
  bool retain_traces = false;
  std::string trace_prefix = "trace";
  std::string limits_out;
  std::string plot_script;
  bool overlay = false;
  std::string out = "-";
  std::string format = "csv";
};

struct PresetsOpts {
  std::string format = "text";
};

// ---------------------------------------------------------------------------
// subcommand bodies

int run_curves(const CurvesOpts& o) {
  const crossing::DiabaticModel model = build_model(o.model);
  if (!crossing::in_domain(model, o.rmin) || !crossing::in_domain(model, o.rmax))
    throw crossing::DomainError("the window [" + short_label(o.rmin) + ", " +
                                short_label(o.rmax) + "] leaves the model's domain");
  const std::vector<crossing::AdiabaticSolution> rows =
      crossing::reproduce_curve_figure(model, o.rmin, o.rmax, o.points);
  if (o.format == "json")
    emit(o.out, [&rows](std::ostream& os) { crossing::write_curves_json(os, rows); });
  else
    emit(o.out, [&rows](std::ostream& os) { crossing::write_curves_csv(os, rows); });
  if (!o.plot_script.empty()) {
    const std::string csv = o.out == "-" ? "curves.csv" : o.out;
    crossing::write_file(o.plot_script, [&csv](std::ostream& os) {
      os << crossing::curves_plot_script(csv);
    });
  }
  return 0;
}

int run_evolve(const EvolveOpts& o) {
  if (!o.allow_signed && !(o.lambda > 0.0))
    throw crossing::DomainError("lambda must be > 0");
  crossing::DimensionlessLZProblem p;
  p.lambda = o.lambda;
  p.s0 = o.s0;
  p.s_end = o.s_end;
  p.step = o.step;
  p.refine = crossing::RefineSettings{o.refine, o.refine_tol, o.max_halvings};
  p.sample_stride = o.stride;
  const crossing::Trajectory t = crossing::integrate_dimensionless(p);
  if (o.format == "json")
    emit(o.out, [&t](std::ostream& os) { crossing::write_trajectory_json(os, t); });
  else
    emit(o.out, [&t](std::ostream& os) { crossing::write_trajectory_csv(os, t); });
  return 0;
}

int run_lz(const LzOpts& o) {
  if (!(o.lambda > 0.0)) throw crossing::DomainError("lambda must be > 0");
  crossing::ComparisonSettings settings;
  settings.s0 = o.s0;
  settings.s_end = o.s_end;
  settings.step = o.step;
  settings.refine = crossing::RefineSettings{o.refine, o.refine_tol, o.max_halvings};
  settings.window_fraction = o.window_fraction;
  const crossing::LZComparison c = crossing::lz_compare(o.lambda, settings);
  if (o.format == "json") {
    emit(o.out, [&c](std::ostream& os) { crossing::write_comparison_json(os, c); });
  } else {
    emit(o.out, [&c](std::ostream& os) {
      os << "lambda,p1_numeric,p1_analytic,abs_error,rel_error\n"
         << crossing::format_double(c.lambda) << ','
         << crossing::format_double(c.p1_numeric) << ','
         << crossing::format_double(c.p1_analytic) << ','
         << crossing::format_double(c.abs_error) << ','
         << crossing::format_double(c.rel_error) << '\n';
    });
  }
  return 0;
}

int run_sweep(const SweepOpts& o) {
  if (!o.plot_script.empty() && !o.retain_traces)
    throw crossing::UsageError("--plot-script needs --retain-traces (it plots the trace files)");

  crossing::SweepSpec spec;
  spec.lambda_values = o.lambdas;
  spec.settings.s0 = o.s0;
  spec.settings.s_end = o.s_end;
  spec.settings.step = o.step;
  spec.settings.refine = crossing::RefineSettings{o.refine, o.refine_tol, o.max_halvings};
  spec.settings.window_fraction = o.window_fraction;
  spec.retain_traces = o.retain_traces;

  const std::vector<crossing::SweepEntry> entries = crossing::run_lambda_sweep(spec);

  if (o.format == "json")
    emit(o.out, [&entries](std::ostream& os) { crossing::write_sweep_json(os, entries); });
  else
    emit(o.out, [&entries](std::ostream& os) { crossing::write_sweep_csv(os, entries); });

  std::vector<std::string> trace_paths;
  std::vector<crossing::LimitLine> trace_limits;
  if (o.retain_traces) {
    for (const crossing::SweepEntry& e : entries) {
      if (!e.trace) continue;
      const std::string path = o.trace_prefix + "_lambda_" + short_label(e.lambda) + ".csv";
      crossing::write_file(path, [&e](std::ostream& os) {
        crossing::write_trajectory_csv(os, *e.trace);
      });
      trace_paths.push_back(path);
      trace_limits.push_back(crossing::LimitLine{e.lambda, crossing::lz_survival(e.lambda)});
    }
  }

  if (!o.limits_out.empty()) {
    std::vector<crossing::LimitLine> limits;
    limits.reserve(entries.size());
    for (const crossing::SweepEntry& e : entries)
      limits.push_back(crossing::LimitLine{e.lambda, crossing::lz_survival(e.lambda)});
    emit(o.limits_out,
         [&limits](std::ostream& os) { crossing::write_limits_csv(os, limits); });
  }

  if (!o.plot_script.empty()) {
    const std::string script =
        crossing::probability_plot_script(trace_paths, trace_limits, o.overlay);
    crossing::write_file(o.plot_script,
                         [&script](std::ostream& os) { os << script; });
  }
  return 0;
}

int run_presets(const PresetsOpts& o) {
  const crossing::LinearCrossing toy = crossing::toy_model();
  const crossing::IonicCovalent ionic = crossing::ionic_covalent_model();
  using crossing::format_double;
  if (o.format == "json") {
    std::cout << "{\n"
              << "  \"toy\": {\"e1_0\": " << format_double(toy.e1_0)
              << ", \"slope1\": " << format_double(toy.slope1)
              << ", \"e2_0\": " << format_double(toy.e2_0)
              << ", \"slope2\": " << format_double(toy.slope2)
              << ", \"h12_re\": " << format_double(toy.h12.real())
              << ", \"h12_im\": " << format_double(toy.h12.imag()) << "},\n"
              << "  \"ionic-covalent\": {\"covalent_level\": "
              << format_double(ionic.covalent_level)
              << ", \"ionic_asymptote\": " << format_double(ionic.ionic_asymptote)
              << ", \"coulomb_coefficient\": " << format_double(ionic.coulomb_coefficient)
              << ", \"h12_re\": " << format_double(ionic.h12.real())
              << ", \"h12_im\": " << format_double(ionic.h12.imag()) << "}\n"
              << "}\n";
  } else {
    std::cout << "toy (linear crossing)\n"
              << "  H11(R) = e1_0 + slope1*R     e1_0 = " << format_double(toy.e1_0)
              << ", slope1 = " << format_double(toy.slope1) << "\n"
              << "  H22(R) = e2_0 + slope2*R     e2_0 = " << format_double(toy.e2_0)
              << ", slope2 = " << format_double(toy.slope2) << "\n"
              << "  H12    = " << format_double(toy.h12.real()) << " + "
              << format_double(toy.h12.imag()) << "i\n"
              << "  domain: all R; the curves cross at R = 0.5\n"
              << "\n"
              << "ionic-covalent (flat level vs Coulomb-relaxed level)\n"
              << "  H11(R) = covalent_level      covalent_level = "
              << format_double(ionic.covalent_level) << "\n"
              << "  H22(R) = ionic_asymptote - coulomb_coefficient/R\n"
              << "           ionic_asymptote = " << format_double(ionic.ionic_asymptote)
              << ", coulomb_coefficient = " << format_double(ionic.coulomb_coefficient)
              << "\n"
              << "  H12    = " << format_double(ionic.h12.real()) << " + "
              << format_double(ionic.h12.imag()) << "i\n"
              << "  domain: R > 0; the curves cross at R = 5\n";
  }
  std::cout.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level avoided crossings: curves, transition dynamics, and the "
               "closed-form survival limit"};
  app.require_subcommand(1);

  CurvesOpts curves;
  CLI::App* cmd_curves =
      app.add_subcommand("curves", "sample diabatic and adiabatic curves over an R window");
  add_model_options(cmd_curves, curves.model);
  cmd_curves->add_option("--rmin", curves.rmin, "window start")->capture_default_str();
  cmd_curves->add_option("--rmax", curves.rmax, "window end")->capture_default_str();
  cmd_curves->add_option("--points", curves.points, "grid points (>= 2)")
      ->capture_default_str();
  cmd_curves->add_option("--out", curves.out, "output path, - for stdout")
      ->capture_default_str();
  cmd_curves->add_option("--format", curves.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd_curves->add_option("--plot-script", curves.plot_script,
                         "also write a gnuplot script to this path");

  EvolveOpts evolve;
  CLI::App* cmd_evolve = app.add_subcommand(
      "evolve", "integrate the dimensionless two-level sweep and dump the trajectory");
  cmd_evolve->add_option("--lambda", evolve.lambda, "adiabaticity parameter (> 0)")
      ->required();
  cmd_evolve->add_flag("--allow-signed", evolve.allow_signed,
                       "accept lambda <= 0 (reversed sweep direction)");
  cmd_evolve->add_option("--s0", evolve.s0, "window start")->capture_default_str();
  cmd_evolve->add_option("--s-end", evolve.s_end, "window end")->capture_default_str();
  cmd_evolve->add_option("--step", evolve.step, "integration step")->capture_default_str();
  cmd_evolve->add_option("--stride", evolve.stride,
                         "retain every stride-th sample (0 = auto, about 20000 kept)")
      ->capture_default_str();
  cmd_evolve->add_flag("--refine", evolve.refine, "halve the step until p1 settles");
  cmd_evolve->add_option("--refine-tol", evolve.refine_tol, "refinement tolerance on p1")
      ->capture_default_str();
  cmd_evolve->add_option("--max-halvings", evolve.max_halvings,
                         "refinement pass limit")
      ->capture_default_str();
  cmd_evolve->add_option("--out", evolve.out, "output path, - for stdout")
      ->capture_default_str();
  cmd_evolve->add_option("--format", evolve.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  LzOpts lz;
  CLI::App* cmd_lz = app.add_subcommand(
      "lz", "compare the integrated survival probability against the closed form");
  cmd_lz->add_option("--lambda", lz.lambda, "adiabaticity parameter (> 0)")->required();
  cmd_lz->add_option("--s0", lz.s0, "window start")->capture_default_str();
  cmd_lz->add_option("--s-end", lz.s_end, "window end")->capture_default_str();
  cmd_lz->add_option("--step", lz.step, "integration step")->capture_default_str();
  cmd_lz->add_option("--window-fraction", lz.window_fraction,
                     "trailing fraction of samples averaged for p1_numeric")
      ->capture_default_str();
  cmd_lz->add_flag("--refine", lz.refine, "halve the step until p1 settles");
  cmd_lz->add_option("--refine-tol", lz.refine_tol, "refinement tolerance on p1")
      ->capture_default_str();
  cmd_lz->add_option("--max-halvings", lz.max_halvings, "refinement pass limit")
      ->capture_default_str();
  cmd_lz->add_option("--out", lz.out, "output path, - for stdout")->capture_default_str();
  cmd_lz->add_option("--format", lz.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SweepOpts sweep;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "run the comparison over a list of lambda values");
  cmd_sweep->add_option("--lambdas", sweep.lambdas, "comma-separated lambda list")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--s0", sweep.s0, "window start")->capture_default_str();
  cmd_sweep->add_option("--s-end", sweep.s_end, "window end")->capture_default_str();
  cmd_sweep->add_option("--step", sweep.step, "integration step")->capture_default_str();
  cmd_sweep->add_option("--window-fraction", sweep.window_fraction,
                        "trailing fraction of samples averaged for p1_numeric")
      ->capture_default_str();
  cmd_sweep->add_flag("--refine", sweep.refine, "halve the step until p1 settles");
  cmd_sweep->add_option("--refine-tol", sweep.refine_tol, "refinement tolerance on p1")
      ->capture_default_str();
  cmd_sweep->add_option("--max-halvings", sweep.max_halvings, "refinement pass limit")
      ->capture_default_str();
  cmd_sweep->add_flag("--retain-traces", sweep.retain_traces,
                      "write one downsampled trajectory CSV per lambda");
  cmd_sweep->add_option("--trace-prefix", sweep.trace_prefix,
                        "trace files are written as <prefix>_lambda_<value>.csv")
      ->capture_default_str();
  cmd_sweep->add_option("--limits-out", sweep.limits_out,
                        "also write the closed-form limit lines CSV to this path");
  cmd_sweep->add_option("--plot-script", sweep.plot_script,
                        "also write a gnuplot script to this path (needs --retain-traces)");
  cmd_sweep->add_flag("--overlay", sweep.overlay,
                      "plot script overlays all traces instead of one plot per lambda");
  cmd_sweep->add_option("--out", sweep.out, "output path, - for stdout")
      ->capture_default_str();
  cmd_sweep->add_option("--format", sweep.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  PresetsOpts presets;
  CLI::App* cmd_presets =
      app.add_subcommand("presets", "print the built-in model parameters");
  cmd_presets->add_option("--format", presets.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_curves->parsed()) return run_curves(curves);
    if (cmd_evolve->parsed()) return run_evolve(evolve);
    if (cmd_lz->parsed()) return run_lz(lz);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    if (cmd_presets->parsed()) return run_presets(presets);
    std::cerr << "error: usage: a subcommand is required\n";
    return 2;
  } catch (const crossing::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.detail() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
