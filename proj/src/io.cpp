#include "crossing/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace crossing {

namespace {

// Short readable label for titles and generated filenames (full %.17g
// precision is for data, not names).
std::string short_label(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// JSON string escaping for the error fields (quotes, backslashes, control
// characters; everything else passes through untouched).
std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// %.17g prints "nan"/"inf", which are not JSON; encode those as null.
std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

void write_comparison_fields(std::ostream& os, const LZComparison& c) {
  os << "\"lambda\": " << json_number(c.lambda)
     << ", \"p1_numeric\": " << json_number(c.p1_numeric)
     << ", \"p1_analytic\": " << json_number(c.p1_analytic)
     << ", \"abs_error\": " << json_number(c.abs_error)
     << ", \"rel_error\": " << json_number(c.rel_error)
     << ", \"s0\": " << json_number(c.s0)
     << ", \"s_end\": " << json_number(c.s_end)
     << ", \"step\": " << json_number(c.step);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_curves_csv(std::ostream& os, const std::vector<AdiabaticSolution>& rows) {
  os << "R,H11,H22,ReH12,ImH12,E1,E2,gap,c11sq\n";
  for (const AdiabaticSolution& a : rows)
    os << format_double(a.r) << ',' << format_double(a.h11) << ','
       << format_double(a.h22) << ',' << format_double(a.h12.real()) << ','
       << format_double(a.h12.imag()) << ',' << format_double(a.e1) << ','
       << format_double(a.e2) << ',' << format_double(a.gap) << ','
       << format_double(a.c11_sq()) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "s,re_c1,im_c1,re_c2,im_c2,p1,p2\n";
  for (const TrajectorySample& p : t.samples)
    os << format_double(p.s) << ',' << format_double(p.c1.real()) << ','
       << format_double(p.c1.imag()) << ',' << format_double(p.c2.real()) << ','
       << format_double(p.c2.imag()) << ',' << format_double(p.p1()) << ','
       << format_double(p.p2()) << '\n';
  os << "# lambda=" << format_double(t.lambda) << '\n'
     << "# s0=" << format_double(t.s0) << '\n'
     << "# step=" << format_double(t.step) << '\n'
     << "# norm_drift=" << format_double(t.norm_drift) << '\n'
     << "# stride=" << t.stride << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries) {
  os << "lambda,p1_numeric,p1_analytic,abs_error,rel_error\n";
  for (const SweepEntry& e : entries) {
    os << format_double(e.lambda) << ',';
    if (e.comparison) {
      const LZComparison& c = *e.comparison;
      os << format_double(c.p1_numeric) << ',' << format_double(c.p1_analytic) << ','
         << format_double(c.abs_error) << ',' << format_double(c.rel_error) << '\n';
    } else {
      // Keeps the row (and its order) for entries with no comparison: failed
      // runs and lambda = 0 trace-only rows.
      os << "nan,nan,nan,nan\n";
    }
  }
}

void write_limits_csv(std::ostream& os, const std::vector<LimitLine>& limits) {
  os << "lambda,p1_analytic\n";
  for (const LimitLine& l : limits)
    os << format_double(l.lambda) << ',' << format_double(l.p1_analytic) << '\n';
}

void write_curves_json(std::ostream& os, const std::vector<AdiabaticSolution>& rows) {
  os << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const AdiabaticSolution& a = rows[i];
    os << "  {\"R\": " << json_number(a.r) << ", \"H11\": " << json_number(a.h11)
       << ", \"H22\": " << json_number(a.h22)
       << ", \"ReH12\": " << json_number(a.h12.real())
       << ", \"ImH12\": " << json_number(a.h12.imag())
       << ", \"E1\": " << json_number(a.e1) << ", \"E2\": " << json_number(a.e2)
       << ", \"gap\": " << json_number(a.gap)
       << ", \"c11sq\": " << json_number(a.c11_sq()) << '}'
       << (i + 1 < rows.size() ? ",\n" : "\n");
  }
  os << "]\n";
}

void write_trajectory_json(std::ostream& os, const Trajectory& t) {
  os << "{\n  \"lambda\": " << json_number(t.lambda)
     << ", \"s0\": " << json_number(t.s0) << ", \"step\": " << json_number(t.step)
     << ", \"norm_drift\": " << json_number(t.norm_drift)
     << ", \"stride\": " << t.stride << ",\n  \"samples\": [\n";
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const TrajectorySample& p = t.samples[i];
    os << "    {\"s\": " << json_number(p.s)
       << ", \"re_c1\": " << json_number(p.c1.real())
       << ", \"im_c1\": " << json_number(p.c1.imag())
       << ", \"re_c2\": " << json_number(p.c2.real())
       << ", \"im_c2\": " << json_number(p.c2.imag())
       << ", \"p1\": " << json_number(p.p1()) << ", \"p2\": " << json_number(p.p2())
       << '}' << (i + 1 < t.samples.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
}

void write_comparison_json(std::ostream& os, const LZComparison& c) {
  os << '{';
  write_comparison_fields(os, c);
  os << "}\n";
}

void write_sweep_json(std::ostream& os, const std::vector<SweepEntry>& entries) {
  os << "[\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SweepEntry& e = entries[i];
    os << "  {";
    if (e.comparison) {
      write_comparison_fields(os, *e.comparison);
    } else {
      os << "\"lambda\": " << json_number(e.lambda) << ", \"error\": \""
         << json_escape(e.error.empty() ? "no comparison for lambda = 0" : e.error)
         << '"';
    }
    os << '}' << (i + 1 < entries.size() ? ",\n" : "\n");
  }
  os << "]\n";
}

std::string curves_plot_script(const std::string& curves_csv) {
  std::ostringstream os;
  os << "# gnuplot script; expects the curves CSV next to it\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key top left\n"
     << "set xlabel 'R'\n\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'curves_energies.png'\n"
     << "set ylabel 'energy'\n"
     << "plot '" << curves_csv << "' using 1:2 with lines dashtype 2 title 'H11', \\\n"
     << "     '" << curves_csv << "' using 1:3 with lines dashtype 2 title 'H22', \\\n"
     << "     '" << curves_csv << "' using 1:6 with lines linewidth 2 title 'E1', \\\n"
     << "     '" << curves_csv << "' using 1:7 with lines linewidth 2 title 'E2'\n\n"
     << "set output 'curves_weights.png'\n"
     << "set ylabel 'diabatic weight in the lower state'\n"
     << "set yrange [0:1]\n"
     << "plot '" << curves_csv << "' using 1:9 with lines linewidth 2 title '|c11|^2', \\\n"
     << "     '" << curves_csv << "' using 1:(1-$9) with lines linewidth 2 title '|c21|^2'\n";
  return os.str();
}

std::string probability_plot_script(const std::vector<std::string>& trace_csvs,
                                    const std::vector<LimitLine>& limits,
                                    bool overlay) {
  std::ostringstream os;
  os << "# gnuplot script; expects the trace CSVs next to it\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key top right\n"
     << "set xlabel 's'\n"
     << "set ylabel 'p1'\n"
     << "set yrange [0:1]\n"
     << "set terminal pngcairo size 900,600\n\n";
  const std::size_t n = std::min(trace_csvs.size(), limits.size());
  if (overlay) {
    os << "set output 'survival_overlay.png'\n" << "plot ";
    for (std::size_t i = 0; i < n; ++i) {
      const std::string lam = short_label(limits[i].lambda);
      os << "'" << trace_csvs[i] << "' using 1:6 with lines title 'lambda=" << lam
         << "', \\\n     " << format_double(limits[i].p1_analytic)
         << " with lines dashtype 2 title 'limit " << lam << "'";
      os << (i + 1 < n ? ", \\\n     " : "\n");
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string lam = short_label(limits[i].lambda);
      os << "set output 'survival_lambda_" << lam << ".png'\n"
         << "plot '" << trace_csvs[i] << "' using 1:6 with lines title 'lambda=" << lam
         << "', \\\n     " << format_double(limits[i].p1_analytic)
         << " with lines dashtype 2 title 'closed-form limit'\n\n";
    }
  }
  return os.str();
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& fn) {
  std::ofstream ofs(path, std::ios::binary | std::ios::trunc);
  if (!ofs) throw IoError("cannot open '" + path.string() + "' for writing");
  fn(ofs);
  ofs.flush();
  if (!ofs.good()) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace crossing
