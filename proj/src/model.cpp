#include "crossing/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crossing {

namespace {

std::string format_r(double r) {
  std::ostringstream os;
  os.precision(17);
  os << r;
  return os.str();
}

// Normalized eigenvectors of [[h11, h12], [conj(h12), h22]], built from the
// row whose diagonal entry lies FAR from the eigenvalue: the near difference
// e - h_near is a catastrophic cancellation of O(scale) terms, while the far
// difference is computed as +-((h11 - h22)/2 +- gap/2) with both magnitudes
// adding. First components are real non-negative by construction. h12 != 0.
//
// Row-1 null vector (h12, e - h11), phase-normalized; a = e - h11, |a| large.
Eigen::Vector2cd state_from_row1(double a, Complex h12) {
  const double mag = std::abs(h12);
  const double n = std::hypot(mag, a);
  const Complex phase = std::conj(h12) / mag;  // unit modulus
  return Eigen::Vector2cd(Complex(mag / n, 0.0), (a / n) * phase);
}

// Row-2 null vector (e - h22, conj(h12)), sign-normalized; b = e - h22.
Eigen::Vector2cd state_from_row2(double b, Complex h12) {
  const double n = std::hypot(b, std::abs(h12));
  const double sign = b < 0.0 ? -1.0 : 1.0;
  return Eigen::Vector2cd(Complex(sign * b / n, 0.0), (sign / n) * std::conj(h12));
}

}  // namespace

Eigen::Matrix2cd hamiltonian_matrix(const DiabaticElements& m) {
  Eigen::Matrix2cd h;
  h << Complex(m.h11, 0.0), m.h12, std::conj(m.h12), Complex(m.h22, 0.0);
  return h;
}

bool in_domain(const DiabaticModel& model, double r) {
  if (!std::isfinite(r)) return false;
  return std::visit(
      [r](const auto& m) -> bool {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearCrossing>) {
          return true;
        } else if constexpr (std::is_same_v<M, IonicCovalent>) {
          return r > 0.0;
        } else {
          return r >= m.r_min && r <= m.r_max;
        }
      },
      model);
}

DiabaticElements evaluate_diabatic(const DiabaticModel& model, double r) {
  if (!in_domain(model, r))
    throw DomainError("R=" + format_r(r) + " lies outside the model's domain");
  DiabaticElements out = std::visit(
      [r](const auto& m) -> DiabaticElements {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearCrossing>) {
          return {m.e1_0 + m.slope1 * r, m.e2_0 + m.slope2 * r, m.h12};
        } else if constexpr (std::is_same_v<M, IonicCovalent>) {
          return {m.covalent_level, m.ionic_asymptote - m.coulomb_coefficient / r, m.h12};
        } else {
          return {m.h11(r), m.h22(r), m.h12(r)};
        }
      },
      model);
  if (!std::isfinite(out.h11) || !std::isfinite(out.h22) ||
      !std::isfinite(out.h12.real()) || !std::isfinite(out.h12.imag()))
    throw DomainError("matrix elements are not finite at R=" + format_r(r));
  return out;
}

AdiabaticSolution adiabatic_solve(double h11, double h22, Complex h12) {
  if (!std::isfinite(h11) || !std::isfinite(h22) || !std::isfinite(h12.real()) ||
      !std::isfinite(h12.imag()))
    throw DomainError("adiabatic_solve requires finite matrix elements");

  AdiabaticSolution out;
  out.h11 = h11;
  out.h22 = h22;
  out.h12 = h12;
  out.gap = std::hypot(h11 - h22, 2.0 * std::abs(h12));
  const double mean = 0.5 * h11 + 0.5 * h22;
  out.e1 = mean - 0.5 * out.gap;
  out.e2 = mean + 0.5 * out.gap;

  if (std::abs(h12) == 0.0) {
    // Decoupled limit: adiabatic states coincide with the diabatic basis, the
    // lower one following the lower diagonal entry (canonical order if equal).
    if (h11 <= h22) {
      out.state1 = Eigen::Vector2cd(1.0, 0.0);
      out.state2 = Eigen::Vector2cd(0.0, 1.0);
    } else {
      out.state1 = Eigen::Vector2cd(0.0, 1.0);
      out.state2 = Eigen::Vector2cd(1.0, 0.0);
    }
  } else {
    // With d = (h11 - h22)/2 and g = gap/2: e1 - h11 = -(d + g),
    // e1 - h22 = d - g, e2 - h11 = -(d - g), e2 - h22 = d + g. Each state
    // uses the difference whose terms share a sign (its far diagonal entry);
    // the shared rounded values keep the pair orthogonal to roundoff.
    const double d = 0.5 * h11 - 0.5 * h22;
    const double g = 0.5 * out.gap;
    const double sum = d + g;
    const double diff = d - g;
    if (d >= 0.0) {
      out.state1 = state_from_row1(-sum, h12);
      out.state2 = state_from_row2(sum, h12);
    } else {
      out.state1 = state_from_row2(diff, h12);
      out.state2 = state_from_row1(-diff, h12);
    }
  }
  return out;
}

AdiabaticSolution adiabatic_at(const DiabaticModel& model, double r) {
  const DiabaticElements m = evaluate_diabatic(model, r);
  AdiabaticSolution out = adiabatic_solve(m.h11, m.h22, m.h12);
  out.r = r;
  return out;
}

double find_crossing(const DiabaticModel& model, double r_lo, double r_hi) {
  if (!std::isfinite(r_lo) || !std::isfinite(r_hi) || !(r_lo < r_hi))
    throw DomainError("find_crossing requires a finite bracket with r_lo < r_hi");

  // |H11 - H22| and its local convergence tolerance at one point.
  auto diff = [&model](double r) {
    const DiabaticElements m = evaluate_diabatic(model, r);
    const double f = m.h11 - m.h22;
    const double tol = 1e-12 * std::max(1.0, std::abs(m.h11) + std::abs(m.h22));
    return std::pair<double, double>(f, tol);
  };

  auto [f_lo, tol_lo] = diff(r_lo);
  if (std::abs(f_lo) <= tol_lo) return r_lo;
  auto [f_hi, tol_hi] = diff(r_hi);
  if (std::abs(f_hi) <= tol_hi) return r_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw BracketError("H11 - H22 has no sign change on [" + format_r(r_lo) + ", " +
                       format_r(r_hi) + "]");

  double lo = r_lo, hi = r_hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    auto [f_mid, tol_mid] = diff(mid);
    if (std::abs(f_mid) <= tol_mid) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    // Interval exhausted to a few ulps: no tighter root is representable.
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
      return 0.5 * (lo + hi);
  }
  return mid;
}

double slope_difference(const DiabaticModel& model, double r) {
  if (!in_domain(model, r))
    throw DomainError("R=" + format_r(r) + " lies outside the model's domain");
  return std::visit(
      [&model, r](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearCrossing>) {
          return m.slope1 - m.slope2;
        } else if constexpr (std::is_same_v<M, IonicCovalent>) {
          // d/dR [covalent - (asymptote - C/R)] = -C/R^2
          return -m.coulomb_coefficient / (r * r);
        } else {
          double h = 1e-6 * std::max(1.0, std::abs(r));
          h = std::min({h, r - m.r_min, m.r_max - r});
          if (!(h > 0.0))
            throw DomainError("R=" + format_r(r) +
                              " is not interior to the custom model's domain");
          const DiabaticElements plus = evaluate_diabatic(model, r + h);
          const DiabaticElements minus = evaluate_diabatic(model, r - h);
          return ((plus.h11 - plus.h22) - (minus.h11 - minus.h22)) / (2.0 * h);
        }
      },
      model);
}

std::vector<AdiabaticSolution> sample_curves(const DiabaticModel& model,
                                             const std::vector<double>& r_grid) {
  std::vector<AdiabaticSolution> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.push_back(adiabatic_at(model, r));
  return out;
}

LinearCrossing toy_model() { return LinearCrossing{}; }

IonicCovalent ionic_covalent_model() { return IonicCovalent{}; }

}  // namespace crossing
