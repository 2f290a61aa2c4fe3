#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "crossing/errors.hpp"

// Two-state diabatic models H(R) = [[H11, H12], [H12*, H22]] along one nuclear
// coordinate, and the closed-form solution of the associated 2x2 secular
// problem: adiabatic energies E1 <= E2 split by
//   gap = sqrt((H11 - H22)^2 + 4 |H12|^2)
// about the mean level, with normalized eigenvectors whose first (diabatic)
// component is fixed real and non-negative.

namespace crossing {

using Complex = std::complex<double>;

// Two straight diabatic curves crossing once, constant coupling.
// H11 = e1_0 + slope1 * R, H22 = e2_0 + slope2 * R. Defaults are the "toy"
// preset: curves 1 + R and 2 - R coupled by 0.1, crossing at R = 0.5.
struct LinearCrossing {
  double e1_0 = 1.0;
  double slope1 = 1.0;
  double e2_0 = 2.0;
  double slope2 = -1.0;
  Complex h12 = Complex(0.1, 0.0);
};

// Flat covalent level against an ionic curve relaxing to its asymptote as the
// Coulomb attraction dies off: H11 = covalent_level,
// H22 = ionic_asymptote - coulomb_coefficient / R. Defined for R > 0 only.
// Defaults cross at R = 5 with slope difference -0.2 there.
struct IonicCovalent {
  double covalent_level = 0.0;
  double ionic_asymptote = 1.0;
  double coulomb_coefficient = 5.0;
  Complex h12 = Complex(0.05, 0.0);
};

// User-supplied matrix elements on [r_min, r_max]; evaluations must stay
// finite there.
struct CustomModel {
  std::function<double(double)> h11;
  std::function<double(double)> h22;
  std::function<Complex(double)> h12;
  double r_min = -std::numeric_limits<double>::infinity();
  double r_max = std::numeric_limits<double>::infinity();
};

using DiabaticModel = std::variant<LinearCrossing, IonicCovalent, CustomModel>;

// Matrix elements at one internuclear distance; H21 is conj(H12) by
// hermiticity and never stored.
struct DiabaticElements {
  double h11 = 0.0;
  double h22 = 0.0;
  Complex h12;
};

// The full 2x2 Hermitian matrix, mostly useful for checks and oracles.
Eigen::Matrix2cd hamiltonian_matrix(const DiabaticElements& m);

// Everything the secular problem yields at one point: inputs, both energies,
// their gap, and the two normalized coefficient pairs. state1/state2 hold the
// diabatic-basis weights of the lower/upper adiabatic state; the first
// component is real non-negative by convention. r records where along the
// curve the solve happened (NaN when solved from raw matrix elements).
struct AdiabaticSolution {
  double r = std::numeric_limits<double>::quiet_NaN();
  double h11 = 0.0;
  double h22 = 0.0;
  Complex h12;
  double e1 = 0.0;
  double e2 = 0.0;
  double gap = 0.0;
  Eigen::Vector2cd state1 = Eigen::Vector2cd(1.0, 0.0);
  Eigen::Vector2cd state2 = Eigen::Vector2cd(0.0, 1.0);

  double c11_sq() const { return std::norm(state1(0)); }
  double c12_sq() const { return std::norm(state2(0)); }
};

// True when r lies in the model's validity range (R > 0 for IonicCovalent,
// [r_min, r_max] for CustomModel, everywhere for LinearCrossing).
bool in_domain(const DiabaticModel& model, double r);

// Matrix elements at r; domain violations and non-finite custom evaluations
// raise DomainError naming the offending r.
DiabaticElements evaluate_diabatic(const DiabaticModel& model, double r);

// Closed-form solve of the 2x2 secular problem for finite inputs. For
// H12 = 0 the eigenvectors degenerate to the diabatic basis vectors, assigned
// so that state1 follows the lower diagonal entry (canonical order when
// H11 = H22).
AdiabaticSolution adiabatic_solve(double h11, double h22, Complex h12);

// evaluate_diabatic + adiabatic_solve, with r recorded in the result.
AdiabaticSolution adiabatic_at(const DiabaticModel& model, double r);

// Bisection root of H11(R) - H22(R) on [r_lo, r_hi]. The bracket must either
// contain a sign change or touch zero at an endpoint; otherwise BracketError.
// Converges to |H11 - H22| <= 1e-12 * max(1, |H11| + |H22|) or to an interval
// of a few ulps, whichever comes first.
double find_crossing(const DiabaticModel& model, double r_lo, double r_hi);

// d(H11 - H22)/dR at r: exact for the analytic models, central finite
// difference (relative step 1e-6, shrunk to stay inside the domain) for
// CustomModel.
double slope_difference(const DiabaticModel& model, double r);

// adiabatic_at over a caller-supplied grid, in order.
std::vector<AdiabaticSolution> sample_curves(const DiabaticModel& model,
                                             const std::vector<double>& r_grid);

// Built-in presets (the struct defaults, spelled out for discoverability).
LinearCrossing toy_model();
IonicCovalent ionic_covalent_model();

}  // namespace crossing
