#pragma once

// Independent check of the Γ-function spectrum: the radial equation
//
//     u'' = [l(l+1)/r^2 + 2m(V(r) - E)] u,   V = -V0/r^2 + g r^2,
//
// integrated by Numerov's method. With x = ln r and y = u/√r the equation
// becomes y'' = Q(x) y with Q = l(l+1) + 1/4 + 2m r^2 (V - E), smooth on a
// uniform x grid down to r -> 0. The extension enters only through the
// small-r seed u ≈ a_st r^{1/2+P} + a_add r^{1/2-P}.

#include <vector>

#include "singosc/spectrum.hpp"

namespace singosc {

/// Coefficients of r^{-1/2+P} and r^{-1/2-P} in R (of r^{1/2±P} in u = rR).
struct BoundarySeries {
  double a_st = 1.0;
  double a_add = 0.0;

  /// a_add/a_st = τ (2mg)^{-P/2}; (0, 1) for τ = ∞.
  static BoundarySeries from_tau(const DerivedParams& derived, const ExtensionParameter& tau);
};

/// Nodes r_i = r_min (r_max/r_min)^{i/steps}, i = 0..steps.
struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int steps = 0;

  /// Throws DomainError unless 0 < r_min < r_max and steps is even and >= 1000.
  void validate() const;
  double step() const;  ///< spacing in ln r
  double r(int i) const;

  /// r_min = 1e-6 (2mg)^{-1/4}, (2mg)^{1/2} r_max^2 = 50, 2e5 steps.
  static RadialGrid default_for(const DerivedParams& derived);

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

enum class Direction { Outward, Inward };

/// u = rR at every grid node, with the small-r coefficients that go with it.
struct SampledState {
  RadialGrid grid;
  double P = 0.0;
  double energy = 0.0;
  std::vector<double> u;
  double a_st = 0.0;
  double a_add = 0.0;
};

/// Plain integration across the whole grid. Outward starts from `boundary`;
/// inward starts from u(r_max) = 0 with a unit slope (a_st = a_add = 0 in the
/// result). Values are rescaled whenever they exceed 1e100, so only the shape
/// is meaningful off an eigenvalue. StepError if h√Q > 0.5 on the grid.
SampledState numerov_integrate(const SpectralProblem& problem, double energy, const RadialGrid& grid,
                               const BoundarySeries& boundary, Direction direction);

/// Bisection on the sign of the two-sided Wronskian mismatch until the
/// bracket is narrower than tolerance·ω. NoSignChange if the ends agree.
double shoot_eigenvalue(const SpectralProblem& problem, const Bracket& bracket, const RadialGrid& grid,
                        double tolerance = 1e-9);

/// Outward and inward solutions at `energy` joined at the matching radius;
/// zero beyond the inward starting point.
SampledState eigenstate(const SpectralProblem& problem, double energy, const RadialGrid& grid);

/// ∫ R1 R2 r^2 dr = ∫ u1 u2 dr: Simpson in ln r plus the exact integral of
/// the leading small-r terms on (0, r_min). GridMismatch on different grids.
double inner_product(const SampledState& s1, const SampledState& s2);

/// Copy scaled to unit norm with a positive outward seed.
SampledState normalize(const SampledState& state);

/// Gram matrix of the normalized oracle eigenstates of `levels`. Each level is
/// re-shot on the grid in a narrow window around its energy so the states are
/// eigenvectors of the discrete problem.
std::vector<std::vector<double>> orthogonality_defect(const SpectralProblem& problem,
                                                      const std::vector<EnergyLevel>& levels,
                                                      const RadialGrid& grid);

/// Largest |G_ij|, i != j.
double max_off_diagonal(const std::vector<std::vector<double>>& gram);

/// Least-squares fit of u against {r^{1/2+P}, r^{1/2-P}} on [r_min, 100 r_min].
BoundarySeries fit_boundary_series(const SampledState& state, double P);

/// Sign changes of u, ignoring samples below 1e-8 max|u|.
int count_nodes(const SampledState& state);

}  // namespace singosc
