#pragma once

// Radial eigenfunctions in the variable κ = (2mg)^{1/2} r^2.
//
//     R(r) = e^{-κ/2} κ^s [ C M(-n, 1+P, κ) + D κ^{-P} M(-n-P, 1-P, κ) ]
//
// with s = (P - 1/2)/2, n = E/(4ω) - (1+P)/2 and D/C = τ. The same function
// is available in two further closed forms: a single Tricomi U and a single
// Whittaker W. All three agree on the eigenvalues; off them only the U and W
// forms decay.

#include <array>

#include "singosc/special.hpp"
#include "singosc/spectrum.hpp"

namespace singosc {

struct RadialWavefunction {
  DerivedParams derived;
  ExtensionParameter tau = ExtensionParameter::finite(0.0);
  Branch branch = Branch::GenericTau;
  int n_r = 0;
  double energy = 0.0;
  double n_eff = 0.0;  ///< E/(4ω) - (1+P)/2; exactly n_r on the standard branch
  double c_coeff = 1.0;
  double d_coeff = 0.0;
  double kummer_a = 0.0;        ///< -n
  double kummer_a_minus = 0.0;  ///< -n - P; exactly -n_r on the additional branch
  double kummer_b_plus = 1.0;   ///< 1 + P
  double kummer_b_minus = 1.0;  ///< 1 - P

  /// D/C that makes the general form decay at the stored n, i.e.
  /// -Γ(1+P)Γ(-n-P) / (Γ(-n)Γ(1-P)). Equals τ up to the root tolerance of
  /// the eigenvalue; used only by eval_general on the generic branch.
  special::wide_float decay_ratio = 0;
};

/// Builds the eigenfunction of `level`. `c_coeff` scales the standard
/// component; on the additional branch it is used as D.
RadialWavefunction build_wavefunction(const SpectralProblem& problem, const EnergyLevel& level, double c_coeff = 1.0);

/// R(r) from the two-Kummer form.
double eval_general(const RadialWavefunction& w, double r);

/// R(r) from the single-U form.
double eval_unified(const RadialWavefunction& w, double r);

/// R(r) from the single-Whittaker form, κ^{-3/4} W_{n+(1+P)/2, P/2}(κ).
double eval_whittaker(const RadialWavefunction& w, double r);

/// C^2 such that ∫ R^2 r^2 dr = 1, in closed form:
///   2π (2mg)^{3/4} Γ(-n) / [Γ^2(1+P) Γ(-n-P) sin(πP) (ψ(-n) - ψ(-n-P))].
/// DegenerateBranch for τ = 0 or ∞, where Γ(-n) or Γ(-n-P) has a pole.
double normalization_constant(const RadialWavefunction& w);

/// ∫_0^∞ R^2 r^2 dr of the function as stored, by quadrature in ln r.
double quadrature_norm(const RadialWavefunction& w);

/// Copy with unit norm and C > 0 (D > 0 on the additional branch). Uses the
/// closed-form C^2 on the generic branch and quadrature on the other two.
RadialWavefunction normalized(const RadialWavefunction& w);

/// Coefficients of r^{-1/2+P} and r^{-1/2-P} in R as r -> 0.
std::array<double, 2> small_r_coefficients(const RadialWavefunction& w);

}  // namespace singosc
