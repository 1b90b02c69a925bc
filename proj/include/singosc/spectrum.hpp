#pragma once

// Eigenvalues of the singular oscillator for a given self-adjoint extension.
//
// With z = -E/(4ω) + 1/2 + P/2 the spectral function is
//
//     f_P(E) = Γ(z - P) / Γ(z),
//
// and the levels are the solutions of f_P(E) = -τ Γ(1-P)/Γ(1+P). f_P has
// zeros at the standard levels 2ω(2n+1+P), poles at the additional levels
// 2ω(2n+1-P), increases between consecutive poles from -∞ to +∞, and rises
// from 0 to +∞ on (-∞, first pole). Each open interval between poles holds
// exactly one level; one more sits below the first pole iff τ < 0.

#include <optional>
#include <vector>

#include "singosc/model.hpp"

namespace singosc {

enum class Branch { Standard, Additional, GenericTau };

const char* to_string(Branch b);

struct SpectralProblem {
  DerivedParams derived;
  ExtensionParameter tau = ExtensionParameter::finite(0.0);

  /// Throws RegimeError unless τ = 0 or the regime is SaeRequired.
  static SpectralProblem make(const DerivedParams& derived, const ExtensionParameter& tau);
};

struct EnergyLevel {
  int n_r = 0;  ///< position in the ascending list of levels (= radial node count)
  double energy = 0.0;
  Branch branch = Branch::GenericTau;
};

struct PerturbedLevel {
  int n_r = 0;
  double energy = 0.0;
  double nu = 0.0;  ///< shift coefficient; the expansion is trusted only for |nu| << 1
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectrumResult {
  std::vector<EnergyLevel> levels;
  std::vector<Bracket> brackets;     ///< enclosing interval handed to the root finder
  bool physicality_warning = false;  ///< τ > 0: no negative level, excluded on physical grounds
};

struct SolveOptions {
  /// Lower limit for the below-first-pole search; defaults to -1e6·ω.
  std::optional<double> search_floor;
  /// Root tolerance in units of ω.
  double root_tolerance = 1e-11;
};

double standard_level(const DerivedParams& d, int n_r);    ///< 2ω(2n_r + 1 + P)
double additional_level(const DerivedParams& d, int n_r);  ///< 2ω(2n_r + 1 - P)

/// f_P(E), evaluated in log space. Exactly zero on standard levels; throws
/// PoleError within 1e-10·ω of an additional level.
double f_p(double energy, const DerivedParams& d);

/// -τ Γ(1-P)/Γ(1+P). Throws InfiniteTau.
double eigenvalue_rhs(const ExtensionParameter& tau, const DerivedParams& d);

/// Analytic level of the pure standard (τ = 0) or additional (τ = ∞) branch.
EnergyLevel closed_form_level(const DerivedParams& d, Branch branch, int n_r);

/// Lowest `count` levels. τ = 0 and τ = ∞ return the closed forms; other τ
/// are solved by bracketed root finding on f_P(E) - rhs.
SpectrumResult solve_spectrum(const SpectralProblem& problem, int count, const SolveOptions& options = {});

/// Level-by-level enclosing intervals that contain exactly one eigenvalue
/// each, from the interlacing of zeros and poles of f_P alone (no root solve).
std::vector<Bracket> level_brackets(const SpectralProblem& problem, int count, double search_floor);

/// True iff f_P(0) > rhs (strict). Requires finite τ < 0.
bool negative_level_exists(const SpectralProblem& problem);

/// The most negative τ that still yields a negative level: rhs(τ) = f_P(0).
double tau_lower_bound(const DerivedParams& d);

/// First-order level near the standard level n_r (|τ| <= 1) or near the
/// additional level n_r (|τ| > 1, expansion in 1/τ). Throws DomainError if
/// |nu| >= 0.1.
PerturbedLevel perturbative_level(const SpectralProblem& problem, int n_r);

/// f_P(E + 4ω)/f_P(E) in closed form.
double equidistance_ratio(double energy, const DerivedParams& d);

}  // namespace singosc
