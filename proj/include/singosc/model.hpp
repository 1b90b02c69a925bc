#pragma once

// Physical parameters of V(r) = -V0/r^2 + g r^2, their derived quantities and
// the regime classification. Units: hbar = 1 throughout.

#include <string_view>

namespace singosc {

struct PhysicalParams {
  double m = 0.5;   ///< mass, > 0
  double v0 = 0.0;  ///< inverse-square strength, >= 0
  double g = 1.0;   ///< oscillator coupling, > 0
  int l = 0;        ///< orbital quantum number, >= 0

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// 2 m V0, the dimensionless inverse-square coupling.
  double coupling() const { return 2.0 * m * v0; }
};

enum class Regime {
  Regular,       ///< P >= 1/2: only the standard solution survives at the origin
  SaeRequired,   ///< 0 < P < 1/2: both solutions admissible, one extension parameter
  FallToCenter,  ///< 2mV0 >= (l+1/2)^2: rejected
};

std::string_view to_string(Regime r);

struct DerivedParams {
  PhysicalParams params;
  double P = 0.0;            ///< sqrt((l+1/2)^2 - 2mV0)
  double s = 0.0;            ///< (P - 1/2)/2, small-κ exponent of R
  double omega = 0.0;        ///< sqrt(g/2m); levels are spaced by 4ω
  double kappa_scale = 0.0;  ///< sqrt(2mg); κ = kappa_scale · r^2
  double defect = 0.0;       ///< quantum defect P - (l+1/2)
  Regime regime = Regime::Regular;
};

/// Classification by exact comparison of 2mV0 against l(l+1) and (l+1/2)^2.
/// The boundary 2mV0 = l(l+1) is Regular, 2mV0 = (l+1/2)^2 is FallToCenter.
Regime classify(const PhysicalParams& params);

/// Throws FallToCenterError outside the admissible regimes.
DerivedParams derive(const PhysicalParams& params);

/// First-order quantum defect -2mV0/(2l+1).
double quantum_defect_small_v0(const PhysicalParams& params);

/// (1/2)(1 - 4mV0), the small-coupling form of P for l = 0. DomainError if l != 0.
double p_small_v0_l0(const PhysicalParams& params);

/// The self-adjoint extension parameter as a projective real: a finite τ or
/// the single point at infinity (τ = +∞ and -∞ give the same levels).
class ExtensionParameter {
 public:
  static ExtensionParameter finite(double tau);
  static ExtensionParameter infinity();

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && tau_ == 0.0; }
  /// Throws InfiniteTau for the point at infinity.
  double value() const;

  friend bool operator==(const ExtensionParameter&, const ExtensionParameter&) = default;

 private:
  ExtensionParameter(double tau, bool infinite) : tau_(tau), infinite_(infinite) {}
  double tau_ = 0.0;
  bool infinite_ = false;
};

/// τ = D/C is defined on the κ-variable solutions. The ratio of the raw
/// small-r coefficients of R, a_add/a_st (r^{-1/2-P} over r^{-1/2+P}), differs
/// by the dimensional factor (2mg)^{-P/2}. Throws InfiniteTau.
double tau_b_from_tau(const DerivedParams& derived, const ExtensionParameter& tau);

}  // namespace singosc
