#include "singosc/model.hpp"

#include <cmath>
#include <string>

#include "singosc/errors.hpp"

namespace singosc {

void PhysicalParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass m must be positive and finite");
  if (!(v0 >= 0.0) || !std::isfinite(v0)) throw DomainError("V0 must be non-negative and finite");
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("g must be positive and finite");
  if (l < 0) throw DomainError("orbital quantum number l must be >= 0");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Regular:
      return "Regular";
    case Regime::SaeRequired:
      return "SaeRequired";
    case Regime::FallToCenter:
      return "FallToCenter";
  }
  return "?";
}

Regime classify(const PhysicalParams& params) {
  params.validate();
  const double c = params.coupling();
  const double l = params.l;
  if (c <= l * (l + 1.0)) return Regime::Regular;
  if (c < (l + 0.5) * (l + 0.5)) return Regime::SaeRequired;
  return Regime::FallToCenter;
}

DerivedParams derive(const PhysicalParams& params) {
  const Regime regime = classify(params);
  if (regime == Regime::FallToCenter) {
    throw FallToCenterError("2mV0 = " + std::to_string(params.coupling()) +
                            " >= (l+1/2)^2: the particle would fall to the center");
  }
  const double lh = params.l + 0.5;
  DerivedParams d;
  d.params = params;
  d.regime = regime;
  d.P = std::sqrt(lh * lh - params.coupling());
  d.s = 0.5 * (d.P - 0.5);
  d.omega = std::sqrt(params.g / (2.0 * params.m));
  d.kappa_scale = std::sqrt(2.0 * params.m * params.g);
  // P - (l+1/2) without the cancellation for small V0.
  d.defect = -params.coupling() / (d.P + lh);
  return d;
}

double quantum_defect_small_v0(const PhysicalParams& params) {
  params.validate();
  return -params.coupling() / (2.0 * params.l + 1.0);
}

double p_small_v0_l0(const PhysicalParams& params) {
  params.validate();
  if (params.l != 0) throw DomainError("p_small_v0_l0 requires l = 0");
  return 0.5 * (1.0 - 4.0 * params.m * params.v0);
}

ExtensionParameter ExtensionParameter::finite(double tau) {
  if (!std::isfinite(tau)) throw DomainError("finite extension parameter must be a finite number");
  return {tau, false};
}

ExtensionParameter ExtensionParameter::infinity() { return {0.0, true}; }

double ExtensionParameter::value() const {
  if (infinite_) throw InfiniteTau("extension parameter is infinite");
  return tau_;
}

double tau_b_from_tau(const DerivedParams& derived, const ExtensionParameter& tau) {
  return tau.value() * std::pow(derived.kappa_scale, -derived.P);
}

}  // namespace singosc
