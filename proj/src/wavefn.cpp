#include "singosc/wavefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "singosc/errors.hpp"

namespace singosc {

namespace {

using special::wide_float;
using very_wide = boost::multiprecision::cpp_bin_float_100;

constexpr double kUnderflowKappa = 1400.0;
constexpr double kNeffTolerance = 1e-9;

double kappa_of(const RadialWavefunction& w, double r) {
  if (!(r > 0.0)) throw DomainError("radial functions are evaluated at r > 0");
  return w.derived.kappa_scale * r * r;
}

// e^{-κ/2} κ^s: every (2mg)-power prefactor of the three forms lives here.
double envelope(const RadialWavefunction& w, double kappa) {
  return std::exp(-0.5 * kappa + w.derived.s * std::log(kappa));
}

// -Γ(1+P)Γ(-n-P) / (Γ(-n)Γ(1-P)), evaluated in T.
template <class T>
T decay_ratio_as(const RadialWavefunction& w) {
  using boost::math::tgamma;
  const T p(w.derived.P);
  const T a(w.kummer_a);
  // a - P formed in T, exactly as the series in eval_general forms it.
  return -tgamma(1 + p) / tgamma(1 - p) * tgamma(a - p) / tgamma(a);
}

// 100-digit Kummer series for the κ > 60 tail of the general form.
template <class T>
T kummer_series_any(const T& a, const T& b, const T& x) {
  using boost::multiprecision::abs;
  const T eps = std::numeric_limits<T>::epsilon();
  T term = 1;
  T sum = 1;
  const double a_neg = std::max(0.0, -static_cast<double>(a));
  for (int k = 0; k < 20000; ++k) {
    const T ratio = (a + k) * x / ((b + k) * (k + 1));
    term *= ratio;
    if (term == 0) break;
    sum += term;
    if (k > a_neg + 1 && abs(ratio) < 0.5 && abs(term) <= eps * abs(sum)) break;
  }
  return sum;
}

double eval_unified_with(const RadialWavefunction& w, const special::TricomiU& u, double pref, double r) {
  const double kappa = kappa_of(w, r);
  if (kappa > kUnderflowKappa) return 0.0;
  return pref * envelope(w, kappa) * u(kappa);
}

// Γ(1+P)Γ(-n-P) sin(π(1+P))/π times C, or its additional-branch counterpart
// -Γ(-n)Γ(1-P) sin(π(1+P))/π times D.
double unified_prefactor(const RadialWavefunction& w) {
  const double p = w.derived.P;
  const double s = special::sinpi(1.0 + p) / std::numbers::pi;
  if (w.branch == Branch::Additional) {
    return -w.d_coeff * special::gamma(w.kummer_a) * special::gamma(1.0 - p) * s;
  }
  return w.c_coeff * special::gamma(1.0 + p) * special::gamma(w.kummer_a_minus) * s;
}

}  // namespace

RadialWavefunction build_wavefunction(const SpectralProblem& problem, const EnergyLevel& level, double c_coeff) {
  const DerivedParams& d = problem.derived;
  RadialWavefunction w;
  w.derived = d;
  w.tau = problem.tau;
  w.n_r = level.n_r;
  w.energy = level.energy;
  w.n_eff = level.energy / (4.0 * d.omega) - 0.5 * (1.0 + d.P);
  w.kummer_b_plus = 1.0 + d.P;
  w.kummer_b_minus = 1.0 - d.P;

  if (problem.tau.is_zero()) {
    if (std::abs(w.n_eff - level.n_r) > kNeffTolerance) {
      throw DomainError("build_wavefunction: energy is not the standard level " + std::to_string(level.n_r));
    }
    w.branch = Branch::Standard;
    w.n_eff = level.n_r;
    w.c_coeff = c_coeff;
    w.d_coeff = 0.0;
    w.kummer_a = -level.n_r;
    w.kummer_a_minus = -level.n_r - d.P;
  } else if (problem.tau.is_infinite()) {
    if (std::abs(w.n_eff + d.P - level.n_r) > kNeffTolerance) {
      throw DomainError("build_wavefunction: energy is not the additional level " + std::to_string(level.n_r));
    }
    w.branch = Branch::Additional;
    w.n_eff = level.n_r - d.P;
    w.c_coeff = 0.0;
    w.d_coeff = c_coeff;
    w.kummer_a = -w.n_eff;
    w.kummer_a_minus = -level.n_r;
  } else {
    w.branch = Branch::GenericTau;
    w.c_coeff = c_coeff;
    w.d_coeff = problem.tau.value() * c_coeff;
    w.kummer_a = -w.n_eff;
    w.kummer_a_minus = -w.n_eff - d.P;
    if (special::near_nonpositive_integer(w.kummer_a, 1e-10) ||
        special::near_nonpositive_integer(w.kummer_a_minus, 1e-10)) {
      throw DomainError("build_wavefunction: generic-τ energy sits on a closed-form level");
    }
    w.decay_ratio = decay_ratio_as<wide_float>(w);
  }
  return w;
}

double eval_general(const RadialWavefunction& w, double r) {
  const double kappa = kappa_of(w, r);
  if (kappa > kUnderflowKappa) return 0.0;
  const double p = w.derived.P;
  const double env = envelope(w, kappa);
  switch (w.branch) {
    case Branch::Standard:
      return w.c_coeff * env * special::kummer_m(w.kummer_a, w.kummer_b_plus, kappa);
    case Branch::Additional:
      return w.d_coeff * env * std::pow(kappa, -p) * special::kummer_m(w.kummer_a_minus, w.kummer_b_minus, kappa);
    case Branch::GenericTau:
      break;
  }
  // Each Kummer term grows like e^κ and the two cancel to e^{-κ/2}-decay
  // only if D/C matches n exactly; keep D/C = decay_ratio and the sum in
  // 50 digits (100 past κ = 60).
  if (kappa <= 60.0) {
    const wide_float x(kappa);
    const wide_float a(w.kummer_a);
    const wide_float pw(p);
    const wide_float sum = special::kummer_m(a, 1 + pw, x) +
                           w.decay_ratio * boost::multiprecision::pow(x, -pw) * special::kummer_m(a - pw, 1 - pw, x);
    return w.c_coeff * env * static_cast<double>(sum);
  }
  const very_wide x(kappa);
  const very_wide a(w.kummer_a);
  const very_wide pw(p);
  const very_wide ratio = decay_ratio_as<very_wide>(w);
  const very_wide sum =
      kummer_series_any(a, 1 + pw, x) + ratio * boost::multiprecision::pow(x, -pw) * kummer_series_any(a - pw, 1 - pw, x);
  return w.c_coeff * env * static_cast<double>(sum);
}

double eval_unified(const RadialWavefunction& w, double r) {
  const special::TricomiU u(w.kummer_a, w.kummer_b_plus);
  return eval_unified_with(w, u, unified_prefactor(w), r);
}

double eval_whittaker(const RadialWavefunction& w, double r) {
  const double kappa = kappa_of(w, r);
  if (kappa > kUnderflowKappa) return 0.0;
  const double p = w.derived.P;
  const double k = w.n_eff + 0.5 * (1.0 + p);
  return unified_prefactor(w) * std::pow(kappa, -0.75) * special::whittaker_w(k, 0.5 * p, kappa);
}

double normalization_constant(const RadialWavefunction& w) {
  if (w.branch != Branch::GenericTau) {
    throw DegenerateBranch("normalization_constant: no closed form on the pure standard or additional branch");
  }
  const double p = w.derived.P;
  const double a = w.kummer_a;
  const double b = w.kummer_a_minus;
  const double g1p = special::gamma(1.0 + p);
  const double ratio = special::lgamma_ratio(a, b).value();  // Γ(-n)/Γ(-n-P)
  const double dpsi = special::digamma(a) - special::digamma(b);
  const double beta = w.derived.kappa_scale;
  return 2.0 * std::numbers::pi * std::pow(beta, 1.5) * ratio / (g1p * g1p * special::sinpi(p) * dpsi);
}

double quadrature_norm(const RadialWavefunction& w) {
  const special::TricomiU u(w.kummer_a, w.kummer_b_plus);
  const double pref = unified_prefactor(w);
  const double beta = w.derived.kappa_scale;
  // R^2 r^3 in t = ln r. The upper end κ = 80 leaves a Gaussian tail far below
  // double precision; 45 e-folds below it the integrand ~ r^{2-2P} is gone.
  const double t_hi = 0.5 * std::log(80.0 / beta);
  const double t_lo = t_hi - 45.0;
  auto f = [&](double t) {
    const double r = std::exp(t);
    const double v = eval_unified_with(w, u, pref, r);
    return v * v * r * r * r;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, t_lo, t_hi, 15, 1e-13);
}

RadialWavefunction normalized(const RadialWavefunction& w) {
  RadialWavefunction out = w;
  if (w.branch == Branch::GenericTau) {
    const double c = std::sqrt(normalization_constant(w));
    out.c_coeff = c;
    out.d_coeff = w.tau.value() * c;
    return out;
  }
  const double scale = 1.0 / std::sqrt(quadrature_norm(w));
  if (w.branch == Branch::Standard) {
    out.c_coeff = std::abs(w.c_coeff) * scale;
  } else {
    out.d_coeff = std::abs(w.d_coeff) * scale;
  }
  return out;
}

std::array<double, 2> small_r_coefficients(const RadialWavefunction& w) {
  const double beta = w.derived.kappa_scale;
  const double s = w.derived.s;
  return {w.c_coeff * std::pow(beta, s), w.d_coeff * std::pow(beta, s - w.derived.P)};
}

}  // namespace singosc
