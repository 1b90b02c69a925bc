#pragma once

// Real-argument special functions: Γ, log Γ, ψ, Kummer M, Tricomi U, Whittaker W.
//
// Double-precision entry points are the public surface. The hypergeometric
// functions fall back to a 50-digit binary float whenever the power series
// cancels badly; the wide overloads are exposed for callers that need to keep
// a cancelling combination in extended precision end to end.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace singosc::special {

using wide_float = boost::multiprecision::cpp_bin_float_50;

/// Distance below which an argument counts as sitting on a Γ pole.
inline constexpr double kPoleTolerance = 1e-12;

/// log|Γ(x)| together with the sign of Γ(x).
struct LogGammaValue {
  double log_abs = 0.0;
  int sign = 1;

  /// sign·exp(log_abs); overflows to ±inf and underflows to ±0 like exp().
  double value() const;
};

double sinpi(double x);
double cospi(double x);

/// True when x is within kPoleTolerance of 0, -1, -2, ...
bool near_nonpositive_integer(double x, double tol = kPoleTolerance);

/// Γ(x) by a g=7, 9-term Lanczos sum, reflected for x < 1/2. Throws PoleError.
double gamma(double x);

LogGammaValue lgamma_signed(double x);

/// 1/Γ(x); exactly zero at the non-positive integers.
double rgamma(double x);

/// Γ(a)/Γ(b) in log form. Accurate when a and b are large and close, where the
/// difference of two log Γ values would cancel. Returns log_abs = -inf when b
/// is a pole; throws PoleError when a is.
LogGammaValue lgamma_ratio(double a, double b);

/// ψ(x) = Γ'(x)/Γ(x). Throws PoleError at non-positive integers.
double digamma(double x);

/// Kummer's confluent hypergeometric function M(a, b, x) = 1F1(a; b; x), x >= 0.
double kummer_m(double a, double b, double x);

/// Tricomi's U(a, b, x) for non-integer b and x > 0. See TricomiU.
double tricomi_u(double a, double b, double x);

/// U(a, b, ·) with the (a, b)-dependent coefficients computed once.
///
/// For x <= 60 the value comes from the connection formula
///   U = π/sin(πb) [M(a,b,x)/(Γ(1+a-b)Γ(b)) - x^{1-b} M(1+a-b,2-b,x)/(Γ(a)Γ(2-b))]
/// in 50-digit arithmetic: the two terms grow like e^x and cancel, which
/// double precision cannot absorb beyond x ≈ 20. Past x = 60 the asymptotic
/// expansion x^{-a} Σ (a)_k (a-b+1)_k / k! (-x)^{-k}, cut at its smallest
/// term, is used instead.
class TricomiU {
 public:
  /// Throws ParameterPole when b is within 1e-10 of an integer.
  TricomiU(double a, double b);

  /// Throws DomainError unless x > 0.
  double operator()(double x) const;

 private:
  double a_, b_;
  wide_float wa_, wb_, c_first_, c_second_;
};

/// Whittaker W_{k,mu}(x) = e^{-x/2} x^{mu+1/2} U(1/2 + mu - k, 1 + 2mu, x).
double whittaker_w(double k, double mu, double x);

wide_float rgamma(const wide_float& x);
wide_float kummer_m(const wide_float& a, const wide_float& b, const wide_float& x);

}  // namespace singosc::special
