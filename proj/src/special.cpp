#include "singosc/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "singosc/errors.hpp"

namespace singosc::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993228,  676.52036812188509857,   -1259.1392167224028705,
    771.32342877765307885,   -176.61502916214059907,  12.507343278686904814,
    -0.1385710952657201169,  9.9843695780195708596e-6, 1.5056327351493115583e-7};

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

// log Γ(x) for x >= 1/2.
double lgamma_positive(double x) {
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

// Stirling correction log Γ(x) - [(x-1/2) log x - x + log√(2π)] for x >= 10.
double stirling_tail(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 +
              r2 * (-1.0 / 360 +
                    r2 * (1.0 / 1260 +
                          r2 * (-1.0 / 1680 +
                                r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
}

void check_pole(double x, const char* what) {
  if (near_nonpositive_integer(x)) {
    throw PoleError(std::string(what) + ": argument " + std::to_string(x) +
                    " is at a non-positive integer");
  }
}

bool is_nonpositive_integer(const wide_float& x) {
  return x <= 0 && x == boost::multiprecision::floor(x);
}

// Truncated/converged power series of M(a, b, x); also reports the largest
// term so the caller can judge cancellation.
template <class T>
struct SeriesSum {
  T sum;
  T max_term;
};

template <class T>
SeriesSum<T> kummer_series(const T& a, const T& b, const T& x) {
  using std::abs;
  using boost::multiprecision::abs;
  const T eps = std::numeric_limits<T>::epsilon();
  T term = 1;
  T sum = 1;
  T comp = 0;  // Neumaier compensation
  T max_term = 1;
  const double a_neg = std::max(0.0, -static_cast<double>(a));
  for (int k = 0; k < 20000; ++k) {
    const T kk = k;
    const T ratio = (a + kk) * x / ((b + kk) * (kk + 1));
    term *= ratio;
    if (term == 0) break;
    const T s = sum + term;
    if (abs(sum) >= abs(term)) {
      comp += (sum - s) + term;
    } else {
      comp += (term - s) + sum;
    }
    sum = s;
    if (abs(term) > max_term) max_term = abs(term);
    // Past k = -a the ratio decreases monotonically, so once it is below 1/2
    // the remainder is bounded by the current term.
    if (k > a_neg + 1 && abs(ratio) < 0.5 && abs(term) <= eps * abs(sum + comp)) {
      break;
    }
  }
  return {sum + comp, max_term};
}

}  // namespace

double LogGammaValue::value() const { return sign * std::exp(log_abs); }

double sinpi(double x) {
  // Reduce to r in [-1, 1]; sin(πx) = sin(πr) exactly for the reduced argument.
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double cospi(double x) { return sinpi(x + 0.5); }

bool near_nonpositive_integer(double x, double tol) {
  const double n = std::round(x);
  return n <= 0.0 && std::abs(x - n) < tol;
}

double gamma(double x) {
  check_pole(x, "gamma");
  if (x < 0.5) {
    return kPi / (sinpi(x) * gamma(1.0 - x));
  }
  if (x == std::floor(x) && x <= 171.0) {
    double f = 1.0;
    for (double k = 2.0; k < x; k += 1.0) f *= k;
    return f;
  }
  if (x > 100.0) {
    return std::exp(lgamma_positive(x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * lanczos_sum(xm1);
}

LogGammaValue lgamma_signed(double x) {
  check_pole(x, "lgamma_signed");
  if (x >= 0.5) return {lgamma_positive(x), 1};
  const double s = sinpi(x);
  return {std::log(kPi / std::abs(s)) - lgamma_positive(1.0 - x), s < 0 ? -1 : 1};
}

double rgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x < 0.5) {
    // Reflection keeps the zeros exact in the limit: 1/Γ(x) = sin(πx) Γ(1-x) / π.
    return sinpi(x) * gamma(1.0 - x) / kPi;
  }
  if (x > 171.0) return std::exp(-lgamma_positive(x));
  return 1.0 / gamma(x);
}

LogGammaValue lgamma_ratio(double a, double b) {
  check_pole(a, "lgamma_ratio");
  if (near_nonpositive_integer(b)) {
    return {-std::numeric_limits<double>::infinity(), 1};
  }
  if (a < 0.5 && b < 0.5) {
    // Γ(a)/Γ(b) = [sin(πb)/sin(πa)] · Γ(1-b)/Γ(1-a)
    const double sa = sinpi(a);
    const double sb = sinpi(b);
    LogGammaValue r = lgamma_ratio(1.0 - b, 1.0 - a);
    r.log_abs += std::log(std::abs(sb / sa));
    r.sign *= ((sa < 0) != (sb < 0)) ? -1 : 1;
    return r;
  }
  if (a < 0.5 || b < 0.5) {
    const LogGammaValue ga = lgamma_signed(a);
    const LogGammaValue gb = lgamma_signed(b);
    return {ga.log_abs - gb.log_abs, ga.sign * gb.sign};
  }
  // Both >= 1/2: shift up to the Stirling region and difference the expansions.
  double shift_log = 0.0;
  const double lo = std::min(a, b);
  if (lo < 10.0) {
    const int k = static_cast<int>(std::ceil(10.0 - lo));
    for (int i = 0; i < k; ++i) shift_log += std::log1p((b - a) / (a + i));
    a += k;
    b += k;
  }
  // (a-1/2)log a - (b-1/2)log b - (a-b)
  //   = (a-1/2) log1p((a-b)/b) + (a-b)(log b - 1)
  const double d = a - b;
  const double main = (a - 0.5) * std::log1p(d / b) + d * (std::log(b) - 1.0);
  return {main + stirling_tail(a) - stirling_tail(b) + shift_log, 1};
}

double digamma(double x) {
  check_pole(x, "digamma");
  if (x < 0.5) {
    // ψ(x) = ψ(1-x) - π cot(πx)
    return digamma(1.0 - x) - kPi * cospi(x) / sinpi(x);
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r2 = 1.0 / (x * x);
  const double tail =
      r2 * (1.0 / 12 -
            r2 * (1.0 / 120 -
                  r2 * (1.0 / 252 -
                        r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 / 12))))));
  return acc + std::log(x) - 0.5 / x - tail;
}

double kummer_m(double a, double b, double x) {
  if (near_nonpositive_integer(b)) {
    throw ParameterPole("kummer_m: b = " + std::to_string(b) + " is a non-positive integer");
  }
  if (!(x >= 0.0)) throw DomainError("kummer_m: x must be >= 0");
  const SeriesSum<double> s = kummer_series(a, b, x);
  // Escalate when more than ~2 digits are lost to cancellation. The loss is
  // bounded by e^x, so 50 digits cover x <= 60 and 100 digits the rest.
  if (s.max_term > 1e2 * std::abs(s.sum)) {
    if (x <= 60.0) return static_cast<double>(kummer_m(wide_float(a), wide_float(b), wide_float(x)));
    using very_wide = boost::multiprecision::cpp_bin_float_100;
    return static_cast<double>(kummer_series(very_wide(a), very_wide(b), very_wide(x)).sum);
  }
  return s.sum;
}

wide_float rgamma(const wide_float& x) {
  if (is_nonpositive_integer(x)) return wide_float(0);
  return 1 / boost::math::tgamma(x);
}

wide_float kummer_m(const wide_float& a, const wide_float& b, const wide_float& x) {
  if (is_nonpositive_integer(b)) throw ParameterPole("kummer_m: b is a non-positive integer");
  return kummer_series(a, b, x).sum;
}

TricomiU::TricomiU(double a, double b) : a_(a), b_(b), wa_(a), wb_(b) {
  if (std::abs(b - std::round(b)) < 1e-10) {
    throw ParameterPole("tricomi_u: b = " + std::to_string(b) +
                        " is an integer; the connection formula degenerates");
  }
  const wide_float pi = boost::math::constants::pi<wide_float>();
  const wide_float f = pi / boost::multiprecision::sin(pi * wb_);
  c_first_ = f * rgamma(1 + wa_ - wb_) * rgamma(wb_);
  c_second_ = f * rgamma(wa_) * rgamma(2 - wb_);
}

double TricomiU::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("tricomi_u: x must be > 0");
  if (a_ == 0.0) return 1.0;
  if (x <= 60.0) {
    const wide_float wx(x);
    wide_float u = 0;
    if (c_first_ != 0) u += c_first_ * kummer_m(wa_, wb_, wx);
    if (c_second_ != 0) {
      u -= c_second_ * boost::multiprecision::pow(wx, 1 - wb_) * kummer_m(1 + wa_ - wb_, 2 - wb_, wx);
    }
    return static_cast<double>(u);
  }
  // x^{-a} Σ_k (a)_k (a-b+1)_k / k! (-x)^{-k}, stopped at the smallest term.
  const double c = a_ - b_ + 1.0;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 0; k < 500; ++k) {
    const double next = term * (a_ + k) * (c + k) / ((k + 1.0) * -x);
    if (next == 0.0) break;
    if (std::abs(next) >= last) break;
    term = next;
    last = std::abs(next);
    sum += term;
    if (last <= 1e-17 * std::abs(sum)) break;
  }
  return std::pow(x, -a_) * sum;
}

double tricomi_u(double a, double b, double x) { return TricomiU(a, b)(x); }

double whittaker_w(double k, double mu, double x) {
  if (!(x > 0.0)) throw DomainError("whittaker_w: x must be > 0");
  const double a = 0.5 + mu - k;
  const double b = 1.0 + 2.0 * mu;
  return std::exp(-0.5 * x) * std::pow(x, mu + 0.5) * tricomi_u(a, b, x);
}

}  // namespace singosc::special
