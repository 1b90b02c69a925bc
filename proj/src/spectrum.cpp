#include "singosc/spectrum.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "singosc/errors.hpp"
#include "singosc/special.hpp"

namespace singosc {

namespace {

// Pole guard in units of ω, tried in order until the interval brackets a root.
constexpr double kPoleGuards[] = {1e-8, 1e-9, 2e-10};
constexpr double kFpPoleTolerance = 1e-10;  // in units of ω

double z_of(double energy, const DerivedParams& d) { return -energy / (4.0 * d.omega) + 0.5 + 0.5 * d.P; }

void require_sae(const DerivedParams& d, const char* what) {
  if (d.regime != Regime::SaeRequired) {
    throw DomainError(std::string(what) + " requires the SaeRequired regime (0 < P < 1/2)");
  }
}

double find_root(const auto& fn, double lo, double hi, double flo, double fhi, double tol) {
  std::uintmax_t iterations = 200;
  auto done = [tol](double a, double b) {
    return std::abs(b - a) <= std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a));
  };
  const auto r = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, done, iterations);
  return 0.5 * (r.first + r.second);
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Standard:
      return "standard";
    case Branch::Additional:
      return "additional";
    case Branch::GenericTau:
      return "generic";
  }
  return "?";
}

SpectralProblem SpectralProblem::make(const DerivedParams& derived, const ExtensionParameter& tau) {
  if (derived.regime != Regime::SaeRequired && !tau.is_zero()) {
    throw RegimeError("only tau = 0 is admissible outside the SaeRequired regime");
  }
  return {derived, tau};
}

double standard_level(const DerivedParams& d, int n_r) { return 2.0 * d.omega * (2.0 * n_r + 1.0 + d.P); }

double additional_level(const DerivedParams& d, int n_r) { return 2.0 * d.omega * (2.0 * n_r + 1.0 - d.P); }

double f_p(double energy, const DerivedParams& d) {
  const double z = z_of(energy, d);
  if (special::near_nonpositive_integer(z - d.P, 0.25 * kFpPoleTolerance)) {
    throw PoleError("f_P: energy " + std::to_string(energy) + " is at an additional level");
  }
  if (special::near_nonpositive_integer(z)) return 0.0;
  return special::lgamma_ratio(z - d.P, z).value();
}

double eigenvalue_rhs(const ExtensionParameter& tau, const DerivedParams& d) {
  if (tau.is_infinite()) throw InfiniteTau("eigenvalue_rhs: use the closed-form additional branch for tau = inf");
  return -tau.value() * special::gamma(1.0 - d.P) / special::gamma(1.0 + d.P);
}

EnergyLevel closed_form_level(const DerivedParams& d, Branch branch, int n_r) {
  if (n_r < 0) throw DomainError("closed_form_level: n_r must be >= 0");
  switch (branch) {
    case Branch::Standard:
      return {n_r, standard_level(d, n_r), Branch::Standard};
    case Branch::Additional:
      if (d.regime != Regime::SaeRequired) {
        throw RegimeError("additional levels exist only in the SaeRequired regime");
      }
      return {n_r, additional_level(d, n_r), Branch::Additional};
    case Branch::GenericTau:
      break;
  }
  throw DomainError("closed_form_level: branch must be standard or additional");
}

std::vector<Bracket> level_brackets(const SpectralProblem& problem, int count, double search_floor) {
  const DerivedParams& d = problem.derived;
  std::vector<Bracket> out;
  if (problem.tau.is_zero()) {
    for (int n = 0; n < count; ++n) {
      const double e = standard_level(d, n);
      out.push_back({e - 2.0 * d.omega, e + 2.0 * d.omega});
    }
    return out;
  }
  if (problem.tau.is_infinite()) {
    for (int n = 0; n < count; ++n) {
      const double e = additional_level(d, n);
      out.push_back({e - 2.0 * d.omega, e + 2.0 * d.omega});
    }
    return out;
  }
  int k = 0;
  if (problem.tau.value() < 0.0 && count > 0) {
    out.push_back({search_floor, additional_level(d, 0)});
    ++k;
  }
  for (int n = 0; k < count; ++n, ++k) out.push_back({additional_level(d, n), additional_level(d, n + 1)});
  return out;
}

SpectrumResult solve_spectrum(const SpectralProblem& problem, int count, const SolveOptions& options) {
  if (count < 1) throw DomainError("solve_spectrum: count must be >= 1");
  const DerivedParams& d = problem.derived;
  SpectrumResult result;

  if (problem.tau.is_zero() || problem.tau.is_infinite()) {
    const Branch b = problem.tau.is_zero() ? Branch::Standard : Branch::Additional;
    for (int n = 0; n < count; ++n) {
      result.levels.push_back(closed_form_level(d, b, n));
      result.brackets.push_back({result.levels.back().energy, result.levels.back().energy});
    }
    return result;
  }

  require_sae(d, "solve_spectrum with tau != 0");
  const double tau = problem.tau.value();
  const double rhs = eigenvalue_rhs(problem.tau, d);
  const double w = d.omega;
  const double floor = options.search_floor.value_or(-1e6 * w);
  const double tol = options.root_tolerance * w;
  result.physicality_warning = tau > 0.0;
  auto g = [&](double e) { return f_p(e, d) - rhs; };

  int index = 0;
  if (tau < 0.0) {
    // One level below the first pole: f_P rises from 0 to +inf there.
    double hi = 0.0, ghi = 0.0;
    for (double guard : kPoleGuards) {
      hi = additional_level(d, 0) - guard * w;
      ghi = g(hi);
      if (ghi > 0.0) break;
    }
    double lo = -w;
    double glo = g(lo);
    for (int k = 1; glo >= 0.0; ++k) {
      lo = -w * std::ldexp(1.0, k);
      if (lo < floor) {
        if (negative_level_exists(problem)) {
          throw FloorError("negative level lies below the search floor " + std::to_string(floor));
        }
        throw BracketError("no sign change below the first additional level");
      }
      glo = g(lo);
    }
    if (!(ghi > 0.0)) throw BracketError("f_P - rhs is not positive just below the first additional level");
    result.levels.push_back({index++, find_root(g, lo, hi, glo, ghi, tol), Branch::GenericTau});
    result.brackets.push_back({lo, hi});
  }

  for (int n = 0; index < count; ++n) {
    const double left = additional_level(d, n);
    const double right = additional_level(d, n + 1);
    bool found = false;
    for (double guard : kPoleGuards) {
      const double lo = left + guard * w;
      const double hi = right - guard * w;
      const double glo = g(lo);
      const double ghi = g(hi);
      if (glo < 0.0 && ghi > 0.0) {
        result.levels.push_back({index++, find_root(g, lo, hi, glo, ghi, tol), Branch::GenericTau});
        result.brackets.push_back({lo, hi});
        found = true;
        break;
      }
    }
    if (!found) {
      throw BracketError("no sign change of f_P - rhs between additional levels " + std::to_string(n) + " and " +
                         std::to_string(n + 1));
    }
  }
  return result;
}

bool negative_level_exists(const SpectralProblem& problem) {
  require_sae(problem.derived, "negative_level_exists");
  if (problem.tau.is_infinite() || problem.tau.value() >= 0.0) {
    throw DomainError("negative_level_exists is defined for finite tau < 0 only");
  }
  return f_p(0.0, problem.derived) > eigenvalue_rhs(problem.tau, problem.derived);
}

double tau_lower_bound(const DerivedParams& d) {
  require_sae(d, "tau_lower_bound");
  const double f0 = special::lgamma_ratio(0.5 - 0.5 * d.P, 0.5 + 0.5 * d.P).value();
  return -f0 * special::gamma(1.0 + d.P) / special::gamma(1.0 - d.P);
}

PerturbedLevel perturbative_level(const SpectralProblem& problem, int n_r) {
  if (n_r < 0) throw DomainError("perturbative_level: n_r must be >= 0");
  const DerivedParams& d = problem.derived;
  if (problem.tau.is_zero()) return {n_r, standard_level(d, n_r), 0.0};
  if (problem.tau.is_infinite()) return {n_r, additional_level(d, n_r), 0.0};

  // Near the pole of Γ(z) at z = -n: 1/Γ(-n + δ) ≈ (-1)^n n! δ, so
  // f_P ≈ (-1)^n n! Γ(-n-P) δ and δ = ν solves f_P = rhs to first order.
  // Near the additional level the roles of the two Γ's swap: P -> -P, τ -> 1/τ.
  const double tau = problem.tau.value();
  const bool mirrored = std::abs(tau) > 1.0;
  const double p = mirrored ? -d.P : d.P;
  const double t = mirrored ? 1.0 / tau : tau;
  const double sign = (n_r % 2 == 0) ? 1.0 : -1.0;
  const double inv_factorial = std::exp(-std::lgamma(n_r + 1.0));
  const double nu =
      -sign * inv_factorial * special::gamma(1.0 - p) / special::gamma(1.0 + p) * special::rgamma(-n_r - p) * t;
  if (std::abs(nu) >= 0.1) {
    throw DomainError("perturbative_level: |nu| = " + std::to_string(std::abs(nu)) + " is too large");
  }
  return {n_r, 2.0 * d.omega * (2.0 * (n_r - nu) + p + 1.0), nu};
}

double equidistance_ratio(double energy, const DerivedParams& d) {
  for (double e : {energy, energy + 4.0 * d.omega}) {
    if (special::near_nonpositive_integer(z_of(e, d) - d.P, 0.25 * kFpPoleTolerance)) {
      throw PoleError("equidistance_ratio: energy is at an additional level");
    }
  }
  const double t = -energy / (4.0 * d.omega);
  return (t + 0.5 * d.P - 0.5) / (t - 0.5 * d.P - 0.5);
}

}  // namespace singosc
