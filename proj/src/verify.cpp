#include "singosc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "singosc/errors.hpp"
#include "singosc/model.hpp"
#include "singosc/oracle.hpp"
#include "singosc/special.hpp"
#include "singosc/spectrum.hpp"
#include "singosc/wavefn.hpp"

namespace singosc {

namespace {

constexpr double kPValues[] = {0.1, 0.25, 0.4};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

// l = 0, m = 1/2, given g: V0 chosen so that P comes out as requested.
DerivedParams params_for_p(double P, double g = 1.0, int l = 0) {
  PhysicalParams p;
  p.m = 0.5;
  p.g = g;
  p.l = l;
  const double lh = l + 0.5;
  p.v0 = (lh * lh - P * P) / (2.0 * p.m);
  return derive(p);
}

SpectralProblem problem_for(double P, ExtensionParameter tau, double g = 1.0) {
  return SpectralProblem::make(params_for_p(P, g), tau);
}

ExtensionParameter tau_of(double t) {
  return std::isinf(t) ? ExtensionParameter::infinity() : ExtensionParameter::finite(t);
}

std::string tau_label(double t) { return std::isinf(t) ? "inf" : fmt("%g", t); }

double rel_floor(double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome check_closed_form(double ts) {
  double worst = 0.0;
  for (double P : kPValues) {
    for (double t : {0.0, HUGE_VAL}) {
      // g = 2 so that ω = sqrt(2) and the check is not unit-free by accident.
      const SpectralProblem prob = problem_for(P, tau_of(t), 2.0);
      const double w = std::sqrt(prob.derived.params.g / (2.0 * prob.derived.params.m));
      const SpectrumResult res = solve_spectrum(prob, 21);
      for (int n = 0; n <= 20; ++n) {
        const double expected = 2.0 * w * (2.0 * n + 1.0 + (t == 0.0 ? P : -P));
        worst = std::max(worst, std::abs(res.levels[n].energy - expected) / w);
      }
    }
  }
  return {worst <= 1e-10 * ts, fmt("max |dE|/omega = %.3e over n_r <= 20, 3 P, tau in {0, inf}", worst)};
}

Outcome check_equidistance(double ts) {
  double worst = 0.0;
  for (double P : kPValues) {
    for (double t : {0.0, HUGE_VAL}) {
      const SpectralProblem prob = problem_for(P, tau_of(t));
      const double w = prob.derived.omega;
      const SpectrumResult res = solve_spectrum(prob, 21);
      for (int n = 0; n < 20; ++n) {
        const double spacing = res.levels[n + 1].energy - res.levels[n].energy;
        worst = std::max(worst, std::abs(spacing / (4.0 * w) - 1.0));
      }
    }
  }
  const SpectralProblem gen = problem_for(0.25, ExtensionParameter::finite(-1.0));
  const double w = gen.derived.omega;
  const SpectrumResult res = solve_spectrum(gen, 3);
  const double d0 = std::abs(res.levels[1].energy - res.levels[0].energy - 4.0 * w) / w;
  const double d1 = std::abs(res.levels[2].energy - res.levels[1].energy - 4.0 * w) / w;
  const bool ok = worst <= 1e-12 * ts && d0 > 1e-3 && d1 > 1e-3;
  return {ok, fmt("closed-form spacing rel dev %.2e; tau=-1 P=0.25 |spacing-4w|/w = %.4f, %.4f", worst, d0, d1)};
}

Outcome check_ratio_identity(double ts) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-30.0, 40.0);
  double worst = 0.0;
  int tested = 0;
  for (double P : kPValues) {
    const DerivedParams d = params_for_p(P);
    int k = 0;
    while (k < 100) {
      const double e = dist(rng) * d.omega;
      const double z = -e / (4.0 * d.omega) + 0.5 + 0.5 * P;
      auto near_int = [](double x) { return std::abs(x - std::round(x)) < 1e-6; };
      if (near_int(z) || near_int(z - P) || near_int(z - 1.0) || near_int(z - 1.0 - P)) continue;
      const double direct = f_p(e + 4.0 * d.omega, d) / f_p(e, d);
      worst = std::max(worst, std::abs(equidistance_ratio(e, d) / direct - 1.0));
      ++k;
      ++tested;
    }
  }
  return {worst <= 1e-10 * ts, fmt("max rel dev %.3e over %d random E", worst, tested)};
}

Outcome check_oracle_agreement(double ts) {
  double worst = 0.0;
  std::string where;
  int levels = 0;
  for (double P : kPValues) {
    for (double t : {0.0, -0.3, -1.0, -3.0, HUGE_VAL}) {
      const SpectralProblem prob = problem_for(P, tau_of(t));
      const double w = prob.derived.omega;
      const SpectrumResult res = solve_spectrum(prob, 3);
      const std::vector<Bracket> br = level_brackets(prob, 3, -1e6 * w);
      const RadialGrid grid = RadialGrid::default_for(prob.derived);
      for (int n = 0; n < 3; ++n) {
        const double e = shoot_eigenvalue(prob, br[n], grid);
        const double err = rel_floor(e, res.levels[n].energy, w);
        if (err > worst) {
          worst = err;
          where = fmt("P=%g tau=%s n=%d", P, tau_label(t).c_str(), n);
        }
        ++levels;
      }
    }
  }
  return {worst <= 1e-6 * ts, fmt("max rel dev %.3e over %d levels (worst at %s)", worst, levels, where.c_str())};
}

Outcome check_orthogonality(double ts) {
  const double P = 0.25;
  std::string detail;
  bool ok = true;
  for (double t : {0.0, -1.0, HUGE_VAL}) {
    const SpectralProblem prob = problem_for(P, tau_of(t));
    const SpectrumResult res = solve_spectrum(prob, 4);
    const RadialGrid grid = RadialGrid::default_for(prob.derived);
    const auto gram = orthogonality_defect(prob, res.levels, grid);
    const double off = max_off_diagonal(gram);
    double diag = 0.0;
    for (std::size_t i = 0; i < gram.size(); ++i) diag = std::max(diag, std::abs(gram[i][i] - 1.0));
    const double limit = (t == 0.0 ? 1e-10 : 1e-8) * ts;
    ok = ok && off <= limit && diag <= 1e-6 * ts;
    detail += fmt("tau=%s off-diag %.2e; ", tau_label(t).c_str(), off);
  }

  // m(E1 - E2) ∫ u1 u2 dr = P (A1 B2 - A2 B1) across different extensions.
  struct Pick {
    double tau;
    int n;
  };
  const std::pair<Pick, Pick> pairs[] = {
      {{0.0, 0}, {HUGE_VAL, 0}}, {{0.0, 1}, {HUGE_VAL, 2}}, {{0.0, 0}, {-1.0, 1}}, {{-1.0, 0}, {HUGE_VAL, 1}}};
  double worst = 0.0;
  for (const auto& [p1, p2] : pairs) {
    auto state = [&](const Pick& pk) {
      const SpectralProblem prob = problem_for(P, tau_of(pk.tau));
      const SpectrumResult res = solve_spectrum(prob, pk.n + 1);
      const RadialGrid grid = RadialGrid::default_for(prob.derived);
      const double e = res.levels[pk.n].energy;
      const double delta = 1e-4 * std::max(1.0, std::abs(e));
      const double es = shoot_eigenvalue(prob, {e - delta, e + delta}, grid, 1e-14);
      return normalize(eigenstate(prob, es, grid));
    };
    const SampledState s1 = state(p1);
    const SampledState s2 = state(p2);
    const double m = 0.5;
    const double lhs = m * (s1.energy - s2.energy) * inner_product(s1, s2);
    const BoundarySeries b1 = fit_boundary_series(s1, P);
    const BoundarySeries b2 = fit_boundary_series(s2, P);
    const double rhs = P * (b1.a_st * b2.a_add - b2.a_st * b1.a_add);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  ok = ok && worst <= 1e-4 * ts;
  detail += fmt("cross-tau identity max rel dev %.2e", worst);
  return {ok, detail};
}

Outcome check_normalization(double ts) {
  struct Case {
    double P, tau;
    int n;
  };
  const Case cases[] = {{0.25, -1.0, 0}, {0.25, -1.0, 1}, {0.25, -1.0, 2}, {0.4, -3.0, 0}, {0.4, -3.0, 1},
                        {0.1, -1.0, 0},  {0.1, -1.0, 1},  {0.25, 0.5, 0},  {0.4, 0.5, 1},  {0.25, -0.3, 1}};
  double worst = 0.0;
  for (const Case& c : cases) {
    const SpectralProblem prob = problem_for(c.P, ExtensionParameter::finite(c.tau));
    const SpectrumResult res = solve_spectrum(prob, c.n + 1);
    const RadialWavefunction w = build_wavefunction(prob, res.levels[c.n]);
    const double c2 = normalization_constant(w);
    worst = std::max(worst, std::abs(c2 * quadrature_norm(w) - 1.0));
    if (!(c2 > 0.0)) return {false, fmt("C^2 = %g <= 0 at P=%g tau=%g n=%d", c2, c.P, c.tau, c.n)};
  }
  return {worst <= 1e-6 * ts, fmt("max |C^2 * quadrature - 1| = %.3e over 10 generic states", worst)};
}

Outcome check_perturbative(double /*ts*/) {
  const double P = 0.3;
  double min_slope = HUGE_VAL;
  std::string detail;
  SolveOptions exact;
  exact.root_tolerance = 0.0;
  for (bool mirrored : {false, true}) {
    for (int n = 0; n <= 2; ++n) {
      std::vector<double> xs, ys;
      for (double eps : {1e-3, 1e-4, 1e-5}) {
        const double t = mirrored ? 1.0 / eps : eps;
        const SpectralProblem prob = problem_for(P, ExtensionParameter::finite(t));
        const double e_exact = solve_spectrum(prob, n + 1, exact).levels[n].energy;
        const double e_pert = perturbative_level(prob, n).energy;
        xs.push_back(eps);
        ys.push_back(std::abs(e_pert - e_exact));
      }
      const double slope = loglog_slope(xs, ys);
      min_slope = std::min(min_slope, slope);
      detail += fmt("%s n=%d slope %.3f; ", mirrored ? "1/tau" : "tau", n, slope);
    }
  }
  detail.resize(detail.size() - 2);
  return {min_slope >= 1.9, detail};
}

Outcome check_census(double /*ts*/) {
  int mismatches = 0;
  int with_negative = 0;
  int tested = 0;
  SolveOptions deep;
  deep.search_floor = -1e12;
  for (double P : {0.25, 0.4}) {
    const DerivedParams d = params_for_p(P);
    const double bound = tau_lower_bound(d);
    auto negatives = [&](double t) {
      const SpectrumResult res = solve_spectrum(SpectralProblem::make(d, ExtensionParameter::finite(t)), 3, deep);
      return std::pair{static_cast<int>(std::count_if(res.levels.begin(), res.levels.end(),
                                                      [](const EnergyLevel& l) { return l.energy < 0.0; })),
                       res.physicality_warning};
    };
    for (int k = 1; k <= 50; ++k) {
      const double t = bound * (1.0 - k / 51.0);
      const bool predicted = negative_level_exists(SpectralProblem::make(d, ExtensionParameter::finite(t)));
      const auto [count, warn] = negatives(t);
      if (count != (predicted ? 1 : 0) || warn) ++mismatches;
      with_negative += count;
      ++tested;
    }
    // Below the bound the level turns positive.
    for (int k = 1; k <= 10; ++k) {
      const double t = bound * (1.0 + 0.2 * k);
      const bool predicted = negative_level_exists(SpectralProblem::make(d, ExtensionParameter::finite(t)));
      const auto [count, warn] = negatives(t);
      if (count != (predicted ? 1 : 0) || predicted || warn) ++mismatches;
      ++tested;
    }
    for (int k = 1; k <= 20; ++k) {
      const double t = 0.05 * k * k;
      const auto [count, warn] = negatives(t);
      if (count != 0 || !warn) ++mismatches;
      ++tested;
    }
  }
  return {mismatches == 0,
          fmt("%d mismatches over %d tau values (%d negative levels inside the bound)", mismatches, tested,
              with_negative)};
}

Outcome check_quantum_defect(double /*ts*/) {
  double min_slope = HUGE_VAL;
  std::string detail;
  for (int l : {0, 1, 2}) {
    std::vector<double> xs, ys;
    for (double v0 : {1e-2, 1e-3, 1e-4}) {
      PhysicalParams p;
      p.v0 = v0;
      p.l = l;
      const DerivedParams d = derive(p);
      xs.push_back(v0);
      ys.push_back(std::abs(d.defect - quantum_defect_small_v0(p)));
    }
    const double slope = loglog_slope(xs, ys);
    min_slope = std::min(min_slope, slope);
    detail += fmt("l=%d slope %.3f; ", l, slope);
  }
  detail.resize(detail.size() - 2);
  return {min_slope >= 1.9, detail};
}

Outcome check_representation(double ts) {
  struct Case {
    double P, tau;
    int n;
  };
  const Case cases[] = {
      {0.25, 0.0, 1}, {0.4, HUGE_VAL, 0}, {0.25, HUGE_VAL, 2}, {0.25, -1.0, 0}, {0.1, -1.0, 1}};
  std::mt19937_64 rng(7);
  double worst = 0.0;
  bool boundary_ok = true;
  for (const Case& c : cases) {
    const SpectralProblem prob = problem_for(c.P, tau_of(c.tau));
    const SpectrumResult res = solve_spectrum(prob, c.n + 1);
    const RadialWavefunction w = build_wavefunction(prob, res.levels[c.n]);
    const double r_hi = std::sqrt(50.0 / prob.derived.kappa_scale);
    std::uniform_real_distribution<double> logr(std::log(1e-4), std::log(r_hi));
    std::vector<std::array<double, 3>> vals;
    double rmax = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double r = std::exp(logr(rng));
      vals.push_back({eval_general(w, r), eval_unified(w, r), eval_whittaker(w, r)});
      rmax = std::max(rmax, std::abs(vals.back()[1]));
    }
    for (const auto& v : vals) {
      if (std::abs(v[1]) <= 1e-12 * rmax) continue;
      worst = std::max({worst, std::abs(v[0] / v[1] - 1.0), std::abs(v[2] / v[1] - 1.0)});
    }
    double prev = HUGE_VAL;
    for (int k = 0; k <= 16; ++k) {
      const double r = 1e-4 * std::pow(10.0, -0.25 * k);
      const double ur = std::abs(r * eval_unified(w, r));
      if (!(ur < prev)) boundary_ok = false;
      prev = ur;
    }
  }
  return {worst <= 1e-8 * ts && boundary_ok,
          fmt("max rel dev between forms %.3e over 5 states; |r R| decreasing to r = 1e-8: %s", worst,
              boundary_ok ? "yes" : "no")};
}

Outcome check_special_functions(double ts) {
  std::mt19937_64 rng(99);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto off_pole = [&](double a, double b) {
    for (;;) {
      const double x = uni(a, b);
      if (std::abs(x - std::round(x)) > 1e-3 || x > 0.5) return x;
    }
  };
  double rec = 0, refl = 0, lg = 0, psi = 0, ode = 0, conn = 0, asym = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = off_pole(-10.0, 10.0);
    const double g1 = special::gamma(x + 1.0);
    rec = std::max(rec, std::abs(g1 - x * special::gamma(x)) / std::abs(g1));
    const special::LogGammaValue v = special::lgamma_signed(x);
    lg = std::max(lg, std::abs(v.value() / special::gamma(x) - 1.0));
    psi = std::max(psi, std::abs(special::digamma(x + 1.0) - special::digamma(x) - 1.0 / x) /
                            std::max(1.0, std::abs(1.0 / x)));
    const double y = uni(0.001, 0.999);
    refl = std::max(refl, std::abs(special::gamma(y) * special::gamma(1.0 - y) * special::sinpi(y) /
                                       std::numbers::pi - 1.0));
  }
  // x M'' + (b - x) M' - a M = 0 with 5-point central differences.
  for (int i = 0; i < 1000; ++i) {
    const double a = uni(-8.0, 4.0);
    const double b = uni(0.55, 2.95);
    const double x = uni(0.2, 30.0);
    const double h = 0.01;
    double m[5];
    for (int k = 0; k < 5; ++k) m[k] = special::kummer_m(a, b, x + (k - 2) * h);
    const double d1 = (m[0] - 8.0 * m[1] + 8.0 * m[3] - m[4]) / (12.0 * h);
    const double d2 = (-m[0] + 16.0 * m[1] - 30.0 * m[2] + 16.0 * m[3] - m[4]) / (12.0 * h * h);
    const double scale = std::abs(x * d2) + std::abs((b - x) * d1) + std::abs(a * m[2]);
    ode = std::max(ode, std::abs(x * d2 + (b - x) * d1 - a * m[2]) / scale);
  }
  // U against the two-M combination in plain double (small x, mild
  // cancellation), measured on the scale of the two terms, and against its
  // large-x asymptotic expansion where the truncated expansion is itself good
  // to 1e-11.
  for (int i = 0; i < 1000; ++i) {
    const double a = uni(-3.0, 3.0);
    const double b = uni(1.02, 1.48);
    const double x = uni(0.1, 4.0);
    const double f = std::numbers::pi / special::sinpi(b);
    const double first = f * special::kummer_m(a, b, x) * special::rgamma(1.0 + a - b) * special::rgamma(b);
    const double second = f * std::pow(x, 1.0 - b) * special::kummer_m(1.0 + a - b, 2.0 - b, x) *
                          special::rgamma(a) * special::rgamma(2.0 - b);
    const double u = special::tricomi_u(a, b, x);
    conn = std::max(conn, std::abs(u - (first - second)) / (std::abs(first) + std::abs(second)));
  }
  for (int i = 0; i < 1000;) {
    const double a = uni(-3.0, 3.0);
    const double b = uni(1.02, 1.48);
    const double x = uni(30.0, 60.0);
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double next = term * (a + k) * (a - b + 1.0 + k) / ((k + 1.0) * -x);
      if (std::abs(next) >= std::abs(term) || next == 0.0) {
        if (next == 0.0) term = 0.0;
        break;
      }
      term = next;
      sum += term;
    }
    if (std::abs(term) > 1e-11 * std::abs(sum)) continue;
    asym = std::max(asym, std::abs(special::tricomi_u(a, b, x) / (std::pow(x, -a) * sum) - 1.0));
    ++i;
  }
  const bool ok = rec <= 1e-12 * ts && refl <= 1e-11 * ts && lg <= 1e-12 * ts && psi <= 1e-12 * ts &&
                  ode <= 1e-8 * ts && conn <= 1e-9 * ts && asym <= 1e-9 * ts;
  return {ok, fmt("gamma rec %.1e refl %.1e lgamma %.1e psi rec %.1e Kummer ODE %.1e U connection %.1e "
                  "U asymptotic %.1e",
                  rec, refl, lg, psi, ode, conn, asym)};
}

struct CheckDef {
  const char* name;
  double budget;
  Outcome (*fn)(double);
};

const CheckDef kChecks[] = {
    {"closed_form", 1.0, check_closed_form},
    {"equidistance", 1.0, check_equidistance},
    {"ratio_identity", 1.0, check_ratio_identity},
    {"oracle_agreement", 60.0, check_oracle_agreement},
    {"orthogonality", 30.0, check_orthogonality},
    {"normalization", 30.0, check_normalization},
    {"perturbative", 10.0, check_perturbative},
    {"census", 60.0, check_census},
    {"quantum_defect", 1.0, check_quantum_defect},
    {"representation", 10.0, check_representation},
    {"special_functions", 5.0, check_special_functions},
};

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const CheckDef& c : kChecks) v.emplace_back(c.name);
    return v;
  }();
  return names;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  for (const std::string& name : options.only) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw DomainError("unknown check '" + name + "'");
    }
  }
  std::vector<CheckResult> out;
  int id = 0;
  for (const CheckDef& c : kChecks) {
    ++id;
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), c.name) == options.only.end()) {
      continue;
    }
    CheckResult r;
    r.id = id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.fn(options.tolerance_scale);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += fmt(" [over the %.0f s budget]", r.budget_seconds);
    }
    out.push_back(r);
  }
  return out;
}

std::string format_result(const CheckResult& r) {
  return fmt("%s %2d %-17s %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
             r.seconds);
}

}  // namespace singosc
