#include <doctest.h>

#include <cmath>

#include "singosc/errors.hpp"
#include "singosc/oracle.hpp"
#include "singosc/wavefn.hpp"

using namespace singosc;

namespace {

DerivedParams with_p(double P, double g = 1.0) {
  PhysicalParams p;
  p.m = 0.5;
  p.g = g;
  p.v0 = 0.25 - P * P;
  return derive(p);
}

SpectralProblem problem(const DerivedParams& d, double tau) {
  return SpectralProblem::make(d, std::isinf(tau) ? ExtensionParameter::infinity() : ExtensionParameter::finite(tau));
}

RadialGrid grid_with(const DerivedParams& d, int steps) {
  RadialGrid g = RadialGrid::default_for(d);
  g.steps = steps;
  return g;
}

}  // namespace

TEST_CASE("grid defaults and validation") {
  const DerivedParams d = with_p(0.3, 4.0);
  const RadialGrid g = RadialGrid::default_for(d);
  CHECK(g.steps == 200000);
  CHECK(g.r_min == doctest::Approx(1e-6 / std::pow(d.kappa_scale, 0.5)).epsilon(1e-15));
  CHECK(d.kappa_scale * g.r_max * g.r_max == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(g.r(0) == doctest::Approx(g.r_min).epsilon(1e-15));
  CHECK(g.r(g.steps) == doctest::Approx(g.r_max).epsilon(1e-12));
  CHECK_NOTHROW(g.validate());

  RadialGrid bad = g;
  bad.steps = 999;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.steps = 1001;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.r_max = bad.r_min;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("boundary series from tau") {
  const DerivedParams d = with_p(0.3, 2.0);
  const BoundarySeries st = BoundarySeries::from_tau(d, ExtensionParameter::finite(0.0));
  CHECK(st.a_st == 1.0);
  CHECK(st.a_add == 0.0);
  const BoundarySeries add = BoundarySeries::from_tau(d, ExtensionParameter::infinity());
  CHECK(add.a_st == 0.0);
  CHECK(add.a_add == 1.0);
  const BoundarySeries gen = BoundarySeries::from_tau(d, ExtensionParameter::finite(-1.0));
  CHECK(gen.a_add / gen.a_st == doctest::Approx(-std::pow(d.kappa_scale, -d.P)).epsilon(1e-14));
}

TEST_CASE("pure oscillator levels") {
  PhysicalParams p;
  p.m = 0.5;
  p.g = 1.0;
  p.v0 = 0.0;
  const DerivedParams d = derive(p);
  const SpectralProblem prob = problem(d, 0.0);
  const RadialGrid grid = RadialGrid::default_for(d);
  for (int n = 0; n <= 3; ++n) {
    const double exact = 2 * d.omega * (2 * n + 1.5);
    const double shot = shoot_eigenvalue(prob, {exact - d.omega, exact + d.omega}, grid, 1e-12);
    CHECK(std::abs(shot - exact) <= 1e-8 * exact);
  }
}

TEST_CASE("closed-form levels by shooting") {
  const DerivedParams d = with_p(0.4);
  const RadialGrid grid = RadialGrid::default_for(d);
  const double st = 2 * d.omega * 1.4, add = 2 * d.omega * 0.6;
  CHECK(shoot_eigenvalue(problem(d, 0.0), {st - d.omega, st + d.omega}, grid) == doctest::Approx(st).epsilon(1e-6));
  CHECK(shoot_eigenvalue(problem(d, HUGE_VAL), {add - 0.5 * d.omega, add + d.omega}, grid) ==
        doctest::Approx(add).epsilon(1e-6));
}

TEST_CASE("shooting errors") {
  const DerivedParams d = with_p(0.4);
  const RadialGrid grid = RadialGrid::default_for(d);
  // No level between 3 ω and 6 ω on the standard branch.
  CHECK_THROWS_AS(shoot_eigenvalue(problem(d, 0.0), {3.0 * d.omega, 6.0 * d.omega}, grid), NoSignChange);
  RadialGrid coarse = grid;
  coarse.r_max = 40.0;
  coarse.steps = 1000;
  CHECK_THROWS_AS(numerov_integrate(problem(d, 0.0), 2.8, coarse, BoundarySeries{}, Direction::Outward), StepError);
}

TEST_CASE("outward solution is proportional to the standard eigenfunction") {
  const DerivedParams d = with_p(0.4);
  const SpectralProblem prob = problem(d, 0.0);
  const RadialGrid grid = RadialGrid::default_for(d);
  const auto res = solve_spectrum(prob, 2);
  const RadialWavefunction w = build_wavefunction(prob, res.levels[1]);
  const SampledState s = numerov_integrate(prob, res.levels[1].energy, grid,
                                           BoundarySeries::from_tau(d, prob.tau), Direction::Outward);
  const double h = grid.step();
  // Log-derivatives along the region where the outward solution is trusted.
  for (int i = 1000; i < 160000; i += 7919) {
    const double ua = s.u[i];
    if (std::abs(ua) < 1e-3 * std::abs(s.u[i + 1] - s.u[i - 1]) / h) continue;
    const double oracle = (s.u[i + 1] - s.u[i - 1]) / (2 * h * ua);
    auto u = [&](int j) { return grid.r(j) * eval_general(w, grid.r(j)); };
    const double analytic = (u(i + 1) - u(i - 1)) / (2 * h * u(i));
    INFO("r = " << grid.r(i));
    CHECK(oracle == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("inward and outward solutions agree at an eigenvalue") {
  const DerivedParams d = with_p(0.25);
  const SpectralProblem prob = problem(d, -1.0);
  const RadialGrid grid = RadialGrid::default_for(d);
  const auto res = solve_spectrum(prob, 1);
  const double e = shoot_eigenvalue(prob, res.brackets[0], grid, 1e-14);
  const SampledState out = numerov_integrate(prob, e, grid, BoundarySeries::from_tau(d, prob.tau), Direction::Outward);
  const SampledState in = numerov_integrate(prob, e, grid, BoundarySeries{}, Direction::Inward);
  // Around the middle of the well both are the same function up to scale.
  const int mid = static_cast<int>(std::log(1.0 / grid.r_min) / grid.step());
  const double ratio = out.u[mid] / in.u[mid];
  for (int k = -2000; k <= 2000; k += 500) CHECK(out.u[mid + k] / in.u[mid + k] == doctest::Approx(ratio).epsilon(1e-6));
}

TEST_CASE("fourth-order convergence") {
  const DerivedParams d = with_p(0.3);
  const SpectralProblem prob = problem(d, 0.0);
  const double exact = 2 * d.omega * (2 * 1 + 1 + d.P);
  std::vector<double> errors;
  for (int steps : {2000, 4000, 8000}) {
    const double e = shoot_eigenvalue(prob, {exact - d.omega, exact + d.omega}, grid_with(d, steps), 1e-15);
    errors.push_back(std::abs(e - exact));
  }
  const double r1 = errors[0] / errors[1], r2 = errors[1] / errors[2];
  CHECK(r1 == doctest::Approx(16.0).epsilon(0.15));
  CHECK(r2 == doctest::Approx(16.0).epsilon(0.15));
  // Richardson extrapolation from the two finest grids.
  const double e4 = shoot_eigenvalue(prob, {exact - d.omega, exact + d.omega}, grid_with(d, 4000), 1e-15);
  const double e8 = shoot_eigenvalue(prob, {exact - d.omega, exact + d.omega}, grid_with(d, 8000), 1e-15);
  CHECK(std::abs((16 * e8 - e4) / 15 - exact) < 0.05 * errors[2]);
}

TEST_CASE("normalization and orthogonality") {
  const DerivedParams d = with_p(0.25);
  for (double tau : {0.0, -1.0, HUGE_VAL}) {
    const SpectralProblem prob = problem(d, tau);
    const auto res = solve_spectrum(prob, 3);
    const auto gram = orthogonality_defect(prob, res.levels, RadialGrid::default_for(d));
    for (int i = 0; i < 3; ++i) CHECK(gram[i][i] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(max_off_diagonal(gram) <= (tau == 0.0 ? 1e-10 : 1e-8));
  }
}

TEST_CASE("two-sided orthogonality identity across extensions") {
  const double P = 0.25, m = 0.5;
  const DerivedParams d = with_p(P);
  const RadialGrid grid = RadialGrid::default_for(d);
  auto state = [&](double tau, int n) {
    const SpectralProblem prob = problem(d, tau);
    const auto res = solve_spectrum(prob, n + 1);
    const double e = res.levels[n].energy;
    return normalize(eigenstate(prob, shoot_eigenvalue(prob, {e - 1e-4, e + 1e-4}, grid, 1e-14), grid));
  };
  const SampledState s1 = state(0.0, 0), s2 = state(HUGE_VAL, 0);
  const double overlap = inner_product(s1, s2);
  CHECK(std::abs(overlap) > 1e-3);
  const BoundarySeries b1 = fit_boundary_series(s1, P), b2 = fit_boundary_series(s2, P);
  const double rhs = P * (b1.a_st * b2.a_add - b2.a_st * b1.a_add) / (m * (s1.energy - s2.energy));
  CHECK(overlap == doctest::Approx(rhs).epsilon(1e-4));

  // Within one extension the boundary term vanishes. The fitted r^{1/2+P}
  // part is 1e-3 of u on the fit window, so the fit resolves it to ~1e-5.
  const SampledState s3 = state(-1.0, 0), s4 = state(-1.0, 2);
  const BoundarySeries b3 = fit_boundary_series(s3, P), b4 = fit_boundary_series(s4, P);
  CHECK(std::abs(b3.a_st * b4.a_add - b4.a_st * b3.a_add) < 1e-4 * std::abs(b3.a_st * b4.a_add));
  CHECK(std::abs(inner_product(s3, s4)) < 1e-8);
  const double tau_b = tau_b_from_tau(d, ExtensionParameter::finite(-1.0));
  CHECK(std::abs(b3.a_add / b3.a_st / tau_b - 1.0) < 1e-5);
  CHECK(s3.a_add / s3.a_st == doctest::Approx(tau_b).epsilon(1e-14));
}

TEST_CASE("node counts agree with the analytic eigenfunctions") {
  const DerivedParams d = with_p(0.35);
  const RadialGrid grid = RadialGrid::default_for(d);
  for (double tau : {0.0, -0.5}) {
    const SpectralProblem prob = problem(d, tau);
    const auto res = solve_spectrum(prob, 4);
    for (int n = 0; n < 4; ++n) {
      const SampledState s = eigenstate(prob, res.levels[n].energy, grid);
      CHECK(count_nodes(s) == n);
    }
  }
}

TEST_CASE("grid mismatch") {
  const DerivedParams d = with_p(0.35);
  const SpectralProblem prob = problem(d, 0.0);
  const SampledState a = eigenstate(prob, 2 * d.omega * 1.35, grid_with(d, 20000));
  const SampledState b = eigenstate(prob, 2 * d.omega * 1.35, grid_with(d, 40000));
  CHECK_THROWS_AS(inner_product(a, b), GridMismatch);
  CHECK(inner_product(normalize(a), normalize(a)) == doctest::Approx(1.0).epsilon(1e-12));
}
