#include "singosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "singosc/errors.hpp"

namespace singosc {

namespace {

constexpr double kRescaleAbove = 1e100;
constexpr double kMaxStepPhase = 0.5;
constexpr double kInwardAction = 45.0;  // e-folds of decay between match and inward start

// Q(r) of y'' = Q y in x = ln r, straight from the physical parameters.
struct QFunction {
  double c0;  // l(l+1) + 1/4 - 2mV0
  double two_m;
  double g;
  double energy;

  QFunction(const PhysicalParams& p, double e)
      : c0(p.l * (p.l + 1.0) + 0.25 - 2.0 * p.m * p.v0), two_m(2.0 * p.m), g(p.g), energy(e) {}

  long double operator()(long double r) const {
    const long double r2 = r * r;
    return c0 + two_m * r2 * (g * r2 - energy);
  }
};

// The recurrence runs in long double: near r_min the r^{1/2-P} solution
// outweighs r^{1/2+P} by r^{-2P}, so every rounding of y leaks into the
// standard component amplified by that ratio and the leaks add up over the
// small-r steps. Double precision leaves ~1e-6 in the eigenvalue at P = 0.4.
using real = long double;

struct Workspace {
  std::vector<real> q;
  std::vector<real> y;
  real h = 0.0;
};

// Radii r_i and the spacing h in ln r, computed once per grid.
struct Nodes {
  std::vector<real> r;
  real h = 0.0;

  explicit Nodes(const RadialGrid& grid) : r(grid.steps + 1) {
    grid.validate();
    h = std::log(static_cast<real>(grid.r_max) / grid.r_min) / grid.steps;
    for (int i = 0; i <= grid.steps; ++i) r[i] = grid.r_min * std::exp(h * i);
  }
};

void fill_q(Workspace& ws, const QFunction& qf, const Nodes& nodes, int last) {
  ws.h = nodes.h;
  ws.q.resize(last + 1);
  for (int i = 0; i <= last; ++i) {
    const real q = qf(nodes.r[i]);
    const double phase = static_cast<double>(ws.h * std::sqrt(std::abs(q)));
    if (phase > kMaxStepPhase) {
      throw StepError("Numerov step too coarse at r = " + std::to_string(static_cast<double>(nodes.r[i])) +
                      ": h·sqrt|Q| = " + std::to_string(phase));
    }
    ws.q[i] = q;
  }
}

// One Numerov pass over indices from..to (step ±1) with y[from], y[from±1]
// already seeded. Returns the accumulated rescale factor (>= 1).
double numerov_pass(const std::vector<real>& q, real h, std::vector<real>& y, int from, int to) {
  const int dir = to >= from ? 1 : -1;
  const real h2 = h * h;
  auto weight = [&](int i) { return 1 - h2 * q[i] / 12; };
  real z_prev = weight(from) * y[from];
  real z_cur = weight(from + dir) * y[from + dir];
  double scale = 1.0;
  for (int i = from + dir; i != to; i += dir) {
    const real z_next = 2 * z_cur - z_prev + h2 * q[i] * y[i];
    const int j = i + dir;
    y[j] = z_next / weight(j);
    z_prev = z_cur;
    z_cur = z_next;
    if (std::abs(y[j]) > kRescaleAbove) {
      const real f = std::abs(y[j]);
      for (int k = from; k != j + dir; k += dir) y[k] /= f;
      z_prev /= f;
      z_cur /= f;
      scale *= static_cast<double>(f);
    }
  }
  return scale;
}

void seed_outward(std::vector<real>& y, const Nodes& nodes, double P, double energy, const PhysicalParams& p,
                  const BoundarySeries& b) {
  const real alpha_plus = -2.0L * p.m * energy / (4.0L * (1.0L + P));
  const real alpha_minus = -2.0L * p.m * energy / (4.0L * (1.0L - P));
  for (int i = 0; i < 2; ++i) {
    const real r = nodes.r[i];
    const real r2 = r * r;
    y[i] = b.a_st * std::pow(r, static_cast<real>(P)) * (1 + alpha_plus * r2) +
           b.a_add * std::pow(r, -static_cast<real>(P)) * (1 + alpha_minus * r2);
  }
}

int index_of(const RadialGrid& grid, double r) {
  const int i = static_cast<int>(std::lround(std::log(r / grid.r_min) / grid.step()));
  return std::clamp(i, 2, grid.steps - 3);
}

// Outer turning point if there is one; otherwise the minimum of Q (E > 0) or
// the decay length 1/sqrt(2m|E|) of a negative level.
int match_index(const QFunction& qf, const RadialGrid& grid, double beta) {
  const double e = qf.energy;
  const double a = qf.two_m;
  double r2;
  if (e > 0.0) {
    const double disc = a * e * a * e - 4.0 * a * qf.g * qf.c0;
    r2 = disc >= 0.0 ? (a * e + std::sqrt(disc)) / (2.0 * a * qf.g) : e / (2.0 * qf.g);
  } else {
    r2 = e < 0.0 ? std::min(1.0 / beta, 1.0 / (a * -e)) : 1.0 / beta;
  }
  return index_of(grid, std::sqrt(r2));
}

int inward_start(const QFunction& qf, const Nodes& nodes, int m) {
  const int last = static_cast<int>(nodes.r.size()) - 1;
  real action = 0.0;
  int i = m;
  while (i < last && action < kInwardAction) {
    ++i;
    action += nodes.h * std::sqrt(std::max(real(0), qf(nodes.r[i])));
  }
  return std::max(i, m + 2);
}

struct TwoSided {
  Workspace ws;  // q up to the inward start; y holds the outward solution
  std::vector<real> y_in;
  int m = 0;
  int start = 0;
  double out_scale = 1.0;
};

// Fills `t`, reusing its buffers across calls.
void integrate_two_sided(const SpectralProblem& problem, double energy, const RadialGrid& grid, const Nodes& nodes,
                         TwoSided& t) {
  const DerivedParams& d = problem.derived;
  const QFunction qf(d.params, energy);
  t.m = match_index(qf, grid, d.kappa_scale);
  t.start = inward_start(qf, nodes, t.m);

  fill_q(t.ws, qf, nodes, t.start);
  t.ws.y.assign(t.m + 2, 0.0);
  seed_outward(t.ws.y, nodes, d.P, energy, d.params, BoundarySeries::from_tau(d, problem.tau));
  t.out_scale = numerov_pass(t.ws.q, t.ws.h, t.ws.y, 0, t.m + 1);

  t.y_in.assign(t.start + 1, 0.0);
  t.y_in[t.start - 1] = 1.0;
  numerov_pass(t.ws.q, t.ws.h, t.y_in, t.start, t.m);
}

// Discrete Wronskian of the outward and inward solutions; invariant along the
// grid, so its sign does not depend on where it is taken.
double mismatch(const SpectralProblem& problem, double energy, const RadialGrid& grid, const Nodes& nodes,
                TwoSided& t) {
  integrate_two_sided(problem, energy, grid, nodes, t);
  const real h2 = t.ws.h * t.ws.h;
  auto z = [&](const std::vector<real>& y, int i) { return (1 - h2 * t.ws.q[i] / 12) * y[i]; };
  const int m = t.m;
  const real w = z(t.ws.y, m) * z(t.y_in, m + 1) - z(t.ws.y, m + 1) * z(t.y_in, m);
  return static_cast<double>(w / (std::abs(z(t.ws.y, m)) + std::abs(z(t.ws.y, m + 1))));
}

}  // namespace

BoundarySeries BoundarySeries::from_tau(const DerivedParams& derived, const ExtensionParameter& tau) {
  if (tau.is_infinite()) return {0.0, 1.0};
  return {1.0, tau.value() * std::pow(derived.kappa_scale, -derived.P)};
}

void RadialGrid::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("radial grid needs 0 < r_min < r_max");
  if (steps < 1000 || steps % 2 != 0) throw DomainError("radial grid needs an even step count >= 1000");
}

double RadialGrid::step() const { return std::log(r_max / r_min) / steps; }

double RadialGrid::r(int i) const { return r_min * std::exp(i * step()); }

RadialGrid RadialGrid::default_for(const DerivedParams& derived) {
  const double beta = derived.kappa_scale;
  return {1e-6 / std::sqrt(beta), std::sqrt(50.0 / beta), 200000};
}

SampledState numerov_integrate(const SpectralProblem& problem, double energy, const RadialGrid& grid,
                               const BoundarySeries& boundary, Direction direction) {
  const Nodes nodes(grid);
  const DerivedParams& d = problem.derived;
  const int n = grid.steps;
  Workspace ws;
  fill_q(ws, QFunction(d.params, energy), nodes, n);
  ws.y.assign(n + 1, 0.0);
  SampledState s{grid, d.P, energy, {}, 0.0, 0.0};
  if (direction == Direction::Outward) {
    seed_outward(ws.y, nodes, d.P, energy, d.params, boundary);
    const double scale = numerov_pass(ws.q, ws.h, ws.y, 0, n);
    s.a_st = boundary.a_st / scale;
    s.a_add = boundary.a_add / scale;
  } else {
    ws.y[n - 1] = 1.0;
    numerov_pass(ws.q, ws.h, ws.y, n, 0);
  }
  s.u.resize(n + 1);
  for (int i = 0; i <= n; ++i) s.u[i] = static_cast<double>(std::sqrt(nodes.r[i]) * ws.y[i]);
  return s;
}

double shoot_eigenvalue(const SpectralProblem& problem, const Bracket& bracket, const RadialGrid& grid,
                        double tolerance) {
  const Nodes nodes(grid);
  TwoSided work;
  double lo = bracket.lo;
  double hi = bracket.hi;
  double w_lo = mismatch(problem, lo, grid, nodes, work);
  const double w_hi = mismatch(problem, hi, grid, nodes, work);
  if ((w_lo > 0.0) == (w_hi > 0.0)) {
    throw NoSignChange("shoot_eigenvalue: mismatch has the same sign at E = " + std::to_string(lo) + " and " +
                       std::to_string(hi));
  }
  const double tol = tolerance * problem.derived.omega;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double w = mismatch(problem, mid, grid, nodes, work);
    if ((w > 0.0) == (w_lo > 0.0)) {
      lo = mid;
      w_lo = w;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SampledState eigenstate(const SpectralProblem& problem, double energy, const RadialGrid& grid) {
  const Nodes nodes(grid);
  TwoSided t;
  integrate_two_sided(problem, energy, grid, nodes, t);
  const BoundarySeries b = BoundarySeries::from_tau(problem.derived, problem.tau);
  const real join = t.ws.y[t.m] / t.y_in[t.m];
  SampledState s{grid, problem.derived.P, energy, std::vector<double>(grid.steps + 1, 0.0), b.a_st / t.out_scale,
                 b.a_add / t.out_scale};
  for (int i = 0; i <= t.start; ++i) {
    const real y = i <= t.m ? t.ws.y[i] : join * t.y_in[i];
    s.u[i] = static_cast<double>(std::sqrt(nodes.r[i]) * y);
  }
  return s;
}

double inner_product(const SampledState& s1, const SampledState& s2) {
  if (!(s1.grid == s2.grid) || s1.u.size() != s2.u.size()) {
    throw GridMismatch("inner_product: states are sampled on different grids");
  }
  const RadialGrid& g = s1.grid;
  const double h = g.step();
  // Simpson in x: ∫ u1 u2 dr = ∫ u1 u2 r dx.
  double acc = 0.0;
  for (int i = 0; i <= g.steps; ++i) {
    const double w = (i == 0 || i == g.steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * s1.u[i] * s2.u[i] * g.r(i);
  }
  acc *= h / 3.0;
  const double p = s1.P;
  const double r0 = g.r_min;
  const double head = s1.a_st * s2.a_st * std::pow(r0, 2.0 + 2.0 * p) / (2.0 + 2.0 * p) +
                      (s1.a_st * s2.a_add + s1.a_add * s2.a_st) * r0 * r0 / 2.0 +
                      s1.a_add * s2.a_add * std::pow(r0, 2.0 - 2.0 * p) / (2.0 - 2.0 * p);
  return acc + head;
}

SampledState normalize(const SampledState& state) {
  const double norm = std::sqrt(inner_product(state, state));
  const double lead = state.a_st != 0.0 ? state.a_st : state.a_add;
  const double f = (lead < 0.0 ? -1.0 : 1.0) / norm;
  SampledState out = state;
  for (double& v : out.u) v *= f;
  out.a_st *= f;
  out.a_add *= f;
  return out;
}

std::vector<std::vector<double>> orthogonality_defect(const SpectralProblem& problem,
                                                      const std::vector<EnergyLevel>& levels,
                                                      const RadialGrid& grid) {
  const double w = problem.derived.omega;
  std::vector<SampledState> states;
  for (const EnergyLevel& level : levels) {
    const double delta = 1e-4 * std::max(w, std::abs(level.energy));
    const double e = shoot_eigenvalue(problem, {level.energy - delta, level.energy + delta}, grid, 1e-14);
    states.push_back(normalize(eigenstate(problem, e, grid)));
  }
  const std::size_t n = states.size();
  std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) gram[i][j] = gram[j][i] = inner_product(states[i], states[j]);
  }
  return gram;
}

double max_off_diagonal(const std::vector<std::vector<double>>& gram) {
  double m = 0.0;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    for (std::size_t j = 0; j < gram[i].size(); ++j) {
      if (i != j) m = std::max(m, std::abs(gram[i][j]));
    }
  }
  return m;
}

BoundarySeries fit_boundary_series(const SampledState& state, double P) {
  const RadialGrid& g = state.grid;
  const double r_top = 100.0 * g.r_min;
  // Columns scaled to 1 at r_min keep the 2x2 normal equations well conditioned.
  const double f0 = std::pow(g.r_min, 0.5 + P);
  const double g0 = std::pow(g.r_min, 0.5 - P);
  long double sff = 0, sfg = 0, sgg = 0, sfu = 0, sgu = 0;
  for (int i = 0; i <= g.steps && g.r(i) <= r_top * (1.0 + 1e-12); ++i) {
    const double r = g.r(i);
    const long double f = std::pow(r, 0.5 + P) / f0;
    const long double gg = std::pow(r, 0.5 - P) / g0;
    const long double u = state.u[i];
    sff += f * f;
    sfg += f * gg;
    sgg += gg * gg;
    sfu += f * u;
    sgu += gg * u;
  }
  const long double det = sff * sgg - sfg * sfg;
  const long double a = (sfu * sgg - sgu * sfg) / det;
  const long double b = (sgu * sff - sfu * sfg) / det;
  return {static_cast<double>(a / f0), static_cast<double>(b / g0)};
}

int count_nodes(const SampledState& state) {
  double umax = 0.0;
  for (double v : state.u) umax = std::max(umax, std::abs(v));
  const double floor = 1e-8 * umax;
  int nodes = 0;
  int last_sign = 0;
  for (double v : state.u) {
    if (std::abs(v) < floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

}  // namespace singosc
