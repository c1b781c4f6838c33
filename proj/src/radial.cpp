#include "singflow/radial.hpp"

#include <algorithm>
#include <cmath>

#include "singflow/numeric.hpp"

namespace singflow {
namespace radial {

namespace {

constexpr long kMaxSteps = 100000000;  // 1e8

double local_w(const PotentialSpec& spec, double eta_squared, double x) {
  return eta_squared +
         spec.lambda_l * spec.profile(x) / std::pow(x, spec.n);
}

double local_w_derivative(const PotentialSpec& spec, double x) {
  const double xn = std::pow(x, spec.n);
  return spec.lambda_l *
         (spec.profile.derivative(x) / xn -
          spec.n * spec.profile(x) / (xn * x));
}

// Step choice. Two constraints:
//  - resolution: h <= local_wavelength / points_per_wavelength, with the Airy
//    scale |w'|^(-1/3) folded in so turning points stay resolved;
//  - accuracy: the stepper is exact for constant w, so its error is driven by
//    the variation scale s = |w/w'| (floored by the Airy scale). Per-step
//    error ~ (h/s)^5; equidistributing it over the range L gives
//    h ~ s (tol s / L)^(1/4).
// Raising points_per_wavelength tightens both rules, so halving all steps is
// a single knob.
double step_size(const PotentialSpec& spec, double eta_squared, double x,
                 const Tolerances& tol, double range, double remaining) {
  const int ppw = tol.points_per_wavelength;
  double h = remaining;
  const double w = local_w(spec, eta_squared, x);
  const double dw = local_w_derivative(spec, x);
  const double airy2 = std::pow(std::abs(dw), 2.0 / 3.0);
  const double freq2 = std::abs(w) + airy2;
  if (freq2 > 0) h = std::min(h, 2 * kPi / (ppw * std::sqrt(freq2)));
  if (dw != 0) {
    const double tol_eff = tol.ode_rel_tol * std::pow(40.0 / ppw, 5.0);
    const double s = std::max(std::abs(w / dw), 1.0 / std::sqrt(airy2));
    const double h_acc = 1.0 * s * std::pow(tol_eff * s / range, 0.25);
    h = std::min(h, h_acc);
    // In the wave-limited tail the dominant step error is the two-point
    // Gauss quadrature of the decaying potential; its fourth derivative is
    // estimated from w' and the power-law length scale.
    const double w4 = std::abs(dw) * (spec.n + 1.0) * (spec.n + 2.0) *
                      (spec.n + 3.0) / (x * x * x);
    const double h_tail = std::pow(
        14.0 * std::sqrt(freq2) * tol_eff / (range * w4), 0.25);
    h = std::min(h, h_tail);
  }
  return h;
}

// Entire functions C(t) = cos(sqrt(-t)) / cosh(sqrt(t)) and
// S(t) = sin(sqrt(-t))/sqrt(-t) / sinh(sqrt(t))/sqrt(t), used to exponentiate
// the traceless step matrix.
void cs_pair(double t, double* c, double* s) {
  if (std::abs(t) < 1e-8) {
    *c = 1.0 + t / 2 + t * t / 24;
    *s = 1.0 + t / 6 + t * t / 120;
    return;
  }
  if (t > 0) {
    const double r = std::sqrt(t);
    *c = std::cosh(r);
    *s = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-t);
    *c = std::cos(r);
    *s = std::sin(r) / r;
  }
}

// One fourth-order Magnus step of u'' + w(x) u = 0 over [x, x+h]; exact for
// constant w, so the step error is driven purely by the variation of w.
void magnus_step(const PotentialSpec& spec, double eta_squared, double x,
                 double h, double* u, double* du) {
  constexpr double kGauss = 0.28867513459481288225;  // sqrt(3)/6
  const double w1 = local_w(spec, eta_squared, x + h * (0.5 - kGauss));
  const double w2 = local_w(spec, eta_squared, x + h * (0.5 + kGauss));
  const double wbar = 0.5 * (w1 + w2);
  const double a = std::sqrt(3.0) / 12.0 * h * h * (w2 - w1);
  const double b = h;
  const double c = -h * wbar;
  double cc, ss;
  cs_pair(a * a + b * c, &cc, &ss);
  const double m00 = cc + ss * a, m01 = ss * b;
  const double m10 = ss * c, m11 = cc - ss * a;
  const double nu = m00 * (*u) + m01 * (*du);
  const double ndu = m10 * (*u) + m11 * (*du);
  *u = nu;
  *du = ndu;
}

}  // namespace

BoundaryState interior_state(const Counterterm& ct, const EnergyPoint& ep) {
  double q2;
  if (ep.kind == EnergyPoint::Kind::Bound) {
    q2 = ct.lambda_s - ep.value * ep.value;
    if (!(q2 > 0))
      throw DomainError(
          "interior_state: bound state requires lambda_s > kappa^2");
  } else {
    q2 = ct.lambda_s + ep.value * ep.value;
    if (!(q2 > 0))
      throw DomainError("interior_state: free zero-energy interior is degenerate");
  }
  const double q = std::sqrt(q2);
  return {ct.R, std::sin(q * ct.R), q * std::cos(q * ct.R)};
}

PropagationResult propagate(const PotentialSpec& spec,
                            const BoundaryState& start, double eta_squared,
                            double x_end, const Tolerances& tol) {
  spec.validate();
  tol.validate();
  if (!(start.x > 0) || !(x_end > 0))
    throw DomainError("propagate: radii must be positive");
  if (start.u == 0 && start.du == 0)
    throw DomainError("propagate: (u, du) must not both vanish");

  const double dir = x_end >= start.x ? 1.0 : -1.0;
  const double range = std::max(std::abs(x_end - start.x), 1e-3);

  // Estimate the step count on a geometric partition of the range and refuse
  // clearly hopeless requests up front; the hard counter still backstops.
  {
    const double lo = std::min(start.x, x_end), hi = std::max(start.x, x_end);
    double est = 0;
    double a = lo;
    for (int i = 1; i <= 16 && est <= 2.0 * kMaxSteps; ++i) {
      const double b = lo * std::pow(hi / lo, i / 16.0);
      if (b <= a) continue;
      est += (b - a) / step_size(spec, eta_squared, a, tol, range, b - a);
      a = b;
    }
    if (est > 2.0 * kMaxSteps)
      throw ResolutionError(
          "propagate: step budget exceeded (range too aggressive)");
  }

  double x = start.x, u = start.u, du = start.du;
  long steps = 0;
  int crossings = 0;
  while (dir * (x_end - x) > 0) {
    double h = step_size(spec, eta_squared, x, tol, range, std::abs(x_end - x));
    if (dir < 0) h = std::min(h, 0.9 * x);  // never step across the origin
    const double u_before = u;
    magnus_step(spec, eta_squared, x, dir * h, &u, &du);
    x += dir * h;
    if (u_before * u < 0) ++crossings;
    if (++steps > kMaxSteps)
      throw ResolutionError(
          "propagate: step budget exceeded (range too aggressive)");
  }
  return {{x_end, u, du}, steps, crossings};
}

BoundaryState integrate_exterior(const PotentialSpec& spec,
                                 const BoundaryState& start,
                                 const EnergyPoint& ep, double x_end,
                                 const Tolerances& tol) {
  if (!(x_end > start.x))
    throw DomainError("integrate_exterior: x_end must exceed start.x");
  return propagate(spec, start, ep.eta_squared(), x_end, tol).end;
}

std::pair<double, double> extract_phase(const BoundaryState& state, double k) {
  const double raw = std::atan2(k * state.u, state.du) - k * state.x;
  return {wrap_principal(raw), wrap_two_pi(raw)};
}

PhasePoint phase_shift(const PotentialSpec& spec, const Counterterm& ct,
                       double k, const Tolerances& tol) {
  if (!(k > 0)) throw DomainError("phase_shift: k must be positive");
  const double r1 = std::max(
      20.0 * std::pow(spec.lambda_l / (k * k), 1.0 / spec.n), 40.0 / k);
  const double r2 = 1.25 * r1;

  const auto ep = EnergyPoint::scattering(k);
  BoundaryState s = interior_state(ct, ep);
  s = integrate_exterior(spec, s, ep, r1, tol);
  const auto [d1, d1_two_pi] = extract_phase(s, k);
  s = integrate_exterior(spec, s, ep, r2, tol);
  const auto [d2, d2_two_pi] = extract_phase(s, k);

  const double drift = std::abs(wrap_principal(d1 - d2));
  if (drift > tol.phase_tol)
    throw StabilityError("phase_shift: extraction radius instability", drift);
  return {k, d1, d1_two_pi, r1, drift, spec.n <= 3};
}

double scattering_length_numeric(const PotentialSpec& spec,
                                 const Counterterm& ct, const Tolerances& tol) {
  if (spec.n < 4)
    throw DomainError(
        "scattering_length_numeric: requires n >= 4 (shorter tails are "
        "infrared-sensitive)");
  const double scale_floor =
      std::max({std::sqrt(std::max(spec.lambda_l, 0.0)), ct.R, 1e-3});
  double x1 = std::max({50.0 * std::pow(spec.lambda_l, 1.0 / (spec.n - 2)),
                        50.0 * ct.R, 5.0});

  const auto ep = EnergyPoint::scattering(0.0);
  BoundaryState s = interior_state(ct, ep);
  s = integrate_exterior(spec, s, ep, x1, tol);
  BoundaryState s1 = s;
  s = integrate_exterior(spec, s, ep, 2 * x1, tol);

  auto intercept = [](const BoundaryState& p, const BoundaryState& q) {
    if (p.u == q.u)
      throw NumericalError("scattering_length_numeric: degenerate linear fit");
    return (p.u * q.x - q.u * p.x) / (p.u - q.u);
  };

  double a_prev = intercept(s1, s);
  for (int pass = 0; pass < 40; ++pass) {
    s1 = s;
    x1 *= 2;
    s = integrate_exterior(spec, s, ep, 2 * x1, tol);
    const double a = intercept(s1, s);
    if (std::abs(a - a_prev) <=
        1e-6 * std::max(std::abs(a), scale_floor))
      return a;
    a_prev = a;
  }
  throw ResolutionError(
      "scattering_length_numeric: intercept did not stabilize (scattering "
      "length may be infinite)");
}

namespace {

int interior_node_count(const Counterterm& ct, double kappa) {
  const double q = std::sqrt(ct.lambda_s - kappa * kappa);
  return static_cast<int>(std::floor(q * ct.R / kPi));
}

struct ShootProbe {
  double u_match;   // u at x_match; its sign is the growing-component sign
  double mismatch;  // u'/u + kappa at x_match
  int nodes;
};

// Outward shot to x_match = max(10/kappa, 5). Past the matching radius the
// eigenvalue condition is the vanishing of the growing component, so u_match
// changes sign exactly at eigenvalues; node crossings are only counted up to
// just past the classical turning point (the far tail carries no physical
// nodes, only the sign of the growing part).
ShootProbe shoot_outward(const PotentialSpec& spec, const Counterterm& ct,
                         double kappa, const Tolerances& tol) {
  const auto ep = EnergyPoint::bound(kappa);
  BoundaryState s = interior_state(ct, ep);
  const double x_match = std::max(10.0 / kappa, 5.0);
  const double x_turn =
      std::pow(spec.lambda_l / (kappa * kappa), 1.0 / spec.n);
  const double x_count =
      std::clamp(1.2 * x_turn, std::nextafter(ct.R, 2.0), x_match);
  auto osc = propagate(spec, s, ep.eta_squared(), x_count, tol);
  auto tail = propagate(spec, osc.end, ep.eta_squared(), x_match, tol);
  return {tail.end.u, tail.end.du / tail.end.u + kappa,
          interior_node_count(ct, kappa) + osc.sign_changes};
}

// Two-sided cross-check at a radius just past the turning point, where both
// directions of integration are stable.
bool inward_confirms(const PotentialSpec& spec, const Counterterm& ct,
                     double kappa, const Tolerances& tol) {
  const double x_match = std::max(10.0 / kappa, 5.0);
  const double x_turn =
      std::pow(spec.lambda_l / (kappa * kappa), 1.0 / spec.n);
  const double x_mid =
      std::clamp(1.15 * x_turn, 1.5 * ct.R, 0.8 * x_match);
  const auto ep = EnergyPoint::bound(kappa);
  auto out = propagate(spec, interior_state(ct, ep), ep.eta_squared(), x_mid,
                       tol);
  const double l_out = out.end.du / out.end.u;
  const double l_in =
      bound_state_inward_log_derivative(spec, kappa, x_match, x_mid, tol);
  const double scale = std::max({std::abs(l_out), std::abs(l_in), kappa});
  return std::abs(l_out - l_in) <= 1e-4 * scale;
}

}  // namespace

std::vector<BoundStateResult> bound_states_shooting(const PotentialSpec& spec,
                                                    const Counterterm& ct,
                                                    double kappa_min,
                                                    double kappa_max,
                                                    const Tolerances& tol) {
  if (!(kappa_min > 0) || !(kappa_max > kappa_min))
    throw DomainError("bound_states_shooting: need 0 < kappa_min < kappa_max");
  if (!(kappa_max * kappa_max < ct.lambda_s))
    throw DomainError("bound_states_shooting: kappa_max^2 must stay below lambda_s");

  // >= 20 grid points per expected adjacent-level ratio exp(-pi/nu).
  double log_ratio = kPi;  // generic fallback cycle length in log kappa
  if (spec.n == 2) log_ratio = kPi / nu_of(spec.lambda_l);
  const double span = std::log(kappa_max / kappa_min);
  const int points = std::max(24, static_cast<int>(std::ceil(span / log_ratio * 24)) + 1);
  if (points > 100000)
    throw ResolutionError("bound_states_shooting: kappa window too wide");

  const auto grid = log_spaced(kappa_min, kappa_max, points);
  std::vector<double> grow_sign(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    grow_sign[i] = shoot_outward(spec, ct, grid[i], tol).u_match;

  std::vector<BoundStateResult> states;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grow_sign[i] * grow_sign[i + 1] < 0)) continue;
    // Bisect on the sign of the growing component.
    double lo = grid[i], hi = grid[i + 1];
    double f_lo = grow_sign[i];
    for (int it = 0; it < 64 && (hi - lo) > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = shoot_outward(spec, ct, mid, tol).u_match;
      if (f_lo * f_mid <= 0)
        hi = mid;
      else
        lo = mid, f_lo = f_mid;
    }
    const double kappa = 0.5 * (lo + hi);
    if (!inward_confirms(spec, ct, kappa, tol)) continue;
    auto probe = shoot_outward(spec, ct, kappa, tol);
    states.push_back({probe.nodes, kappa, -kappa * kappa});
  }
  // Deepest state (largest kappa, fewest nodes) first.
  std::sort(states.begin(), states.end(),
            [](const BoundStateResult& a, const BoundStateResult& b) {
              return a.kappa > b.kappa;
            });
  return states;
}

double bound_state_inward_log_derivative(const PotentialSpec& spec,
                                         double kappa, double x_from,
                                         double x_to, const Tolerances& tol) {
  if (!(x_from > x_to))
    throw DomainError("bound_state_inward_log_derivative: x_from must exceed x_to");
  // Seed with the decaying tail; overall scale is irrelevant.
  BoundaryState seed{x_from, 1.0, -kappa};
  auto r = propagate(spec, seed, -kappa * kappa, x_to, tol);
  return r.end.du / r.end.u;
}

double wronskian(const BoundaryState& a, const BoundaryState& b) {
  if (std::abs(a.x - b.x) > 1e-12 * std::max(1.0, std::abs(a.x)))
    throw DomainError("wronskian: states must sit at the same radius");
  return a.u * b.du - a.du * b.u;
}

}  // namespace radial
}  // namespace singflow
