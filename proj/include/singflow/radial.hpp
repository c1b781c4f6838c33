#pragma once

#include <vector>

#include "singflow/model.hpp"

namespace singflow {
namespace radial {

// Wavefunction value and slope handed between solver stages; (u, du) != (0,0).
struct BoundaryState {
  double x;
  double u;
  double du;
};

struct PhasePoint {
  double k;
  double delta;            // reduced to (-pi/2, pi/2]
  double delta_unwrapped;  // mod-2pi representative; k-grid continuity is the
                           // caller's job
  double r_extract;
  double stability;        // extraction drift between the two radii used
  bool ir_sensitive;       // true for n <= 3 tails
};

struct BoundStateResult {
  int m;          // node count
  double kappa;   // decay constant
  double energy;  // -kappa^2, in units of 1/(2 M r0^2)
};

// Interior square-well solution u = sin(q x) evaluated at the cutoff;
// q^2 = lambda_s + eta^2 (scattering) or lambda_s - kappa^2 (bound).
BoundaryState interior_state(const Counterterm& ct, const EnergyPoint& ep);

// Propagates (u, u') through u'' + (eta^2 + lambda_l f(x)/x^n) u = 0 from
// start.x to x_end with a fixed-order symmetric stepper whose step obeys
// h <= local_wavelength / points_per_wavelength. Halving all steps (doubling
// points_per_wavelength) moves the endpoint by less than ode_rel_tol.
BoundaryState integrate_exterior(const PotentialSpec& spec,
                                 const BoundaryState& start,
                                 const EnergyPoint& ep, double x_end,
                                 const Tolerances& tol = {});

// As integrate_exterior but direction-agnostic and reporting the sign changes
// of u along the way.
struct PropagationResult {
  BoundaryState end;
  long steps;
  int sign_changes;
};
PropagationResult propagate(const PotentialSpec& spec,
                            const BoundaryState& start, double eta_squared,
                            double x_end, const Tolerances& tol = {});

// delta = atan2(k u, u') - k r at r = state.x, reduced to (-pi/2, pi/2]
// (first) and to (-pi, pi] (second).
std::pair<double, double> extract_phase(const BoundaryState& state, double k);

// Scattering phase shift at wavenumber k for the given regulated potential.
// Extraction radius max(20 (lambda_l/k^2)^(1/n), 40/k), with a second
// extraction at 1.25x the radius required to agree within phase_tol.
PhasePoint phase_shift(const PotentialSpec& spec, const Counterterm& ct,
                       double k, const Tolerances& tol = {});

// Zero-energy intercept: integrates u(x; 0) to two large radii, fits
// u = C (x - a), and enlarges the radii until doubling them moves a by less
// than 1e-6 relative. n >= 4 only.
double scattering_length_numeric(const PotentialSpec& spec,
                                 const Counterterm& ct,
                                 const Tolerances& tol = {});

// Shooting search for bound states with kappa in the given window: brackets
// sign changes of the mismatch M(kappa) = u'/u + kappa at
// x_match = max(10/kappa, 5) on a log grid with >= 20 points per expected
// level-ratio interval.
std::vector<BoundStateResult> bound_states_shooting(
    const PotentialSpec& spec, const Counterterm& ct, double kappa_min,
    double kappa_max, const Tolerances& tol = {});

// Log-derivative at x_to of the solution integrated inward from x_from seeded
// with the decaying exponential; cross-check for shooting roots.
double bound_state_inward_log_derivative(const PotentialSpec& spec,
                                         double kappa, double x_from,
                                         double x_to,
                                         const Tolerances& tol = {});

// u_a u'_b - u'_a u_b; both states must sit at the same radius.
double wronskian(const BoundaryState& a, const BoundaryState& b);

}  // namespace radial
}  // namespace singflow
