#pragma once

#include "singflow/model.hpp"
#include "singflow/zero_energy.hpp"

namespace singflow {
namespace wkb {

// Semiclassical solution u = Q^(-1/4) cos(S), Q = eta^2 + lambda f(x)/x^n,
// S = integral of sqrt(Q) from the phase anchor x0. Valid where the local
// wavelength varies slowly: small x needs wkb_phase_scale >= 5, large x
// needs eta^3 >= 5 n lambda x^(-n-1)/2.
struct WkbSolution {
  PotentialSpec spec;
  double eta = 0.0;
  double x0 = 1.0;  // phase anchor (integration constant)

  static WkbSolution make(const PotentialSpec& spec, double eta, double x0);
};

// Indicator >= 1 means x is inside the validity region (5 x the raw
// criterion ratios folded in).
double validity_indicator(const WkbSolution& sol, double x);

// Amplitude, accumulated phase, and (u, u'); the phase integral is evaluated
// by adaptive quadrature to 1e-10.
zero_energy::WaveValue wavefunction(const WkbSolution& sol, double x);
double amplitude(const WkbSolution& sol, double x);
double phase_integral(const WkbSolution& sol, double x);

// Leading energy dependence of the short-distance wavefunction:
// A(x; eta)/A(0) = 1 - (eta^2/2) integral_0^x u(t;0)/u'(t;0) dt, with
// symmetric principal-value windows around the zeros of u'.
double energy_correction(const PotentialSpec& spec,
                         const zero_energy::ZeroEnergyPhase& phase, double x,
                         double eta, const Tolerances& tol = {});

// Cutoff-error functional for a pair of tuned regulators R' < R and the
// k^2 error law it predicts for phase-shift differences.
struct ErrorEstimate {
  double R;
  double Rprime;
  double E_value;     // boundary difference of the R^(n/2-1) u^3/u' estimate
  double E_envelope;  // |.| median-smoothed over one oscillation in log R
  double fit_constant = 1.0;  // O(1) factor fixed from the smallest-k datum

  double predicted_delta_error(double k) const {
    return fit_constant * k * k * E_envelope;
  }
};

ErrorEstimate error_functional(const PotentialSpec& spec,
                               const zero_energy::ZeroEnergyPhase& phase,
                               double R, double Rprime,
                               const Tolerances& tol = {});

}  // namespace wkb
}  // namespace singflow
