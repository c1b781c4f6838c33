#pragma once

#include <vector>

#include "singflow/model.hpp"
#include "singflow/radial.hpp"

namespace singflow {
namespace zero_energy {

// The short-distance phase of the zero-energy tail solution: the single
// physical parameter of the renormalized problem. Observables depend on it
// only through tan(phi) (equivalently phi mod pi), so both the principal
// value and an unreduced representative are kept.
struct ZeroEnergyPhase {
  enum class Convention { LogPeriodic, PowerLaw };  // n = 2 vs n >= 3 form
  int n;
  double phi;      // in (-pi/2, pi/2]
  double phi_raw;  // as supplied (branch-accumulated representatives allowed)
  Convention convention;

  static ZeroEnergyPhase make(int n, double phi_raw);
};

struct WaveValue {
  double u;
  double du;
};

// Zero-energy tail solution, normalized so the short-distance form is
// x^(n/4) cos(z(x) + phi) with z = sqrt(lambda) x^(1-n/2)/(n/2-1) for n >= 3
// and sqrt(x) cos(nu log x + phi) for n = 2. Exact closed forms for n = 2 and
// n = 4; a Bessel pair for n >= 5. n = 3 is rejected (the pair degenerates at
// integer order).
WaveValue wavefunction(const PotentialSpec& spec, const ZeroEnergyPhase& phase,
                       double x);

// u'/u of the zero-energy solution, from direct differentiation of
// `wavefunction` (canonical convention). Throws PoleError at nodes.
double exterior_log_derivative(const PotentialSpec& spec,
                               const ZeroEnergyPhase& phase, double x);

// The same log-derivative from the printed closed forms,
//   n = 2 : (1/x) (1/2 - nu tan(nu log x + phi))
//   n >= 3: n/(4x) + sqrt(lambda/x^n) tan(z(x) + phi),
// kept alongside for regression comparison. For n >= 5 this carries the
// O(x^(n/2-1)) short-distance truncation error.
double exterior_log_derivative_closed_form(const PotentialSpec& spec,
                                           const ZeroEnergyPhase& phase,
                                           double x);

// a4 = sqrt(lambda_l) tan(phi), in units of r0. Returns a signed infinity at
// the unnatural limit cos(phi) = 0.
double scattering_length_n4(double lambda_l, const ZeroEnergyPhase& phase);

// Geometric tower of n = 2 binding momenta,
// kappa_m = 2 exp((phi + Im log Gamma(1+i nu) - (m+1/2) pi)/nu), for
// m_first <= m <= m_last; energies are -kappa^2.
std::vector<radial::BoundStateResult> spectrum_n2(double lambda_l,
                                                  const ZeroEnergyPhase& phase,
                                                  int m_first, int m_last);

struct Observable {
  enum class Kind { ScatteringLength, PhaseAtK, BoundStateEnergy };
  Kind kind;
  double scattering_length = 0.0;
  double k_ref = 0.0;
  double delta_ref = 0.0;
  double energy = 0.0;   // bound-state energy, -kappa^2
  double anchor_R = 0.01;  // regulator used when fitting PhaseAtK
  int anchor_branch = -1;  // -1 = lowest feasible branch

  static Observable make_scattering_length(double a);
  static Observable make_phase_at_k(double k_ref, double delta_ref,
                                    double anchor_R = 0.01, int branch = -1);
  static Observable make_bound_state_energy(double energy);
};

// Inverts one low-energy observable for the phase. ScatteringLength requires
// n >= 4; BoundStateEnergy requires n = 2; PhaseAtK tunes a counterterm at
// the anchor cutoff and root-solves the measured phase shift over
// phi in (-pi/2, pi/2].
ZeroEnergyPhase phase_from_observable(const PotentialSpec& spec,
                                      const Observable& obs,
                                      const Tolerances& tol = {});

}  // namespace zero_energy
}  // namespace singflow
