#include <cmath>
#include <vector>

#include "singflow/numeric.hpp"
#include "singflow/radial.hpp"
#include "singflow/rg_flow.hpp"
#include "singflow/zero_energy.hpp"

namespace singflow {
namespace zero_energy {

namespace {

// Lowest branch on which the matching condition has a root at the anchor.
int lowest_feasible_branch(const PotentialSpec& spec,
                           const ZeroEnergyPhase& phase, double R,
                           const Tolerances& tol) {
  for (int m = 0; m < 4; ++m) {
    try {
      rg_flow::tune_counterterm(spec, phase, R, m, tol);
      return m;
    } catch (const BranchInfeasibleError&) {
    }
  }
  throw ObservableInfeasibleError(
      "phase_from_observable: no feasible branch at the anchor cutoff");
}

double measured_delta(const PotentialSpec& spec, const Observable& obs,
                      double phi, const Tolerances& tol) {
  const auto phase = ZeroEnergyPhase::make(spec.n, phi);
  const int m = obs.anchor_branch >= 0
                    ? obs.anchor_branch
                    : lowest_feasible_branch(spec, phase, obs.anchor_R, tol);
  const auto ct = rg_flow::tune_counterterm(spec, phase, obs.anchor_R, m, tol);
  return radial::phase_shift(spec, ct, obs.k_ref, tol).delta;
}

}  // namespace

// Root-solve over phi in (-pi/2, pi/2]: tune the counterterm at the anchor
// cutoff for each trial phase and match the measured delta(k_ref) mod pi.
ZeroEnergyPhase phase_from_observable_anchor_fit(const PotentialSpec& spec,
                                                 const Observable& obs,
                                                 const Tolerances& tol) {
  if (spec.n < 4)
    throw DomainError(
        "phase_from_observable: the phase-shift anchor requires n >= 4 "
        "(shorter tails are infrared-sensitive)");
  if (!(obs.anchor_R > 0) || !(obs.anchor_R < 1))
    throw DomainError("phase_from_observable: anchor cutoff must be in (0,1)");

  const double target = wrap_principal(obs.delta_ref);
  auto residual = [&](double phi) {
    return wrap_principal(measured_delta(spec, obs, phi, tol) - target);
  };

  // The residual is pi-periodic in phi and continuous except for one wrap
  // seam where it jumps by ~pi. A sign change qualifies as a root bracket
  // only when both endpoints sit well away from the seam values +-pi/2.
  const int coarse = 25;
  const double cell = kPi / coarse;
  std::vector<double> phis(coarse), res(coarse);
  for (int i = 0; i < coarse; ++i) {
    phis[i] = -kPi / 2 + cell * (i + 0.5);
    res[i] = residual(phis[i]);
  }
  for (int i = 0; i < coarse; ++i) {
    const int j = (i + 1) % coarse;
    if (!(res[i] * res[j] < 0)) continue;
    if (std::abs(res[i]) > kPi / 3 || std::abs(res[j]) > kPi / 3) continue;
    const double a = phis[i], b = phis[i] + cell;  // periodic continuation
    auto root =
        find_root_bracketed(residual, a, b, res[i], res[j], 1e-11, 0.0, 120);
    return ZeroEnergyPhase::make(spec.n, wrap_principal(root.x));
  }
  throw ObservableInfeasibleError(
      "phase_from_observable: no phase reproduces the requested "
      "delta(k_ref) on the principal interval");
}

}  // namespace zero_energy
}  // namespace singflow
