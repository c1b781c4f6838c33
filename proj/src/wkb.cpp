#include "singflow/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "singflow/numeric.hpp"
#include "singflow/rg_flow.hpp"

namespace singflow {
namespace wkb {

using zero_energy::WaveValue;
using zero_energy::ZeroEnergyPhase;

WkbSolution WkbSolution::make(const PotentialSpec& spec, double eta,
                              double x0) {
  spec.validate();
  if (eta < 0) throw DomainError("WkbSolution: eta >= 0 required");
  if (!(x0 > 0)) throw DomainError("WkbSolution: x0 > 0 required");
  return {spec, eta, x0};
}

double validity_indicator(const WkbSolution& sol, double x) {
  if (!(x > 0)) throw DomainError("wkb::validity_indicator: x > 0 required");
  const auto& spec = sol.spec;
  if (spec.lambda_l * spec.profile(x) == 0) return 1e300;  // free wave
  const double small_x = wkb_phase_scale(spec, x) / 5.0;
  const double large_x = 2.0 * std::pow(sol.eta, 3) * std::pow(x, spec.n + 1) /
                         (5.0 * spec.n * spec.lambda_l);
  return std::max(small_x, large_x);
}

namespace {

double local_q(const WkbSolution& sol, double x) {
  return sol.eta * sol.eta +
         sol.spec.lambda_l * sol.spec.profile(x) / std::pow(x, sol.spec.n);
}

double local_q_derivative(const WkbSolution& sol, double x) {
  const double xn = std::pow(x, sol.spec.n);
  return sol.spec.lambda_l * (sol.spec.profile.derivative(x) / xn -
                              sol.spec.n * sol.spec.profile(x) / (xn * x));
}

}  // namespace

double amplitude(const WkbSolution& sol, double x) {
  return std::pow(local_q(sol, x), -0.25);
}

double phase_integral(const WkbSolution& sol, double x) {
  auto r = integrate_adaptive(
      [&](double t) { return std::sqrt(local_q(sol, t)); }, sol.x0, x, 1e-10,
      1e-14);
  return r.value;
}

WaveValue wavefunction(const WkbSolution& sol, double x) {
  const double indicator = validity_indicator(sol, x);
  if (indicator < 1.0)
    throw ValidityError("wkb::wavefunction: outside the validity region",
                        indicator);
  const double q = local_q(sol, x);
  const double dq = local_q_derivative(sol, x);
  const double s = phase_integral(sol, x);
  const double u = std::pow(q, -0.25) * std::cos(s);
  const double du = -0.25 * dq / q * u - std::pow(q, 0.25) * std::sin(s);
  return {u, du};
}

double energy_correction(const PotentialSpec& spec,
                         const ZeroEnergyPhase& phase, double x, double eta,
                         const Tolerances& tol) {
  if (!(x > 0)) throw DomainError("wkb::energy_correction: x > 0 required");
  // Intermediate-region condition |d log u / dx| >> 1 (envelope form).
  const double envelope =
      std::sqrt((spec.n == 2 ? spec.lambda_l - 0.25 : spec.lambda_l) /
                std::pow(x, spec.n));
  if (envelope < 5.0)
    throw ValidityError(
        "wkb::energy_correction: outside the intermediate region",
        envelope / 5.0);
  if (eta == 0) return 1.0;

  // Locate the zeros of u' in (x0_floor, x); the integrand u/u' has simple
  // poles there which drop out of symmetric principal-value windows.
  const double x_floor = x * 1e-3;
  auto du_of = [&](double t) {
    return zero_energy::wavefunction(spec, phase, t).du;
  };
  std::vector<double> poles;
  {
    // >= 12 probes per local half-oscillation, geometric placement
    double t = x_floor;
    double prev = du_of(t);
    while (t < x) {
      const double wavelength =
          2 * kPi / std::sqrt(local_q({spec, 0.0, 1.0}, t));
      double t2 = std::min(x, t + wavelength / 24.0);
      if (t2 <= t) t2 = std::nextafter(t, 2 * x);
      const double cur = du_of(t2);
      if (prev * cur < 0) {
        double lo = t, hi = t2, flo = prev;
        for (int it = 0; it < 80 && (hi - lo) > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = du_of(mid);
          if (flo * fm <= 0)
            hi = mid;
          else
            lo = mid, flo = fm;
        }
        poles.push_back(0.5 * (lo + hi));
      }
      t = t2;
      prev = cur;
    }
  }

  auto integrand = [&](double t) {
    const auto w = zero_energy::wavefunction(spec, phase, t);
    return w.u / w.du;
  };
  double integral = 0;
  double lo = x_floor;
  auto add_segment = [&](double a, double b) {
    if (b <= a) return;
    integral += integrate_adaptive(integrand, a, b, 1e-10, 1e-15).value;
  };
  for (double p : poles) {
    const double wavelength =
        2 * kPi / std::sqrt(local_q({spec, 0.0, 1.0}, p));
    const double half_width = 1e-4 * wavelength;
    add_segment(lo, p - half_width);
    lo = p + half_width;  // symmetric window: principal value drops out
  }
  add_segment(lo, x);
  (void)tol;
  return 1.0 - 0.5 * eta * eta * integral;
}

namespace {

// Parametric boundary estimate R^(n/2-1) u(R)^3 / u'(R) of the residual
// cutoff error carried by a tuned regulator at R.
double boundary_error_term(const PotentialSpec& spec,
                           const ZeroEnergyPhase& phase, double R) {
  const auto w = zero_energy::wavefunction(spec, phase, R);
  return std::pow(R, spec.n / 2.0 - 1.0) * w.u * w.u * w.u / w.du;
}

double oscillation_period_log_r(const PotentialSpec& spec, double R) {
  if (spec.n == 2) return kPi / nu_of(spec.lambda_l);
  const double z = std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0) *
                   std::pow(R, 1.0 - spec.n / 2.0);
  return kPi / ((spec.n / 2.0 - 1.0) * z);
}

}  // namespace

ErrorEstimate error_functional(const PotentialSpec& spec,
                               const ZeroEnergyPhase& phase, double R,
                               double Rprime, const Tolerances& tol) {
  if (!(Rprime > 0) || !(Rprime <= R) || !(R < 1))
    throw DomainError("wkb::error_functional: need 0 < R' <= R < 1");

  // Precondition: both cutoffs must actually sit on the tuned flow (the
  // matching equation has a root; the shared exterior then makes the
  // zero-energy Wronskian vanish by construction).
  for (double r : {R, Rprime}) {
    bool tuned = false;
    for (int m = 0; m < 3 && !tuned; ++m) {
      try {
        rg_flow::tune_counterterm(spec, phase, r, m, tol);
        tuned = true;
      } catch (const BranchInfeasibleError&) {
      }
    }
    if (!tuned)
      throw NumericalError(
          "wkb::error_functional: cutoff cannot be tuned to the phase");
  }

  ErrorEstimate est;
  est.R = R;
  est.Rprime = Rprime;
  if (R == Rprime) {
    est.E_value = 0.0;
    est.E_envelope = 0.0;
    return est;
  }
  est.E_value =
      boundary_error_term(spec, phase, R) - boundary_error_term(spec, phase, Rprime);

  // Median of |F(R e^s) - F(R' e^s)| over one oscillation period in log R.
  const double period = oscillation_period_log_r(spec, R);
  std::vector<double> samples;
  const int count = 33;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double s = period * (i / (count - 1.0) - 0.5);
    const double scale = std::exp(s);
    samples.push_back(std::abs(
        boundary_error_term(spec, phase, R * scale) -
        boundary_error_term(spec, phase, Rprime * scale)));
  }
  std::nth_element(samples.begin(), samples.begin() + count / 2,
                   samples.end());
  est.E_envelope = samples[static_cast<std::size_t>(count / 2)];
  return est;
}

}  // namespace wkb
}  // namespace singflow
