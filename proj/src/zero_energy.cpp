#include "singflow/zero_energy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "singflow/numeric.hpp"
#include "singflow/specfun.hpp"

namespace singflow {
namespace zero_energy {

namespace {

void require_tail(const PotentialSpec& spec, const char* who) {
  if (!(spec.lambda_l > 0))
    throw DomainError(std::string(who) + ": requires a nonvanishing tail");
  if (spec.profile.kind() != Profile::Kind::Unity)
    throw DomainError(std::string(who) +
                      ": closed forms hold for the unity profile only");
  if (spec.n == 3)
    throw DomainError(std::string(who) +
                      ": n = 3 pair degenerates (integer Bessel order); use "
                      "the radial solver");
}

double phase_argument(const PotentialSpec& spec, double x) {
  if (spec.n == 2) return nu_of(spec.lambda_l) * std::log(x);
  return std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0) *
         std::pow(x, 1.0 - spec.n / 2.0);
}

// Coefficient pair of the Bessel representation
//   u = amp sqrt(x) [A J_a(z) + B J_{-a}(z)],  a = 1/(n-2),
// reconstructed from the short-distance phase and normalized so the
// small-x form is exactly x^(n/4) cos(z + phi).
struct BesselCoefficients {
  double a;    // order
  double A, B;
  double amp;
};

BesselCoefficients bessel_coefficients(const PotentialSpec& spec, double phi) {
  const double a = 1.0 / (spec.n - 2);
  const double c = std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0);
  const double psi = phi + a * kPi / 2 + kPi / 4;
  double A = std::cos(psi) - std::sin(psi) / std::tan(a * kPi);
  double B = std::sin(psi) / std::sin(a * kPi);
  const double norm = std::hypot(A, B);
  A /= norm;
  B /= norm;
  // |A + B exp(i a pi)| after normalization
  const double rho = std::hypot(A + B * std::cos(a * kPi), B * std::sin(a * kPi));
  return {a, A, B, std::sqrt(kPi * c / 2) / rho};
}

}  // namespace

ZeroEnergyPhase ZeroEnergyPhase::make(int n, double phi_raw) {
  if (n < 2) throw DomainError("ZeroEnergyPhase: n >= 2 required");
  return {n, wrap_principal(phi_raw), phi_raw,
          n == 2 ? Convention::LogPeriodic : Convention::PowerLaw};
}

WaveValue wavefunction(const PotentialSpec& spec, const ZeroEnergyPhase& phase,
                       double x) {
  require_tail(spec, "zero_energy::wavefunction");
  if (phase.n != spec.n)
    throw DomainError("zero_energy::wavefunction: phase/spec n mismatch");
  if (!(x > 0)) throw DomainError("zero_energy::wavefunction: x > 0 required");

  const double phi = phase.phi;
  if (spec.n == 2) {
    const double nu = nu_of(spec.lambda_l);
    const double th = nu * std::log(x) + phi;
    const double root = std::sqrt(x);
    return {root * std::cos(th),
            (0.5 * std::cos(th) - nu * std::sin(th)) / root};
  }
  if (spec.n == 4) {
    const double rl = std::sqrt(spec.lambda_l);
    const double th = rl / x + phi;
    return {x * std::cos(th), std::cos(th) + (rl / x) * std::sin(th)};
  }
  const auto bc = bessel_coefficients(spec, phi);
  const double z = phase_argument(spec, x);
  const double dz = -std::sqrt(spec.lambda_l) * std::pow(x, -spec.n / 2.0);
  const auto jp = specfun::bessel_j(bc.a, z);
  const auto jm = specfun::bessel_j(-bc.a, z);
  const double combo = bc.A * jp.value + bc.B * jm.value;
  const double dcombo = bc.A * jp.derivative + bc.B * jm.derivative;
  const double root = std::sqrt(x);
  return {bc.amp * root * combo,
          bc.amp * (0.5 * combo / root + root * dcombo * dz)};
}

double exterior_log_derivative(const PotentialSpec& spec,
                               const ZeroEnergyPhase& phase, double x) {
  const auto w = wavefunction(spec, phase, x);
  if (std::abs(w.u) < 1e-13 * std::abs(w.du) * x)
    throw PoleError("zero_energy::exterior_log_derivative: node at x", x);
  return w.du / w.u;
}

double exterior_log_derivative_closed_form(const PotentialSpec& spec,
                                           const ZeroEnergyPhase& phase,
                                           double x) {
  require_tail(spec, "zero_energy::exterior_log_derivative_closed_form");
  if (!(x > 0)) throw DomainError("x > 0 required");
  if (spec.n == 2) {
    const double nu = nu_of(spec.lambda_l);
    return (0.5 - nu * std::tan(nu * std::log(x) + phase.phi)) / x;
  }
  const double z = phase_argument(spec, x);
  return spec.n / (4 * x) +
         std::sqrt(spec.lambda_l / std::pow(x, spec.n)) *
             std::tan(z + phase.phi);
}

double scattering_length_n4(double lambda_l, const ZeroEnergyPhase& phase) {
  if (phase.n != 4) throw DomainError("scattering_length_n4: n = 4 only");
  if (!(lambda_l > 0)) throw DomainError("scattering_length_n4: lambda_l > 0");
  const double s = std::sin(phase.phi), c = std::cos(phase.phi);
  if (std::abs(c) <= 1e-15)
    return s > 0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  return std::sqrt(lambda_l) * s / c;
}

std::vector<radial::BoundStateResult> spectrum_n2(double lambda_l,
                                                  const ZeroEnergyPhase& phase,
                                                  int m_first, int m_last) {
  if (phase.n != 2) throw DomainError("spectrum_n2: n = 2 only");
  if (m_last < m_first) throw DomainError("spectrum_n2: empty index range");
  const double nu = nu_of(lambda_l);
  const double gamma_term = specfun::im_log_gamma_one_plus_i(nu);
  std::vector<radial::BoundStateResult> out;
  out.reserve(static_cast<std::size_t>(m_last - m_first + 1));
  for (int m = m_first; m <= m_last; ++m) {
    const double kappa =
        2.0 * std::exp((phase.phi + gamma_term - (m + 0.5) * kPi) / nu);
    out.push_back({m, kappa, -kappa * kappa});
  }
  return out;
}

Observable Observable::make_scattering_length(double a) {
  Observable o;
  o.kind = Kind::ScatteringLength;
  o.scattering_length = a;
  return o;
}

Observable Observable::make_phase_at_k(double k_ref, double delta_ref,
                                       double anchor_R, int branch) {
  if (!(k_ref > 0)) throw DomainError("Observable: k_ref must be positive");
  Observable o;
  o.kind = Kind::PhaseAtK;
  o.k_ref = k_ref;
  o.delta_ref = delta_ref;
  o.anchor_R = anchor_R;
  o.anchor_branch = branch;
  return o;
}

Observable Observable::make_bound_state_energy(double energy) {
  if (!(energy < 0)) throw DomainError("Observable: bound energy must be < 0");
  Observable o;
  o.kind = Kind::BoundStateEnergy;
  o.energy = energy;
  return o;
}

namespace {

// Scattering length of the tail solution for general n >= 4 from the
// small-argument Bessel limit: u -> Bt x + At at large x with
//   At = A (c/2)^a / Gamma(1+a),  Bt = B (c/2)^(-a) / Gamma(1-a),
// giving a = -At/Bt = -K (A/B), K = (c/2)^(2a) Gamma(1-a)/Gamma(1+a).
// Reduces to sqrt(lambda) tan(phi) at n = 4.
double intercept_factor(const PotentialSpec& spec) {
  const double a = 1.0 / (spec.n - 2);
  const double c = std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0);
  return std::pow(c / 2, 2 * a) * std::tgamma(1 - a) / std::tgamma(1 + a);
}

ZeroEnergyPhase phase_from_scattering_length(const PotentialSpec& spec,
                                             double a_target) {
  if (spec.n < 4)
    throw DomainError(
        "phase_from_observable: scattering lengths are defined for n >= 4 "
        "only");
  require_tail(spec, "phase_from_observable");
  if (spec.n == 4)
    return ZeroEnergyPhase::make(
        4, std::atan(a_target / std::sqrt(spec.lambda_l)));
  const double a_ord = 1.0 / (spec.n - 2);
  const double ratio = -a_target / intercept_factor(spec);  // A/B
  // phi = -a pi/2 - pi/4 + arg(A + B exp(i a pi)) with B = 1, A = ratio
  const double phi_raw =
      -a_ord * kPi / 2 - kPi / 4 +
      std::atan2(std::sin(a_ord * kPi), ratio + std::cos(a_ord * kPi));
  return ZeroEnergyPhase::make(spec.n, phi_raw);
}

ZeroEnergyPhase phase_from_bound_state(const PotentialSpec& spec,
                                       double energy) {
  if (spec.n != 2)
    throw DomainError(
        "phase_from_observable: bound-state inversion is the n = 2 spectrum "
        "formula");
  const double nu = nu_of(spec.lambda_l);
  const double kappa = std::sqrt(-energy);
  const double phi_raw = nu * std::log(kappa / 2) -
                         specfun::im_log_gamma_one_plus_i(nu) + kPi / 2;
  return ZeroEnergyPhase::make(2, phi_raw);
}

}  // namespace

// PhaseAtK lives in phase_fit.cpp (it drives the counterterm tuner and the
// radial solver); the closed-form inversions are dispatched here.
ZeroEnergyPhase phase_from_observable_anchor_fit(const PotentialSpec& spec,
                                                 const Observable& obs,
                                                 const Tolerances& tol);

ZeroEnergyPhase phase_from_observable(const PotentialSpec& spec,
                                      const Observable& obs,
                                      const Tolerances& tol) {
  switch (obs.kind) {
    case Observable::Kind::ScatteringLength:
      return phase_from_scattering_length(spec, obs.scattering_length);
    case Observable::Kind::BoundStateEnergy:
      return phase_from_bound_state(spec, obs.energy);
    case Observable::Kind::PhaseAtK:
      return phase_from_observable_anchor_fit(spec, obs, tol);
  }
  throw DomainError("phase_from_observable: unknown observable kind");
}

}  // namespace zero_energy
}  // namespace singflow
