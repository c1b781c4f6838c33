#include <cmath>
#include <random>

#include "doctest.h"
#include "singflow/numeric.hpp"
#include "singflow/radial.hpp"
#include "singflow/rg_flow.hpp"
#include "singflow/specfun.hpp"
#include "singflow/zero_energy.hpp"

using namespace singflow;
using namespace singflow::zero_energy;

TEST_CASE("zero-energy wavefunction closed-form values") {
  auto n4 = PotentialSpec::make(4, 1.0);
  auto phi0 = ZeroEnergyPhase::make(4, 0.0);
  // cosine node at sqrt(lambda)/x = pi/2
  CHECK(std::abs(wavefunction(n4, phi0, 2.0 / kPi).u) < 1e-14);

  auto n2 = PotentialSpec::make(2, 1.25);
  auto p2 = ZeroEnergyPhase::make(2, 0.0);
  CHECK(wavefunction(n2, p2, 1.0).u == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(wavefunction(n4, phi0, 0.0), DomainError);
  auto n3 = PotentialSpec::make(3, 1.0);
  CHECK_THROWS_AS(wavefunction(n3, ZeroEnergyPhase::make(3, 0.1), 0.5),
                  DomainError);
}

TEST_CASE("bessel form coincides with the exact n = 4 solution") {
  auto spec = PotentialSpec::make(4, 1.7);
  // route the n = 4 case through the generic Bessel path by comparing with
  // the half-integer closed form by hand
  for (double phi : {-1.2, -0.3, 0.4, 1.1}) {
    auto phase = ZeroEnergyPhase::make(4, phi);
    for (double x : {0.05, 0.2, 1.0, 3.0}) {
      auto w = wavefunction(spec, phase, x);
      const double th = std::sqrt(1.7) / x + phi;
      CHECK(w.u == doctest::Approx(x * std::cos(th)).epsilon(1e-12));
    }
  }
}

TEST_CASE("n = 6 bessel solution satisfies the radial equation") {
  auto spec = PotentialSpec::make(6, 1.0);
  auto phase = ZeroEnergyPhase::make(6, -0.45);
  auto w0 = wavefunction(spec, phase, 0.01);
  radial::BoundaryState start{0.01, w0.u, w0.du};
  auto end = radial::integrate_exterior(spec, start,
                                        EnergyPoint::scattering(0.0), 0.05);
  auto w1 = wavefunction(spec, phase, 0.05);
  CHECK(end.u == doctest::Approx(w1.u).epsilon(1e-5));
  CHECK(end.du == doctest::Approx(w1.du).epsilon(1e-5));
}

TEST_CASE("derivative consistency on random samples") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> uphi(-1.5, 1.5), ul(0.4, 3.0),
      ux(0.02, 2.0);
  const int ns[] = {2, 4, 5, 6};
  for (int i = 0; i < 200; ++i) {
    const int n = ns[i % 4];
    const double lambda = n == 2 ? 0.3 + ul(rng) : ul(rng);
    auto spec = PotentialSpec::make(n, lambda);
    auto phase = ZeroEnergyPhase::make(n, uphi(rng));
    const double x = ux(rng);
    auto w = wavefunction(spec, phase, x);
    // five-point derivative of u, with the stencil tied to the local
    // oscillation scale
    const double wavenumber = std::sqrt(lambda * std::pow(x, -n));
    const double h = std::min(x * 1e-4, 1e-3 / wavenumber);
    auto u = [&](double t) { return wavefunction(spec, phase, t).u; };
    const double fd =
        (-u(x + 2 * h) + 8 * u(x + h) - 8 * u(x - h) + u(x - 2 * h)) /
        (12 * h);
    const double scale =
        std::max(std::abs(w.du), std::abs(w.u) / x);
    CHECK(std::abs(fd - w.du) < 1e-8 * scale);
  }
}

TEST_CASE("exact forms satisfy u'' + lambda u / x^n = 0") {
  for (int n : {2, 4}) {
    auto spec = PotentialSpec::make(n, n == 2 ? 1.25 : 1.0);
    auto phase = ZeroEnergyPhase::make(n, 0.37);
    for (double x : {0.1, 0.5, 2.0}) {
      auto du = [&](double t) { return wavefunction(spec, phase, t).du; };
      const double h = x * 1e-4;
      const double upp =
          (-du(x + 2 * h) + 8 * du(x + h) - 8 * du(x - h) + du(x - 2 * h)) /
          (12 * h);
      auto w = wavefunction(spec, phase, x);
      const double residual =
          upp + spec.lambda_l * w.u / std::pow(x, n);
      CHECK(std::abs(residual) <
            1e-8 * std::max(std::abs(w.u), x) / (x * x));
    }
  }
}

TEST_CASE("exterior log-derivative") {
  auto n2 = PotentialSpec::make(2, 1.25);
  auto p2 = ZeroEnergyPhase::make(2, 0.0);
  CHECK(exterior_log_derivative(n2, p2, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  auto n4 = PotentialSpec::make(4, 1.0);
  auto p4 = ZeroEnergyPhase::make(4, 0.0);
  const double big = 2000.0;
  CHECK(exterior_log_derivative(n4, p4, big) ==
        doctest::Approx(1.0 / big).epsilon(1e-5));

  // node: u = 0 at sqrt(lambda)/x = pi/2
  CHECK_THROWS_AS(exterior_log_derivative(n4, p4, 2.0 / kPi), PoleError);

  // canonical and closed forms agree for the exact cases
  for (double x : {0.11, 0.42, 1.3}) {
    const double a = exterior_log_derivative(n4, p4, x);
    const double b = exterior_log_derivative_closed_form(n4, p4, x);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
    const double c = exterior_log_derivative(n2, p2, x);
    const double d = exterior_log_derivative_closed_form(n2, p2, x);
    CHECK(c == doctest::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("log-derivative against the propagated solution") {
  // ODE oracle: start on the closed form at a small radius and carry the
  // log-derivative outward.
  auto spec = PotentialSpec::make(4, 1.0);
  auto phase = ZeroEnergyPhase::make(4, -101.298);
  auto w0 = wavefunction(spec, phase, 0.01);
  radial::BoundaryState s{0.01, w0.u, w0.du};
  auto end = radial::integrate_exterior(spec, s, EnergyPoint::scattering(0.0),
                                        0.04);
  CHECK(end.du / end.u ==
        doctest::Approx(exterior_log_derivative(spec, phase, 0.04))
            .epsilon(1e-8));
}

TEST_CASE("phase shifted by pi leaves observables unchanged") {
  auto spec = PotentialSpec::make(4, 2.0);
  for (double phi : {-0.9, 0.2, 1.4}) {
    auto a = ZeroEnergyPhase::make(4, phi);
    auto b = ZeroEnergyPhase::make(4, phi + kPi);
    CHECK(scattering_length_n4(2.0, a) ==
          doctest::Approx(scattering_length_n4(2.0, b)).epsilon(1e-12));
    CHECK(exterior_log_derivative(spec, a, 0.3) ==
          doctest::Approx(exterior_log_derivative(spec, b, 0.3))
              .epsilon(1e-12));
  }
}

TEST_CASE("scattering length for n = 4") {
  CHECK(scattering_length_n4(1.0, ZeroEnergyPhase::make(4, 0.0)) == 0.0);
  CHECK(scattering_length_n4(1.0, ZeroEnergyPhase::make(4, kPi / 4)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(
      scattering_length_n4(1.0, ZeroEnergyPhase::make(4, kPi / 2))));
  CHECK_THROWS_AS(scattering_length_n4(1.0, ZeroEnergyPhase::make(6, 0.1)),
                  DomainError);
}

TEST_CASE("small-x truncation of the asymptotic form scales as x^(n/2-1)") {
  // n = 6: |exact - asymptotic| / envelope ~ x^2
  auto spec = PotentialSpec::make(6, 1.0);
  auto phase = ZeroEnergyPhase::make(6, 0.6);
  auto asymptotic = [&](double x) {
    const double z = std::sqrt(1.0) / 2.0 * std::pow(x, -2.0);
    return std::pow(x, 1.5) * std::cos(z + phase.phi);
  };
  std::vector<double> lx, le;
  for (int w = 0; w < 4; ++w) {
    const double x_lo = 0.02 * std::pow(2.0, w);
    double worst = 0;
    for (double x : log_spaced(x_lo, 2 * x_lo, 40)) {
      const double diff = std::abs(wavefunction(spec, phase, x).u - asymptotic(x));
      worst = std::max(worst, diff / std::pow(x, 1.5));
    }
    lx.push_back(std::log(x_lo * 1.5));
    le.push_back(std::log(worst));
  }
  auto fit = fit_line(lx, le);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("spectrum tower and its inversions") {
  const double lambda = 1.25;  // nu = 1
  auto phase = ZeroEnergyPhase::make(2, 0.31);
  auto states = spectrum_n2(lambda, phase, 0, 4);
  REQUIRE(states.size() == 5);
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    CHECK(states[i + 1].kappa / states[i].kappa ==
          doctest::Approx(std::exp(-kPi)).epsilon(1e-12));
    CHECK(states[i + 1].energy / states[i].energy ==
          doctest::Approx(std::exp(-2 * kPi)).epsilon(1e-12));
  }
  // direct substitution identity for the top state
  const double gamma_term = specfun::im_log_gamma_one_plus_i(1.0);
  const double kappa0 = 2 * std::exp(phase.phi + gamma_term - kPi / 2);
  CHECK(states[0].kappa == doctest::Approx(kappa0).epsilon(1e-13));

  // bound-state-energy inversion round trip (mod pi)
  auto back = phase_from_observable(
      PotentialSpec::make(2, lambda),
      Observable::make_bound_state_energy(states[2].energy));
  CHECK(std::abs(wrap_principal(back.phi - phase.phi)) < 1e-12);
}

TEST_CASE("scattering-length inversion round trips") {
  // n = 4 closed form
  auto n4 = PotentialSpec::make(4, 1.0);
  for (double a : {-2.0, -0.5, 0.0, 0.8, 3.0}) {
    auto phase =
        phase_from_observable(n4, Observable::make_scattering_length(a));
    CHECK(scattering_length_n4(1.0, phase) ==
          doctest::Approx(a).epsilon(1e-12).scale(1e-12));
  }
  // n = 6: check against the large-x intercept of the wavefunction
  auto n6 = PotentialSpec::make(6, 1.0);
  for (double a : {-1.0, 0.4}) {
    auto phase =
        phase_from_observable(n6, Observable::make_scattering_length(a));
    const double x1 = 500.0, x2 = 1000.0;
    const double u1 = wavefunction(n6, phase, x1).u;
    const double u2 = wavefunction(n6, phase, x2).u;
    const double intercept = (u1 * x2 - u2 * x1) / (u1 - u2);
    CHECK(intercept == doctest::Approx(a).epsilon(1e-5).scale(1e-5));
  }
  auto n2 = PotentialSpec::make(2, 1.25);
  CHECK_THROWS_AS(
      phase_from_observable(n2, Observable::make_scattering_length(1.0)),
      DomainError);
}

TEST_CASE("phase-at-k inversion round trips") {
  auto spec = PotentialSpec::make(4, 1.0);
  const double phi_true = -0.3;
  auto phase = ZeroEnergyPhase::make(4, phi_true);
  auto ct = rg_flow::tune_counterterm(spec, phase, 0.01, 1);
  const double delta = radial::phase_shift(spec, ct, 0.2).delta;

  auto fitted = phase_from_observable(
      spec, Observable::make_phase_at_k(0.2, delta, 0.01, 1));
  CHECK(std::abs(wrap_principal(fitted.phi - phi_true)) < 1e-6);
}
