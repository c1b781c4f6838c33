#include <cmath>

#include "doctest.h"
#include "singflow/numeric.hpp"
#include "singflow/radial.hpp"
#include "singflow/rg_flow.hpp"
#include "singflow/wkb.hpp"
#include "singflow/zero_energy.hpp"

using namespace singflow;
using zero_energy::ZeroEnergyPhase;

TEST_CASE("wkb phase integral matches the closed form") {
  auto spec = PotentialSpec::make(4, 1.7);
  auto sol = wkb::WkbSolution::make(spec, 0.0, 0.5);
  const double rl = std::sqrt(1.7);
  for (double x : {0.01, 0.05, 0.2}) {
    const double closed = rl * (1.0 / sol.x0 - 1.0 / x);
    CHECK(wkb::phase_integral(sol, x) ==
          doctest::Approx(closed).epsilon(1e-10));
  }
  // marginal case: running the quadrature with the shifted coupling
  // lambda -> lambda - 1/4 reproduces the log-periodic phase nu log x
  const double lambda_n2 = 2.25;
  const double nu = std::sqrt(lambda_n2 - 0.25);
  auto reduced = PotentialSpec::make(2, lambda_n2 - 0.25);
  auto sol_n2 = wkb::WkbSolution::make(reduced, 0.0, 1.0);
  for (double x : {0.2, 0.5, 2.0}) {
    CHECK(wkb::phase_integral(sol_n2, x) ==
          doctest::Approx(nu * std::log(x)).epsilon(1e-8).scale(1e-8));
  }
}

TEST_CASE("wkb equals the exact n = 4 zero-energy solution") {
  // For n = 4 at zero energy the amplitude is linear in x, so the
  // semiclassical form is exact up to normalization.
  const double lambda = 1.0, phi = -0.767;
  auto spec = PotentialSpec::make(4, lambda);
  const double x0 = -std::sqrt(lambda) / phi;  // anchors the cosine phase
  auto sol = wkb::WkbSolution::make(spec, 0.0, x0);
  auto phase = ZeroEnergyPhase::make(4, phi);
  for (double x : log_spaced(0.01, 0.09, 9)) {
    const double u_wkb =
        wkb::wavefunction(sol, x).u * std::pow(lambda, 0.25);
    const double u_exact = zero_energy::wavefunction(spec, phase, x).u;
    CHECK(u_wkb == doctest::Approx(u_exact).epsilon(1e-9).scale(x));
  }
}

TEST_CASE("wkb large-x behavior and ODE cross-check") {
  auto spec = PotentialSpec::make(4, 1.0);
  auto sol = wkb::WkbSolution::make(spec, 1.0, 10.0);
  // amplitude approaches the free plane-wave value eta^(-1/2)
  CHECK(wkb::amplitude(sol, 10.0) ==
        doctest::Approx(1.0).epsilon(0.01));

  auto w10 = wkb::wavefunction(sol, 10.0);
  radial::BoundaryState s{10.0, w10.u, w10.du};
  auto end = radial::integrate_exterior(spec, s, EnergyPoint::scattering(1.0),
                                        30.0);
  auto w30 = wkb::wavefunction(sol, 30.0);
  CHECK(end.u == doctest::Approx(w30.u).epsilon(1e-4).scale(1.0));
  CHECK(end.du == doctest::Approx(w30.du).epsilon(1e-4).scale(1.0));
}

TEST_CASE("wkb validity gate") {
  auto spec = PotentialSpec::make(4, 1.0);
  auto sol = wkb::WkbSolution::make(spec, 0.0, 0.5);
  CHECK_THROWS_AS(wkb::wavefunction(sol, 1.0), ValidityError);
  // indicator improves monotonically toward the origin for n > 2
  auto xs = log_spaced(1e-3, 0.5, 20);
  for (std::size_t i = 1; i < xs.size(); ++i)
    CHECK(wkb::validity_indicator(sol, xs[i - 1]) >
          wkb::validity_indicator(sol, xs[i]));
}

TEST_CASE("energy correction basics") {
  auto spec = PotentialSpec::make(4, 1.0);
  auto phase = ZeroEnergyPhase::make(4, -0.767);
  CHECK(wkb::energy_correction(spec, phase, 0.05, 0.0) == 1.0);
  const double a = wkb::energy_correction(spec, phase, 0.05, 0.1);
  CHECK(std::abs(a - 1.0) < 1e-4);
  CHECK_THROWS_AS(wkb::energy_correction(spec, phase, 0.9, 0.1),
                  ValidityError);
}

TEST_CASE("energy correction against two propagated solutions") {
  // The exact short-distance ratio u(x;eta)/u(x;0) stays within an
  // O(eta^2) sliver of unity, as does the semiclassical estimate. The two
  // routes differ at eta^2 x^3-level: the principal-value windows drop the
  // secular node-region content of the formal integral, which is fine at
  // the accuracy the correction itself carries.
  auto spec = PotentialSpec::make(4, 1.0);
  auto phase = ZeroEnergyPhase::make(4, -0.767);
  auto ct = rg_flow::tune_counterterm(spec, phase, 0.005, 1);
  const double x = 0.05;

  auto ode_ratio = [&](double eta) {
    const auto e0 = EnergyPoint::scattering(0.0);
    const auto e1 = EnergyPoint::scattering(eta);
    auto b0 = radial::integrate_exterior(spec, radial::interior_state(ct, e0),
                                         e0, x);
    auto b1 = radial::integrate_exterior(spec, radial::interior_state(ct, e1),
                                         e1, x);
    return b1.u / b0.u;
  };
  double prev_diff = 0;
  for (double eta : {0.1, 0.2, 0.4}) {
    const double raw = ode_ratio(eta);
    const double formula = wkb::energy_correction(spec, phase, x, eta);
    CHECK(std::abs(raw - 1.0) < 2e-4 * eta * eta / 0.01);
    const double diff = std::abs(raw - formula);
    CHECK(diff < 2e-4 * eta * eta);
    // quadratic-in-eta envelope of the route difference
    if (prev_diff > 0) {
      CHECK(diff / prev_diff > 4.0 / 1.5);
      CHECK(diff / prev_diff < 4.0 * 1.5);
    }
    prev_diff = diff;
  }
}

TEST_CASE("error functional") {
  auto spec = PotentialSpec::make(4, 1.0);
  auto phase = ZeroEnergyPhase::make(4, -0.767);

  auto same = wkb::error_functional(spec, phase, 0.08, 0.08);
  CHECK(same.E_value == 0.0);
  CHECK(same.E_envelope == 0.0);

  auto est = wkb::error_functional(spec, phase, 0.16, 0.08);
  CHECK(est.E_envelope > 0);
  CHECK(est.predicted_delta_error(0.1) ==
        doctest::Approx(0.01 * est.E_envelope));

  // envelope scaling ~ R^(3n/2 - 1) = R^5 over a decade
  std::vector<double> lr, le;
  for (double r : log_spaced(0.02, 0.2, 9)) {
    auto e = wkb::error_functional(spec, phase, r, r / 2);
    lr.push_back(std::log(r));
    le.push_back(std::log(e.E_envelope));
  }
  auto fit = fit_line(lr, le);
  CHECK(fit.slope == doctest::Approx(5.0).epsilon(0.1));

  CHECK_THROWS_AS(wkb::error_functional(spec, phase, 0.08, 0.16), DomainError);
}
