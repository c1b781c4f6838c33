#include "singflow/perturbation.hpp"

#include <cmath>

#include "singflow/numeric.hpp"

namespace singflow {
namespace perturbation {

WeakCouplingA4 a4_weak_coupling(const Counterterm& ct, double lambda_l) {
  if (lambda_l < 0) throw DomainError("a4_weak_coupling: lambda_l >= 0");
  const double theta = ct.coupling_h();  // sqrt(lambda_s) R
  double t;
  if (theta < 1e-8) {
    t = 1.0 + theta * theta / 3.0;
  } else {
    if (std::abs(std::cos(theta)) < 1e-12)
      throw PoleError("a4_weak_coupling: square-well resonance (tan pole)",
                      theta);
    t = std::tan(theta) / theta;
  }
  const double eps = lambda_l / (ct.R * ct.R);
  const double a4 = ct.R * ((1.0 - t) - (1.0 + t + t * t) * eps / 3.0);
  return {a4, eps, eps * eps};
}

BornSeries::BornSeries(double lambda_l, double a4)
    : lambda_l_(lambda_l), a4_(a4) {
  if (lambda_l < 0) throw DomainError("BornSeries: lambda_l >= 0");
  if (!std::isfinite(a4)) throw DomainError("BornSeries: a4 must be finite");
}

double BornSeries::order_term(int order, double x) const {
  if (order < 0 || order > 2)
    throw DomainError("BornSeries: orders 0..2 supported");
  if (!(x > 0)) throw DomainError("BornSeries: x > 0 required");
  if (order == 0) return x - a4_;
  // u_{j+1}(x) = -int_x^inf (t - x) u_j(t)/t^4 dt; substituting t = 1/s maps
  // the tail onto the finite interval [0, 1/x] with a regular integrand:
  //   u_{j+1}(x) = -int_0^{1/x} (1/s - x) s^2 u_j(1/s) ds.
  auto iterate = [this, x](int j) {
    auto integrand = [this, j, x](double s) {
      // s -> 0 limit: u_0 contributes (1 - s x)(1 - s a4) -> 1; higher
      // iterates decay as s^(2j) -> 0.
      if (s == 0) return j == 0 ? 1.0 : 0.0;
      const double t = 1.0 / s;
      return (t - x) * s * s * order_term(j, t);
    };
    auto r = integrate_adaptive(integrand, 0.0, 1.0 / x, 1e-11, 1e-14);
    if (!(std::isfinite(r.value)))
      throw NumericalError("BornSeries: iterate quadrature diverged");
    return -r.value;
  };
  return iterate(order - 1);
}

double BornSeries::partial_sum(int order, double x) const {
  double sum = 0, coupling = 1;
  for (int j = 0; j <= order; ++j) {
    sum += coupling * order_term(j, x);
    coupling *= lambda_l_;
  }
  return sum;
}

double born_iterates(const zero_energy::ZeroEnergyPhase& phase,
                     double lambda_l, int order, double x) {
  if (phase.n != 4) throw DomainError("born_iterates: n = 4 only");
  const double a4 = zero_energy::scattering_length_n4(
      std::max(lambda_l, 1e-300), phase);
  BornSeries series(lambda_l, lambda_l > 0 ? a4 : 0.0);
  return series.partial_sum(order, x);
}

}  // namespace perturbation
}  // namespace singflow
