#pragma once

#include "singflow/model.hpp"
#include "singflow/zero_energy.hpp"

namespace singflow {
namespace perturbation {

// Weak-coupling expansion of the n = 4 scattering length around the bare
// square well, through first order in lambda_l:
//   a4/R = (1 - t) - (1/3)(1 + t + t^2) lambda_l/R^2 + O((lambda_l/R^2)^2),
//   t = tan(sqrt(lambda_s) R)/(sqrt(lambda_s) R).
struct WeakCouplingA4 {
  double a4;
  double expansion_parameter;    // lambda_l / R^2
  double relative_error_scale;   // (lambda_l / R^2)^2, first neglected order
};
WeakCouplingA4 a4_weak_coupling(const Counterterm& ct, double lambda_l);

// Born-type iteration of the n = 4 zero-energy tail equation with the
// asymptote pinned to u -> x - a4:
//   u_0 = x - a4,   u_{j+1}(x) = -int_x^inf (t - x) u_j(t)/t^4 dt,
// partial sums sum_{j<=order} lambda_l^j u_j. The infinite upper limit is
// mapped out exactly with s = 1/t.
class BornSeries {
 public:
  // a4 is held at its exact value so every order shares the asymptote.
  BornSeries(double lambda_l, double a4);

  double order_term(int order, double x) const;   // u_order(x)
  double partial_sum(int order, double x) const;  // sum_{j<=order} l^j u_j
 private:
  double lambda_l_;
  double a4_;
};

// Convenience wrapper matching the one-shot call shape.
double born_iterates(const zero_energy::ZeroEnergyPhase& phase,
                     double lambda_l, int order, double x);

}  // namespace perturbation
}  // namespace singflow
