#pragma once

#include <complex>

#include "singflow/errors.hpp"

namespace singflow {
namespace specfun {

struct BesselEval {
  double order;
  double argument;
  double value;
  double derivative;  // d/dz J_order(z)
};

// Cylindrical Bessel function of the first kind for real order, |order| <= 5,
// z >= 0. Power series (extended precision accumulation) for z <= 20, Hankel
// large-argument expansion beyond. A negative non-integer order at z = 0
// diverges; the eval is returned with the correctly signed infinity.
BesselEval bessel_j(double order, double z);

// log Gamma(z), principal analytic branch, via a Lanczos approximation with
// a reflection step for Re z < 1/2.
std::complex<double> log_gamma(std::complex<double> z);

// Im log Gamma(1 + i nu) for nu >= 0.
double im_log_gamma_one_plus_i(double nu);

}  // namespace specfun
}  // namespace singflow
