#include "singflow/specfun.hpp"

#include <cmath>
#include <limits>

#include "singflow/numeric.hpp"

namespace singflow {
namespace specfun {

namespace {

constexpr double kSeriesAsymptoticSwitch = 20.0;
constexpr double kMaxOrder = 5.0;

bool is_integer(double a) { return a == std::floor(a); }

// Ascending series J_a(z) = (z/2)^a sum_m (-1)^m (z^2/4)^m / (m! Gamma(m+a+1)),
// accumulated in long double; the derivative series shares the terms:
// z J'_a(z) = sum_m t_m (2m + a).
void series_jv(double a, double z, double* value, double* derivative) {
  const long double quarter_z2 = static_cast<long double>(z) * z / 4.0L;
  long double t = powl(static_cast<long double>(z) / 2.0L,
                       static_cast<long double>(a)) /
                  tgammal(1.0L + static_cast<long double>(a));
  long double sum = t;
  long double dsum = t * static_cast<long double>(a);
  for (int m = 0; m < 400; ++m) {
    t *= -quarter_z2 / ((m + 1.0L) * (m + 1.0L + static_cast<long double>(a)));
    sum += t;
    dsum += t * (2.0L * (m + 1) + static_cast<long double>(a));
    if (fabsl(t) < 1e-24L * (fabsl(sum) + 1e-300L) && m > 3) break;
  }
  *value = static_cast<double>(sum);
  *derivative = static_cast<double>(dsum / static_cast<long double>(z));
}

// P and Q sums of the Hankel expansion; terms are added while they keep
// shrinking (the series is asymptotic).
void hankel_pq(double mu, double z, double* p_out, double* q_out) {
  double p = 1, q = 0;
  double term = 1;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 60; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * z);
    const double mag = std::abs(term);
    if (mag >= prev) break;
    const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
    if (k % 2 == 1)
      q += signed_term;
    else
      p += signed_term;
    if (mag < 1e-19) break;
    prev = mag;
  }
  *p_out = p;
  *q_out = q;
}

// Hankel expansion for z >> 1:
//   J_a(z) = sqrt(2/(pi z)) [P cos(w) - Q sin(w)],  w = z - a pi/2 - pi/4.
void asymptotic_jv(double a, double z, double* value, double* derivative) {
  const double amp = std::sqrt(2.0 / (kPi * z));
  double p, q;
  hankel_pq(4.0 * a * a, z, &p, &q);
  const double w = z - a * kPi / 2 - kPi / 4;
  *value = amp * (p * std::cos(w) - q * std::sin(w));
  // J'_a = J_{a-1} - (a/z) J_a
  double p1, q1;
  hankel_pq(4.0 * (a - 1) * (a - 1), z, &p1, &q1);
  const double w1 = z - (a - 1) * kPi / 2 - kPi / 4;
  const double jm1 = amp * (p1 * std::cos(w1) - q1 * std::sin(w1));
  *derivative = jm1 - (a / z) * (*value);
}

BesselEval at_origin(double a) {
  BesselEval e{a, 0.0, 0.0, 0.0};
  if (a == 0) {
    e.value = 1.0;
    e.derivative = 0.0;  // J0' = -J1
  } else if (a > 0) {
    e.value = 0.0;
    e.derivative = a < 1   ? std::numeric_limits<double>::infinity()
                   : a == 1 ? 0.5
                            : 0.0;
  } else {
    // J_a ~ (z/2)^a / Gamma(1+a) diverges; tag with the signed infinity.
    const double g = std::tgamma(1.0 + a);
    const double s = g > 0 ? 1.0 : -1.0;
    e.value = s * std::numeric_limits<double>::infinity();
    e.derivative = -s * std::numeric_limits<double>::infinity();
  }
  return e;
}

}  // namespace

BesselEval bessel_j(double a, double z) {
  if (std::abs(a) > kMaxOrder)
    throw DomainError("bessel_j: |order| <= 5 supported");
  if (z < 0) throw DomainError("bessel_j: argument must be >= 0");

  // Negative integer orders reduce to positive ones.
  if (a < 0 && is_integer(a)) {
    BesselEval e = bessel_j(-a, z);
    const double sign = (static_cast<long>(-a) % 2 == 0) ? 1.0 : -1.0;
    return {a, z, sign * e.value, sign * e.derivative};
  }
  if (z == 0) return at_origin(a);

  BesselEval e{a, z, 0.0, 0.0};
  if (z <= kSeriesAsymptoticSwitch)
    series_jv(a, z, &e.value, &e.derivative);
  else
    asymptotic_jv(a, z, &e.value, &e.derivative);
  return e;
}

std::complex<double> log_gamma(std::complex<double> z) {
  // Lanczos, g = 7, 9 terms.
  static const double c[9] = {0.99999999999980993,
                              676.5203681218851,
                              -1259.1392167224028,
                              771.32342877765313,
                              -176.61502916214059,
                              12.507343278686905,
                              -0.13857109526572012,
                              9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection; principal branch of the logs.
    const std::complex<double> pi_z = kPi * z;
    return std::log(kPi) - std::log(std::sin(pi_z)) - log_gamma(1.0 - z);
  }
  const std::complex<double> zm = z - 1.0;
  std::complex<double> x = c[0];
  for (int k = 1; k < 9; ++k) x += c[k] / (zm + static_cast<double>(k));
  const std::complex<double> t = zm + 7.5;
  return 0.5 * std::log(2 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

double im_log_gamma_one_plus_i(double nu) {
  if (nu < 0) throw DomainError("im_log_gamma_one_plus_i: nu >= 0 required");
  if (nu == 0) return 0.0;
  return log_gamma(std::complex<double>(1.0, nu)).imag();
}

}  // namespace specfun
}  // namespace singflow
