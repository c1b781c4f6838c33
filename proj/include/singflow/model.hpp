#pragma once

#include <utility>
#include <vector>

#include "singflow/errors.hpp"

namespace singflow {

// Long-range shape function f(x) multiplying the 1/x^n tail. Regular at the
// origin with f(0) = 1.
class Profile {
 public:
  enum class Kind { Unity, Tabulated };

  Profile() = default;
  static Profile unity() { return Profile{}; }
  // Samples must be strictly increasing in x, start at x = 0 with f = 1
  // (within 1e-12), and contain at least 4 points.
  static Profile tabulated(std::vector<double> xs, std::vector<double> fs);

  Kind kind() const { return kind_; }
  double value(double x) const;
  double derivative(double x) const;
  double operator()(double x) const { return value(x); }

 private:
  Kind kind_ = Kind::Unity;
  std::vector<double> xs_, fs_;
};

// The dimensionless problem: an attractive -lambda_l f(x)/x^n tail outside a
// square-well regulator. r0 is the physical curvature scale, used only for
// unit conversion at the I/O boundary.
struct PotentialSpec {
  int n = 4;
  double lambda_l = 1.0;
  Profile profile = Profile::unity();
  double r0 = 1.0;

  // Validates: n >= 2; lambda_l > 1/4 for n = 2 (only the strongly attractive
  // marginal case is supported); lambda_l >= 0 for n >= 3 (0 = pure well).
  static PotentialSpec make(int n, double lambda_l,
                            Profile profile = Profile::unity(),
                            double r0 = 1.0);
  void validate() const;
};

// Square-well counterterm: depth lambda_s inside x < R. branch is the integer
// m with sqrt(lambda_s)*R in [m pi, (m+1) pi).
struct Counterterm {
  double R = 0.1;
  double lambda_s = 0.0;
  int branch = 0;

  double coupling_h() const;  // running coupling sqrt(lambda_s) * R
  static Counterterm make(double R, double lambda_s);
  void validate() const;
};

// One energy: eta = k r0 for scattering, eta = i kappa for bound states.
struct EnergyPoint {
  enum class Kind { Scattering, Bound };
  Kind kind = Kind::Scattering;
  double value = 0.0;  // eta (>= 0) or kappa (> 0)

  static EnergyPoint scattering(double eta);
  static EnergyPoint bound(double kappa);
  double eta_squared() const {
    return kind == Kind::Scattering ? value * value : -value * value;
  }
};

// E = eta^2 / (2 M r0^2) and its inverse on the scattering side.
double energy_of(const EnergyPoint& ep, double mass, double r0);
EnergyPoint scattering_point_of_energy(double energy, double mass, double r0);

struct Tolerances {
  double ode_rel_tol = 1e-10;
  double root_tol = 1e-12;
  double phase_tol = 1e-6;
  int points_per_wavelength = 40;

  void validate() const;
};

struct DimensionlessPoint {
  double x;
  double eta;
};

// (r, k) in physical units -> (x, eta) = (r/r0, k r0).
DimensionlessPoint to_dimensionless(double r, double k,
                                    const PotentialSpec& spec);
// Inverse: (x, eta) -> (r, k).
std::pair<double, double> from_dimensionless(double x, double eta,
                                             const PotentialSpec& spec);

// nu = sqrt(lambda_l - 1/4) for the n = 2 tail; requires lambda_l > 1/4.
double nu_of(double lambda_l);

// Semiclassical quality ratio (2/n) sqrt(lambda f(x)) / x^(n/2-1); values well
// above 1 mean the short-distance wavefunction is in the WKB regime. For n = 2
// the marginal-case coupling shift lambda -> lambda - 1/4 is applied, making
// the ratio the x-independent constant nu.
double wkb_phase_scale(const PotentialSpec& spec, double x);

}  // namespace singflow
