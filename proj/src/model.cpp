#include "singflow/model.hpp"

#include <algorithm>
#include <cmath>

#include "singflow/numeric.hpp"

namespace singflow {

Profile Profile::tabulated(std::vector<double> xs, std::vector<double> fs) {
  if (xs.size() != fs.size() || xs.size() < 4)
    throw DomainError("Profile: tabulated profile needs >= 4 (x, f) samples");
  if (!std::is_sorted(xs.begin(), xs.end()) ||
      std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw DomainError("Profile: sample abscissae must be strictly increasing");
  if (std::abs(xs.front()) > 1e-12 || std::abs(fs.front() - 1.0) > 1e-12)
    throw DomainError("Profile: tabulated profile must start at f(0) = 1");
  Profile p;
  p.kind_ = Kind::Tabulated;
  p.xs_ = std::move(xs);
  p.fs_ = std::move(fs);
  p.fs_.front() = 1.0;  // clamp exactly
  return p;
}

namespace {

// Local cubic through the 4 samples around x; clamped to the table ends.
struct Stencil {
  const double *x, *f;
};

Stencil stencil_at(const std::vector<double>& xs, const std::vector<double>& fs,
                   double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::ptrdiff_t i = it - xs.begin();  // first index with xs[i] > x
  std::ptrdiff_t lo = i - 2;
  lo = std::clamp<std::ptrdiff_t>(lo, 0,
                                  static_cast<std::ptrdiff_t>(xs.size()) - 4);
  return {xs.data() + lo, fs.data() + lo};
}

double lagrange4(const Stencil& s, double x) {
  double acc = 0;
  for (int j = 0; j < 4; ++j) {
    double term = s.f[j];
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      term *= (x - s.x[m]) / (s.x[j] - s.x[m]);
    }
    acc += term;
  }
  return acc;
}

double lagrange4_derivative(const Stencil& s, double x) {
  double acc = 0;
  for (int j = 0; j < 4; ++j) {
    double denom = 1;
    for (int m = 0; m < 4; ++m)
      if (m != j) denom *= (s.x[j] - s.x[m]);
    double dnum = 0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      double prod = 1;
      for (int m = 0; m < 4; ++m) {
        if (m == j || m == k) continue;
        prod *= (x - s.x[m]);
      }
      dnum += prod;
    }
    acc += s.f[j] * dnum / denom;
  }
  return acc;
}

}  // namespace

double Profile::value(double x) const {
  if (kind_ == Kind::Unity) return 1.0;
  if (x <= xs_.front()) return 1.0;
  if (x >= xs_.back()) return fs_.back();
  return lagrange4(stencil_at(xs_, fs_, x), x);
}

double Profile::derivative(double x) const {
  if (kind_ == Kind::Unity) return 0.0;
  if (x <= xs_.front() || x >= xs_.back()) return 0.0;
  return lagrange4_derivative(stencil_at(xs_, fs_, x), x);
}

PotentialSpec PotentialSpec::make(int n, double lambda_l, Profile profile,
                                  double r0) {
  PotentialSpec s{n, lambda_l, std::move(profile), r0};
  s.validate();
  return s;
}

void PotentialSpec::validate() const {
  if (n < 2) throw DomainError("PotentialSpec: tail power n must be >= 2");
  if (r0 <= 0) throw DomainError("PotentialSpec: r0 must be positive");
  if (n == 2) {
    if (!(lambda_l > 0.25))
      throw DomainError(
          "PotentialSpec: n = 2 requires lambda_l > 1/4 (strong coupling)");
  } else if (lambda_l < 0) {
    throw DomainError("PotentialSpec: lambda_l must be nonnegative");
  }
}

double Counterterm::coupling_h() const { return std::sqrt(lambda_s) * R; }

Counterterm Counterterm::make(double R, double lambda_s) {
  Counterterm ct;
  ct.R = R;
  ct.lambda_s = lambda_s;
  ct.branch = static_cast<int>(std::floor(std::sqrt(std::max(0.0, lambda_s)) *
                                          R / kPi));
  ct.validate();
  return ct;
}

void Counterterm::validate() const {
  if (!(R > 0) || !(R <= 1))
    throw DomainError("Counterterm: cutoff R must lie in (0, 1]");
  if (lambda_s < 0 || !std::isfinite(lambda_s))
    throw DomainError("Counterterm: well depth must be finite and >= 0");
  const double h = coupling_h();
  if (branch < 0 || h < branch * kPi || h >= (branch + 1) * kPi)
    throw DomainError("Counterterm: branch inconsistent with sqrt(lambda_s)*R");
}

EnergyPoint EnergyPoint::scattering(double eta) {
  if (eta < 0) throw DomainError("EnergyPoint: scattering eta must be >= 0");
  return {Kind::Scattering, eta};
}

EnergyPoint EnergyPoint::bound(double kappa) {
  if (!(kappa > 0)) throw DomainError("EnergyPoint: bound kappa must be > 0");
  return {Kind::Bound, kappa};
}

double energy_of(const EnergyPoint& ep, double mass, double r0) {
  if (!(mass > 0) || !(r0 > 0))
    throw DomainError("energy_of: mass and r0 must be positive");
  return ep.eta_squared() / (2 * mass * r0 * r0);
}

EnergyPoint scattering_point_of_energy(double energy, double mass, double r0) {
  if (energy < 0) throw DomainError("scattering_point_of_energy: E >= 0 required");
  return EnergyPoint::scattering(std::sqrt(2 * mass * energy) * r0);
}

void Tolerances::validate() const {
  if (!(ode_rel_tol > 0) || !(root_tol > 0) || !(phase_tol > 0))
    throw DomainError("Tolerances: all tolerances must be positive");
  if (points_per_wavelength < 16)
    throw DomainError("Tolerances: points_per_wavelength must be >= 16");
}

DimensionlessPoint to_dimensionless(double r, double k,
                                    const PotentialSpec& spec) {
  if (!(spec.r0 > 0)) throw DomainError("to_dimensionless: r0 must be positive");
  if (r < 0) throw DomainError("to_dimensionless: r must be >= 0");
  return {r / spec.r0, k * spec.r0};
}

std::pair<double, double> from_dimensionless(double x, double eta,
                                             const PotentialSpec& spec) {
  if (!(spec.r0 > 0)) throw DomainError("from_dimensionless: r0 must be positive");
  return {x * spec.r0, eta / spec.r0};
}

double nu_of(double lambda_l) {
  if (!(lambda_l > 0.25))
    throw DomainError("nu_of: requires lambda_l > 1/4");
  return std::sqrt(lambda_l - 0.25);
}

double wkb_phase_scale(const PotentialSpec& spec, double x) {
  if (!(x > 0)) throw DomainError("wkb_phase_scale: x must be positive");
  const double lambda_eff =
      spec.n == 2 ? spec.lambda_l - 0.25 : spec.lambda_l;
  return (2.0 / spec.n) * std::sqrt(lambda_eff * spec.profile(x)) /
         std::pow(x, spec.n / 2.0 - 1.0);
}

}  // namespace singflow
