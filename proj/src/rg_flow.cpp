#include "singflow/rg_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singflow/numeric.hpp"

namespace singflow {
namespace rg_flow {

using zero_energy::ZeroEnergyPhase;

double matching_rhs(const PotentialSpec& spec, const ZeroEnergyPhase& phase,
                    double R) {
  if (!(R > 0) || !(R <= 1))
    throw DomainError("matching_rhs: cutoff must lie in (0, 1]");
  return zero_energy::exterior_log_derivative(spec, phase, R);
}

namespace {

double h_cot_h(double h) { return h / std::tan(h); }

}  // namespace

Counterterm tune_counterterm(const PotentialSpec& spec,
                             const ZeroEnergyPhase& phase, double R, int m,
                             const Tolerances& tol) {
  tol.validate();
  if (m < 0) throw DomainError("tune_counterterm: branch must be >= 0");
  const double g = R * matching_rhs(spec, phase, R);

  // H cot H decreases from +inf (or 1 on branch 0) to -inf across the branch.
  if (m == 0 && g >= 1.0)
    throw BranchInfeasibleError(
        "tune_counterterm: branch 0 has no root for R*rhs >= 1");

  const double lo_edge = m * kPi, hi_edge = (m + 1) * kPi;
  auto f = [&](double h) { return h_cot_h(h) - g; };
  // Walk the bracket ends in from the branch edges until the signs are right.
  double lo = m == 0 ? 1e-8 : lo_edge + kPi / 4;
  if (m > 0)
    for (double step = kPi / 4; f(lo) <= 0 && step > 1e-17; step /= 2)
      lo = lo_edge + step;
  double hi = hi_edge - kPi / 4;
  for (double step = kPi / 4; f(hi) >= 0 && step > 1e-17; step /= 2)
    hi = hi_edge - step;
  const double flo = f(lo), fhi = f(hi);
  if (!(flo > 0) || !(fhi < 0))
    throw BranchInfeasibleError("tune_counterterm: failed to bracket the root");

  auto root = find_root_bracketed(f, lo, hi, flo, fhi, tol.root_tol / 10,
                                  1e-15, 300);
  const double h = root.x;
  Counterterm ct;
  ct.R = R;
  ct.lambda_s = (h / R) * (h / R);
  ct.branch = m;
  ct.validate();
  return ct;
}

ZeroEnergyPhase phase_from_counterterm(const PotentialSpec& spec,
                                       const Counterterm& ct) {
  const double h = ct.coupling_h();
  const double g = h_cot_h(h);  // R * exterior log-derivative at matching
  double phi_raw;
  if (spec.n == 2) {
    const double nu = nu_of(spec.lambda_l);
    phi_raw = std::atan((0.5 - g) / nu) - nu * std::log(ct.R);
  } else {
    if (spec.n == 3)
      throw DomainError("phase_from_counterterm: n = 3 unsupported");
    const double z = std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0) *
                     std::pow(ct.R, 1.0 - spec.n / 2.0);
    const double tan_term = (g - spec.n / 4.0) /
                            std::sqrt(spec.lambda_l / std::pow(ct.R, spec.n)) /
                            ct.R;
    phi_raw = std::atan(tan_term) - z;
  }
  return ZeroEnergyPhase::make(spec.n, phi_raw);
}

double branch_formula_a(const PotentialSpec& spec,
                        const ZeroEnergyPhase& phase, double R, int m) {
  if (m < 0) throw DomainError("branch_formula_a: m >= 0 required");
  double g;
  try {
    g = R * zero_energy::exterior_log_derivative_closed_form(spec, phase, R);
  } catch (const PoleError&) {
    return m * kPi;
  }
  if (std::isinf(g)) return m * kPi;
  return m * kPi * g / (g - 1.0);
}

double branch_formula_b(const PotentialSpec& spec,
                        const ZeroEnergyPhase& phase, double R, int m) {
  if (m < 0) throw DomainError("branch_formula_b: m >= 0 required");
  const double g =
      R * zero_energy::exterior_log_derivative_closed_form(spec, phase, R);
  const double h0 = (m + 0.5) * kPi;
  return h0 - g / h0;
}

double formula_validity_indicator(const PotentialSpec& spec,
                                  const ZeroEnergyPhase& phase, double R) {
  return std::abs(
      R * zero_energy::exterior_log_derivative_closed_form(spec, phase, R));
}

std::vector<double> exterior_node_radii(const PotentialSpec& spec,
                                        const ZeroEnergyPhase& phase,
                                        double r_min, double r_max) {
  if (!(r_min > 0) || !(r_max >= r_min))
    throw DomainError("exterior_node_radii: bad range");
  std::vector<double> out;
  if (spec.n == 2) {
    const double nu = nu_of(spec.lambda_l);
    // nu log R + phi = pi/2 + j pi
    const double j_lo =
        (nu * std::log(r_min) + phase.phi - kPi / 2) / kPi;
    const double j_hi = (nu * std::log(r_max) + phase.phi - kPi / 2) / kPi;
    for (long j = static_cast<long>(std::ceil(j_lo));
         j <= static_cast<long>(std::floor(j_hi)); ++j)
      out.push_back(std::exp((kPi / 2 + j * kPi - phase.phi) / nu));
  } else {
    const double c = std::sqrt(spec.lambda_l) / (spec.n / 2.0 - 1.0);
    const double p = 2.0 / (spec.n - 2);
    // z(R) + phi = pi/2 + j pi with z decreasing in R
    auto radius_of = [&](long j) {
      const double t = kPi / 2 + j * kPi - phase.phi;
      return t > 0 ? std::pow(c / t, p)
                   : std::numeric_limits<double>::infinity();
    };
    for (long j = 0; j < 1000000; ++j) {
      const double r = radius_of(j);
      if (r < r_min) break;
      if (r <= r_max) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FlowTrace trace_flow(const PotentialSpec& spec, const ZeroEnergyPhase& phase,
                     double r_min, double r_max, int grid_points,
                     const FlowPolicy& policy, const Tolerances& tol) {
  if (!(r_min > 0) || !(r_max <= 1) || !(r_max >= r_min))
    throw DomainError("trace_flow: R range must lie inside (0, 1]");
  if (grid_points < 1) throw DomainError("trace_flow: need >= 1 grid point");
  if (r_min == r_max) grid_points = 1;

  FlowTrace trace;
  trace.policy = policy;
  trace.pole_locations = exterior_node_radii(spec, phase, r_min, r_max);

  const auto grid = log_spaced(r_min, r_max, grid_points);
  trace.points.reserve(3 * grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double R : grid) {
    int m = policy.branch;
    if (policy.kind == FlowPolicy::Kind::FixedBoundStateCount) {
      // One branch down for every pole between this radius and the top of
      // the range (descending crossings each create a node).
      const auto above = std::upper_bound(trace.pole_locations.begin(),
                                          trace.pole_locations.end(), R);
      m = policy.branch -
          static_cast<int>(trace.pole_locations.end() - above);
    }

    FlowPoint numeric{R, nan, nan, m, FlowPoint::Source::NumericRoot, false};
    if (m >= 0) {
      try {
        const Counterterm ct = tune_counterterm(spec, phase, R, m, tol);
        numeric.lambda_s = ct.lambda_s;
        numeric.H = ct.coupling_h();
        numeric.feasible = true;
      } catch (const BranchInfeasibleError&) {
      } catch (const PoleError&) {
      }
    }
    trace.points.push_back(numeric);

    // Formula A hugs multiples of pi: pick the nearest one when the numeric
    // root is available, otherwise the branch's lower edge.
    const int j = numeric.feasible
                      ? static_cast<int>(std::lround(numeric.H / kPi))
                      : std::max(m, 0);
    FlowPoint fa{R, nan, nan, m, FlowPoint::Source::FormulaA, m >= 0};
    FlowPoint fb{R, nan, nan, m, FlowPoint::Source::FormulaB, m >= 0};
    if (m >= 0) {
      const double ha = branch_formula_a(spec, phase, R, j);
      const double hb = branch_formula_b(spec, phase, R, m);
      fa.H = ha;
      fa.lambda_s = (ha / R) * (ha / R);
      fb.H = hb;
      fb.lambda_s = (hb / R) * (hb / R);
    }
    trace.points.push_back(fa);
    trace.points.push_back(fb);
  }
  return trace;
}

}  // namespace rg_flow
}  // namespace singflow
