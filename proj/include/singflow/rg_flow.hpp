#pragma once

#include <vector>

#include "singflow/model.hpp"
#include "singflow/zero_energy.hpp"

namespace singflow {
namespace rg_flow {

struct FlowPoint {
  enum class Source { NumericRoot, FormulaA, FormulaB };
  double R;
  double lambda_s;
  double H;  // running coupling sqrt(lambda_s) R
  int branch;
  Source source;
  bool feasible = true;
};

struct FlowPolicy {
  enum class Kind {
    FixedBranch,          // hold the matching branch m over the whole range
    FixedBoundStateCount  // drop one branch at each descending pole crossing,
                          // so the node budget stays fixed
  };
  Kind kind = Kind::FixedBranch;
  int branch = 1;  // branch held (FixedBranch) or at the largest R (cycle)

  static FlowPolicy fixed_branch(int m) { return {Kind::FixedBranch, m}; }
  static FlowPolicy fixed_bound_state_count(int m_at_r_max) {
    return {Kind::FixedBoundStateCount, m_at_r_max};
  }
};

struct FlowTrace {
  // Triples (NumericRoot, FormulaA, FormulaB) per grid radius, R ascending.
  std::vector<FlowPoint> points;
  FlowPolicy policy;
  std::vector<double> pole_locations;  // exterior-node radii in range
};

// Exterior zero-energy log-derivative at R; the right-hand side of the
// matching condition. Throws PoleError at exterior nodes.
double matching_rhs(const PotentialSpec& spec,
                    const zero_energy::ZeroEnergyPhase& phase, double R);

// Solves sqrt(lambda_s) cot(sqrt(lambda_s) R) = matching_rhs(R) for lambda_s
// with H = sqrt(lambda_s) R restricted to (m pi, (m+1) pi). H cot H is
// strictly decreasing on every branch, so the root is unique; m = 0 is
// infeasible when R * rhs >= 1.
Counterterm tune_counterterm(const PotentialSpec& spec,
                             const zero_energy::ZeroEnergyPhase& phase,
                             double R, int m, const Tolerances& tol = {});

// Inverse matching: the phase that makes the given counterterm a solution.
zero_energy::ZeroEnergyPhase phase_from_counterterm(const PotentialSpec& spec,
                                                    const Counterterm& ct);

// Closed-form branch approximations of the running coupling. Formula A,
// H = m pi G/(G - 1) with G = R * matching_rhs, holds where |G| is large
// (near H = m pi); formula B, H = (m + 1/2) pi - G/((m + 1/2) pi), holds
// where G is near zero. The indicator |G| separates the regimes.
double branch_formula_a(const PotentialSpec& spec,
                        const zero_energy::ZeroEnergyPhase& phase, double R,
                        int m);
double branch_formula_b(const PotentialSpec& spec,
                        const zero_energy::ZeroEnergyPhase& phase, double R,
                        int m);
double formula_validity_indicator(const PotentialSpec& spec,
                                  const zero_energy::ZeroEnergyPhase& phase,
                                  double R);  // |G| = |R * matching_rhs|

// Radii of exterior zero-energy nodes (poles of the matching RHS) inside
// [r_min, r_max].
std::vector<double> exterior_node_radii(const PotentialSpec& spec,
                                        const zero_energy::ZeroEnergyPhase& phase,
                                        double r_min, double r_max);

// Numeric root plus both closed forms on a log-spaced R grid. Branch-
// infeasible points are annotated (feasible = false) rather than aborting.
FlowTrace trace_flow(const PotentialSpec& spec,
                     const zero_energy::ZeroEnergyPhase& phase, double r_min,
                     double r_max, int grid_points, const FlowPolicy& policy,
                     const Tolerances& tol = {});

}  // namespace rg_flow
}  // namespace singflow
