#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singflow/dataset.hpp"
#include "singflow/model.hpp"
#include "singflow/zero_energy.hpp"

namespace singflow {
namespace commands {

// Flat run configuration shared by all subcommands; every numeric field is
// validated against the owning operation's preconditions before any
// computation starts. All computations are deterministic (no seeds).
struct RunConfig {
  std::string command;

  int n = 4;
  double lambda_l = 1.0;

  // phase source: exactly one of these three
  std::optional<double> phi;
  std::optional<double> anchor_k;
  std::optional<double> anchor_delta;
  std::optional<double> scattering_length;
  std::optional<double> bound_state_energy;  // n = 2 spectrum anchor

  std::vector<double> cutoffs;
  std::optional<int> branch;  // matching branch; unset = lowest feasible
  bool branch_cycle = false;  // fixed-bound-state-count flow policy

  double k_min = 0.02;
  double k_max = 0.5;
  int k_points = 25;

  double r_min = 0.01;
  double r_max = 0.3;
  int r_points = 200;

  double kappa_min = 1e-4;
  double kappa_max = 1.0;

  double x_min = 0.05;
  double x_max = 5.0;
  int x_points = 101;
  std::vector<int> orders = {0, 1, 2};

  std::string format = "csv";
  std::string out = "-";

  Tolerances tol;
};

Dataset cmd_flow(const RunConfig& config);
Dataset cmd_phases(const RunConfig& config);
Dataset cmd_errors(const RunConfig& config);
Dataset cmd_spectrum(const RunConfig& config);
Dataset cmd_perturb(const RunConfig& config);
// Prints a single JSON object {R, lambda_S, H, branch, phi_mod_pi}.
std::string cmd_tune(const RunConfig& config);

// Shared helpers (also used by tests).
PotentialSpec spec_of(const RunConfig& config);
zero_energy::ZeroEnergyPhase resolve_phase(const RunConfig& config,
                                           double anchor_R);
// SINGFLOW_TOL_* environment overrides applied to the tolerance block.
void apply_env_tolerances(Tolerances* tol);

}  // namespace commands
}  // namespace singflow
