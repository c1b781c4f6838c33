#include "singflow/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "json.hpp"
#include "singflow/numeric.hpp"
#include "singflow/perturbation.hpp"
#include "singflow/radial.hpp"
#include "singflow/rg_flow.hpp"

namespace singflow {
namespace commands {

using zero_energy::Observable;
using zero_energy::ZeroEnergyPhase;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int phase_source_count(const RunConfig& c) {
  int sources = 0;
  if (c.phi) ++sources;
  if (c.anchor_k || c.anchor_delta) ++sources;
  if (c.scattering_length) ++sources;
  if (c.bound_state_energy) ++sources;
  return sources;
}

void put_common_metadata(Dataset* d, const RunConfig& c) {
  d->add_meta("tool", std::string("singflow"));
  d->add_meta("schema_version", static_cast<long long>(1));
  d->add_meta("command", c.command);
  d->add_meta("n", static_cast<long long>(c.n));
  d->add_meta("lambda_l", c.lambda_l);
  if (c.phi) d->add_meta("phi", *c.phi);
  if (c.anchor_k) d->add_meta("anchor_k", *c.anchor_k);
  if (c.anchor_delta) d->add_meta("anchor_delta", *c.anchor_delta);
  if (c.scattering_length) d->add_meta("scattering_length", *c.scattering_length);
  if (c.bound_state_energy) d->add_meta("bound_state_energy", *c.bound_state_energy);
  if (!c.cutoffs.empty()) {
    std::string s;
    for (double r : c.cutoffs) {
      if (!s.empty()) s += ':';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", r);
      s += buf;
    }
    d->add_meta("cutoffs", s);
  }
  if (c.branch) d->add_meta("branch", static_cast<long long>(*c.branch));
  d->add_meta("branch_policy", std::string(c.branch_cycle ? "cycle" : "fixed"));
  d->add_meta("ode_rel_tol", c.tol.ode_rel_tol);
  d->add_meta("root_tol", c.tol.root_tol);
  d->add_meta("phase_tol", c.tol.phase_tol);
  d->add_meta("points_per_wavelength",
              static_cast<long long>(c.tol.points_per_wavelength));
  d->add_meta("reproducibility",
              std::string("identical configuration reproduces these rows "
                          "bit-for-bit on the same build"));
}

Counterterm tune_lowest_or_branch(const PotentialSpec& spec,
                                  const ZeroEnergyPhase& phase, double R,
                                  const std::optional<int>& branch,
                                  const Tolerances& tol) {
  if (branch) return rg_flow::tune_counterterm(spec, phase, R, *branch, tol);
  for (int m = 0; m < 4; ++m) {
    try {
      return rg_flow::tune_counterterm(spec, phase, R, m, tol);
    } catch (const BranchInfeasibleError&) {
    }
  }
  throw BranchInfeasibleError("no feasible branch at cutoff");
}

}  // namespace

PotentialSpec spec_of(const RunConfig& config) {
  return PotentialSpec::make(config.n, config.lambda_l);
}

ZeroEnergyPhase resolve_phase(const RunConfig& config, double anchor_R) {
  if (phase_source_count(config) != 1)
    throw DomainError(
        "exactly one phase source required: --phi, --anchor-k/--anchor-delta, "
        "--scattering-length, or --bound-state-energy");
  const auto spec = spec_of(config);
  if (config.phi) return ZeroEnergyPhase::make(config.n, *config.phi);
  if (config.scattering_length)
    return zero_energy::phase_from_observable(
        spec, Observable::make_scattering_length(*config.scattering_length),
        config.tol);
  if (config.bound_state_energy)
    return zero_energy::phase_from_observable(
        spec, Observable::make_bound_state_energy(*config.bound_state_energy),
        config.tol);
  if (!config.anchor_k || !config.anchor_delta)
    throw DomainError("--anchor-k and --anchor-delta must be given together");
  return zero_energy::phase_from_observable(
      spec,
      Observable::make_phase_at_k(*config.anchor_k, *config.anchor_delta,
                                  anchor_R, config.branch.value_or(-1)),
      config.tol);
}

void apply_env_tolerances(Tolerances* tol) {
  auto read = [](const char* name) -> std::optional<double> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::strtod(v, nullptr);
  };
  if (auto v = read("SINGFLOW_TOL_ODE_REL_TOL")) tol->ode_rel_tol = *v;
  if (auto v = read("SINGFLOW_TOL_ROOT_TOL")) tol->root_tol = *v;
  if (auto v = read("SINGFLOW_TOL_PHASE_TOL")) tol->phase_tol = *v;
  if (auto v = read("SINGFLOW_TOL_POINTS_PER_WAVELENGTH"))
    tol->points_per_wavelength = static_cast<int>(*v);
  tol->validate();
}

Dataset cmd_flow(const RunConfig& config) {
  config.tol.validate();
  const auto spec = spec_of(config);
  const auto phase = resolve_phase(config, std::min(config.r_min, 0.01));
  const auto policy =
      config.branch_cycle
          ? rg_flow::FlowPolicy::fixed_bound_state_count(config.branch.value_or(1))
          : rg_flow::FlowPolicy::fixed_branch(config.branch.value_or(1));
  const auto trace = rg_flow::trace_flow(spec, phase, config.r_min,
                                         config.r_max, config.r_points, policy,
                                         config.tol);

  Dataset d;
  d.columns = {"R",           "lambda_S_numeric", "H_numeric", "H_formula_A",
               "H_formula_B", "branch",           "near_pole"};
  put_common_metadata(&d, config);
  d.add_meta("r_min", config.r_min);
  d.add_meta("r_max", config.r_max);
  d.add_meta("r_points", static_cast<long long>(config.r_points));
  d.add_meta("phi_mod_pi", phase.phi);
  for (std::size_t i = 0; i + 2 < trace.points.size(); i += 3) {
    const auto& numeric = trace.points[i];
    const auto& fa = trace.points[i + 1];
    const auto& fb = trace.points[i + 2];
    bool near_pole = false;
    try {
      near_pole =
          rg_flow::formula_validity_indicator(spec, phase, numeric.R) > 100.0;
    } catch (const PoleError&) {
      near_pole = true;
    }
    d.rows.push_back({numeric.R,
                      numeric.feasible ? numeric.lambda_s : kNan,
                      numeric.feasible ? numeric.H : kNan,
                      fa.feasible ? fa.H : kNan, fb.feasible ? fb.H : kNan,
                      static_cast<long long>(numeric.branch),
                      static_cast<long long>(near_pole ? 1 : 0)});
  }
  return d;
}

namespace {

struct PhaseRow {
  double k, delta, stability;
  bool ok;
};

// All cutoffs share one phase (fitted at the smallest cutoff when the source
// is a scattering anchor) and each well depth is then tuned independently:
// holding the observable fixed while the regulator moves.
std::vector<Counterterm> tuned_counterterms(const RunConfig& config) {
  if (config.cutoffs.empty())
    throw DomainError("at least one cutoff required (--cutoffs)");
  for (double R : config.cutoffs)
    if (!(R > 0) || !(R <= 1))
      throw DomainError("cutoffs must lie in (0, 1]");
  const auto spec = spec_of(config);
  const double anchor_R =
      *std::min_element(config.cutoffs.begin(), config.cutoffs.end());
  const auto phase = resolve_phase(config, anchor_R);
  std::vector<Counterterm> cts;
  cts.reserve(config.cutoffs.size());
  for (double R : config.cutoffs)
    cts.push_back(
        tune_lowest_or_branch(spec, phase, R, config.branch, config.tol));
  return cts;
}

std::vector<PhaseRow> phase_grid(const PotentialSpec& spec,
                                 const Counterterm& ct,
                                 const std::vector<double>& ks,
                                 const Tolerances& tol) {
  std::vector<PhaseRow> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    try {
      const auto p = radial::phase_shift(spec, ct, ks[i], tol);
      rows[i] = {ks[i], p.delta, p.stability, true};
    } catch (const NumericalError&) {
      rows[i] = {ks[i], kNan, kNan, false};
    }
  });
  return rows;
}

// Continuity unwrapping along ascending k: each value is shifted by the
// multiple of pi nearest the previous one.
std::vector<double> unwrap_series(const std::vector<PhaseRow>& rows) {
  std::vector<double> out(rows.size(), kNan);
  double prev = kNan;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) continue;
    double v = rows[i].delta;
    if (std::isfinite(prev))
      v += kPi * std::round((prev - v) / kPi);
    out[i] = v;
    prev = v;
  }
  return out;
}

}  // namespace

Dataset cmd_phases(const RunConfig& config) {
  config.tol.validate();
  if (config.k_points < 0) throw DomainError("k_points must be >= 0");
  if (config.k_points > 0 && !(config.k_min > 0 && config.k_max >= config.k_min))
    throw DomainError("need 0 < k_min <= k_max");
  const auto spec = spec_of(config);
  const auto cts = tuned_counterterms(config);
  const auto ks = config.k_points > 0
                      ? lin_spaced(config.k_min, config.k_max, config.k_points)
                      : std::vector<double>{};

  Dataset d;
  d.columns = {"k", "E", "R", "delta", "delta_unwrapped", "stability"};
  put_common_metadata(&d, config);
  d.add_meta("k_min", config.k_min);
  d.add_meta("k_max", config.k_max);
  d.add_meta("k_points", static_cast<long long>(config.k_points));
  if (spec.n <= 3) d.add_meta("ir_sensitive", std::string("true"));

  for (std::size_t c = 0; c < cts.size(); ++c) {
    const auto rows = phase_grid(spec, cts[c], ks, config.tol);
    const auto unwrapped = unwrap_series(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      d.rows.push_back({rows[i].k, 0.5 * rows[i].k * rows[i].k,
                        config.cutoffs[c], rows[i].delta, unwrapped[i],
                        rows[i].stability});
    }
  }
  return d;
}

Dataset cmd_errors(const RunConfig& config) {
  config.tol.validate();
  if (config.cutoffs.size() < 2)
    throw DomainError("cmd_errors: need at least two cutoffs");
  if (config.k_points < 2) throw DomainError("cmd_errors: need k_points >= 2");
  const auto spec = spec_of(config);
  const auto cts = tuned_counterterms(config);
  const auto ks = log_spaced(config.k_min, config.k_max, config.k_points);

  Dataset d;
  d.columns = {"log_E", "log_abs_delta_diff", "pair", "fitted_slope"};
  put_common_metadata(&d, config);
  d.add_meta("k_min", config.k_min);
  d.add_meta("k_max", config.k_max);
  d.add_meta("k_points", static_cast<long long>(config.k_points));

  for (std::size_t p = 0; p + 1 < cts.size(); ++p) {
    const auto rows_a = phase_grid(spec, cts[p], ks, config.tol);
    const auto rows_b = phase_grid(spec, cts[p + 1], ks, config.tol);
    char label[48];
    std::snprintf(label, sizeof label, "%g:%g", config.cutoffs[p],
                  config.cutoffs[p + 1]);

    std::vector<double> log_e(ks.size(), kNan), log_d(ks.size(), kNan);
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      log_e[i] = std::log10(0.5 * ks[i] * ks[i]);
      if (!rows_a[i].ok || !rows_b[i].ok) continue;
      const double diff =
          std::abs(wrap_principal(rows_a[i].delta - rows_b[i].delta));
      if (diff > 0) {
        log_d[i] = std::log10(diff);
        fx.push_back(log_e[i]);
        fy.push_back(log_d[i]);
      }
    }
    double slope = kNan;
    if (fx.size() >= 2) slope = fit_line(fx, fy).slope;
    if (config.cutoffs[p] == config.cutoffs[p + 1])
      d.add_meta(std::string("degenerate_pair_") + label,
                 std::string("all differences vanish; slope undefined"));
    for (std::size_t i = 0; i < ks.size(); ++i)
      d.rows.push_back(
          {log_e[i], log_d[i], std::string(label), slope});
  }
  return d;
}

Dataset cmd_spectrum(const RunConfig& config) {
  config.tol.validate();
  if (config.n != 2) throw DomainError("cmd_spectrum: n = 2 required");
  if (!(config.kappa_min > 0) || !(config.kappa_max > config.kappa_min))
    throw DomainError("cmd_spectrum: need 0 < kappa_min < kappa_max");
  const auto spec = spec_of(config);
  const double R = config.cutoffs.empty() ? 0.01 : config.cutoffs[0];
  const auto phase = resolve_phase(config, R);
  const auto ct =
      tune_lowest_or_branch(spec, phase, R,
                            std::optional<int>(config.branch.value_or(1)),
                            config.tol);
  const auto shot = radial::bound_states_shooting(
      spec, ct, config.kappa_min, config.kappa_max, config.tol);

  // Formula tower spanning the window generously, aligned to each shot state
  // by log distance.
  const double nu = nu_of(config.lambda_l);
  const auto tower = zero_energy::spectrum_n2(config.lambda_l, phase, -60, 60);
  auto nearest_formula = [&](double kappa) {
    double best = kNan, dist = 1e300;
    for (const auto& s : tower) {
      const double dd = std::abs(std::log(s.kappa / kappa));
      if (dd < dist) {
        dist = dd;
        best = s.kappa;
      }
    }
    return best;
  };

  Dataset d;
  d.columns = {"m", "kappa_shooting", "kappa_formula", "ratio_to_previous",
               "e_to_minus_pi_over_nu"};
  put_common_metadata(&d, config);
  d.add_meta("kappa_min", config.kappa_min);
  d.add_meta("kappa_max", config.kappa_max);
  d.add_meta("R", R);
  const double ratio_law = std::exp(-kPi / nu);
  for (std::size_t i = 0; i < shot.size(); ++i) {
    const double ratio =
        i == 0 ? kNan : shot[i].kappa / shot[i - 1].kappa;
    d.rows.push_back({static_cast<long long>(shot[i].m), shot[i].kappa,
                      nearest_formula(shot[i].kappa), ratio, ratio_law});
  }
  return d;
}

Dataset cmd_perturb(const RunConfig& config) {
  config.tol.validate();
  if (config.n != 4) throw DomainError("cmd_perturb: n = 4 required");
  if (config.x_points < 1) throw DomainError("cmd_perturb: x_points >= 1");
  if (!(config.x_min > 0) || !(config.x_max >= config.x_min))
    throw DomainError("cmd_perturb: need 0 < x_min <= x_max");
  for (int o : config.orders)
    if (o < 0 || o > 2) throw DomainError("cmd_perturb: orders within 0..2");

  Dataset d;
  d.columns = {"x", "u_exact"};
  for (int o : config.orders)
    d.columns.push_back("u_order" + std::to_string(o));
  put_common_metadata(&d, config);
  d.add_meta("x_min", config.x_min);
  d.add_meta("x_max", config.x_max);
  d.add_meta("x_points", static_cast<long long>(config.x_points));

  const auto xs = log_spaced(config.x_min, config.x_max, config.x_points);

  if (config.lambda_l == 0) {
    // free tail: every order is the exact straight line
    for (double x : xs) {
      std::vector<Cell> row{x, x};
      for (std::size_t o = 0; o < config.orders.size(); ++o) row.push_back(x);
      d.rows.push_back(std::move(row));
    }
    return d;
  }

  const auto phase = resolve_phase(config, std::min(0.01, config.x_min));
  const double cos_phi = std::cos(phase.phi);
  if (std::abs(cos_phi) < 1e-12)
    throw DomainError(
        "cmd_perturb: phase at the unnatural limit, exact asymptote "
        "normalization diverges");
  const auto spec = spec_of(config);
  const double a4 =
      zero_energy::scattering_length_n4(config.lambda_l, phase);
  perturbation::BornSeries series(config.lambda_l, a4);

  std::vector<std::vector<Cell>> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    // normalized so the asymptote is x - a4, shared with the Born iterates
    const double exact =
        zero_energy::wavefunction(spec, phase, x).u / cos_phi;
    std::vector<Cell> row{x, exact};
    for (int o : config.orders) row.push_back(series.partial_sum(o, x));
    rows[i] = std::move(row);
  });
  for (auto& row : rows) d.rows.push_back(std::move(row));
  return d;
}

std::string cmd_tune(const RunConfig& config) {
  config.tol.validate();
  if (config.cutoffs.size() != 1)
    throw DomainError("cmd_tune: exactly one cutoff required");
  const double R = config.cutoffs[0];
  const auto spec = spec_of(config);
  const auto phase = resolve_phase(config, R);
  const auto ct =
      tune_lowest_or_branch(spec, phase, R, config.branch, config.tol);
  nlohmann::ordered_json j;
  j["R"] = ct.R;
  j["lambda_S"] = ct.lambda_s;
  j["H"] = ct.coupling_h();
  j["branch"] = ct.branch;
  j["phi_mod_pi"] = phase.phi;
  return j.dump(2) + "\n";
}

}  // namespace commands
}  // namespace singflow
