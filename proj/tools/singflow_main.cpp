#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "singflow/commands.hpp"
#include "singflow/errors.hpp"

using singflow::commands::RunConfig;

namespace {

// Flat `key = value` config files with '#' comments; dashes and underscores
// in keys are interchangeable. Command-line flags win over file values.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw singflow::DomainError("config file not readable: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

void apply_config_map(const std::map<std::string, std::string>& kv,
                      RunConfig* config) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("n")) config->n = std::stoi(*v);
  if (auto v = get("lambda_l")) config->lambda_l = std::stod(*v);
  if (auto v = get("phi")) config->phi = std::stod(*v);
  if (auto v = get("anchor_k")) config->anchor_k = std::stod(*v);
  if (auto v = get("anchor_delta")) config->anchor_delta = std::stod(*v);
  if (auto v = get("scattering_length")) config->scattering_length = std::stod(*v);
  if (auto v = get("bound_state_energy")) config->bound_state_energy = std::stod(*v);
  if (auto v = get("cutoffs")) config->cutoffs = parse_double_list(*v);
  if (auto v = get("branch")) {
    if (*v == "cycle")
      config->branch_cycle = true;
    else
      config->branch = std::stoi(*v);
  }
  if (auto v = get("k_min")) config->k_min = std::stod(*v);
  if (auto v = get("k_max")) config->k_max = std::stod(*v);
  if (auto v = get("k_points")) config->k_points = std::stoi(*v);
  if (auto v = get("r_min")) config->r_min = std::stod(*v);
  if (auto v = get("r_max")) config->r_max = std::stod(*v);
  if (auto v = get("r_points")) config->r_points = std::stoi(*v);
  if (auto v = get("kappa_min")) config->kappa_min = std::stod(*v);
  if (auto v = get("kappa_max")) config->kappa_max = std::stod(*v);
  if (auto v = get("x_min")) config->x_min = std::stod(*v);
  if (auto v = get("x_max")) config->x_max = std::stod(*v);
  if (auto v = get("x_points")) config->x_points = std::stoi(*v);
  if (auto v = get("orders")) config->orders = parse_int_list(*v);
  if (auto v = get("format")) config->format = *v;
  if (auto v = get("out")) config->out = *v;
}

void emit(const std::string& text, const std::string& out) {
  if (out == "-" || out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw singflow::DomainError("cannot open output path: " + out);
  f << text;
}

int run(int argc, char** argv) {
  CLI::App app{"renormalized 1/r^n singular-potential toolkit"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path;
  std::string branch_text;
  std::string cutoffs_text;
  std::string orders_text;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value file");
    cmd->add_option("--n", config.n, "tail power (n >= 2)");
    cmd->add_option("--lambda-l", config.lambda_l, "tail strength");
    cmd->add_option("--phi", [&](const CLI::results_t& r) {
      config.phi = std::stod(r[0]);
      return true;
    }, "zero-energy phase (raw representative accepted)");
    cmd->add_option("--anchor-k", [&](const CLI::results_t& r) {
      config.anchor_k = std::stod(r[0]);
      return true;
    }, "anchor wavenumber for delta(k) fitting");
    cmd->add_option("--anchor-delta", [&](const CLI::results_t& r) {
      config.anchor_delta = std::stod(r[0]);
      return true;
    }, "anchor phase shift");
    cmd->add_option("--scattering-length", [&](const CLI::results_t& r) {
      config.scattering_length = std::stod(r[0]);
      return true;
    }, "scattering-length phase source (n >= 4)");
    cmd->add_option("--bound-state-energy", [&](const CLI::results_t& r) {
      config.bound_state_energy = std::stod(r[0]);
      return true;
    }, "bound-state phase source (n = 2, energy < 0)");
    cmd->add_option("--cutoffs", cutoffs_text, "comma-separated cutoff radii");
    cmd->add_option("--branch", branch_text, "matching branch m, or 'cycle'");
    cmd->add_option("--k-min", config.k_min);
    cmd->add_option("--k-max", config.k_max);
    cmd->add_option("--k-points", config.k_points);
    cmd->add_option("--r-min", config.r_min);
    cmd->add_option("--r-max", config.r_max);
    cmd->add_option("--r-points", config.r_points);
    cmd->add_option("--kappa-min", config.kappa_min);
    cmd->add_option("--kappa-max", config.kappa_max);
    cmd->add_option("--x-min", config.x_min);
    cmd->add_option("--x-max", config.x_max);
    cmd->add_option("--x-points", config.x_points);
    cmd->add_option("--orders", orders_text, "comma-separated subset of 0,1,2");
    cmd->add_option("--format", config.format)
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", config.out, "output path ('-' = stdout)");
  };

  for (const char* name :
       {"flow", "phases", "errors", "spectrum", "perturb", "tune"})
    add_common(app.add_subcommand(name));

  // First pass: pick up --config so file values act as defaults under flags.
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--config" && i + 1 < argc) {
      apply_config_map(load_config_file(argv[i + 1]), &config);
      break;
    }
  }

  app.parse(argc, argv);
  config.command = app.get_subcommands().front()->get_name();
  if (!cutoffs_text.empty()) config.cutoffs = parse_double_list(cutoffs_text);
  if (!orders_text.empty()) config.orders = parse_int_list(orders_text);
  if (!branch_text.empty()) {
    if (branch_text == "cycle")
      config.branch_cycle = true;
    else
      config.branch = std::stoi(branch_text);
  }
  singflow::commands::apply_env_tolerances(&config.tol);

  using namespace singflow::commands;
  if (config.command == "tune") {
    emit(cmd_tune(config), config.out);
    return 0;
  }
  singflow::Dataset dataset;
  if (config.command == "flow")
    dataset = cmd_flow(config);
  else if (config.command == "phases")
    dataset = cmd_phases(config);
  else if (config.command == "errors")
    dataset = cmd_errors(config);
  else if (config.command == "spectrum")
    dataset = cmd_spectrum(config);
  else if (config.command == "perturb")
    dataset = cmd_perturb(config);
  emit(config.format == "json" ? dataset.to_json() : dataset.to_csv(),
       config.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    nlohmann::json j{{"error", "validation"}, {"what", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  } catch (const singflow::DomainError& e) {
    nlohmann::json j{{"error", "validation"}, {"what", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  } catch (const singflow::NumericalError& e) {
    nlohmann::json j{{"error", "numerical"}, {"what", e.what()}};
    std::cerr << j.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    nlohmann::json j{{"error", "internal"}, {"what", e.what()}};
    std::cerr << j.dump() << "\n";
    return 3;
  }
}
