// Command-line front end. Precedence: built-in defaults < --config file <
// explicit flags. The resolved configuration is echoed to <out>/run.json.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphon_ldp/error.h"
#include "graphon_ldp/experiment.h"

namespace {

using graphon_ldp::Command;
using graphon_ldp::ExperimentConfig;

// Accept the two-word forms "psi solve" and "experiment scaling".
std::vector<std::string> NormalizeArgs(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() >= 2 && args[0] == "psi" && args[1] == "solve") {
    args.erase(args.begin() + 1);
  } else if (args.size() >= 2 && args[0] == "experiment" && args[1] == "scaling") {
    args.erase(args.begin());
  }
  return args;
}

struct Flags {
  std::string config;
  std::string ref;
  std::string h;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  double beta = 0.0;
  std::vector<double> eps;
  std::size_t n = 0;
  std::size_t count = 0;
  std::vector<double> thresholds;
  std::vector<std::size_t> k_list;
  std::string out;
  bool verbose = false;
  bool no_delta_start = false;
};

void AddOptions(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override its fields)");
  sub->add_option("--ref", f.ref, "reference: builtin:const:p, builtin:rank1:c0,c1,... or file");
  sub->add_option("--target", f.h, "second graphon (rate: h, approx: f)");
  sub->add_option("--m", f.m, "grid resolution");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--beta", f.beta, "target operator norm (psi)");
  sub->add_option("--eps", f.eps, "comma-separated offsets from C_r (scaling)")->delimiter(',');
  sub->add_option("--n", f.n, "vertices (sample, ensemble)");
  sub->add_option("--count", f.count, "ensemble size");
  sub->add_option("--thresholds", f.thresholds, "comma-separated tail thresholds")
      ->delimiter(',');
  sub->add_option("--k", f.k_list, "comma-separated approximant levels (approx)")
      ->delimiter(',');
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--verbose", f.verbose, "include per-cell data and solver traces");
  sub->add_flag("--no-delta-start", f.no_delta_start, "disable the Delta initialisation");
}

ExperimentConfig Resolve(const CLI::App* sub, const Flags& f, Command command) {
  ExperimentConfig config;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) {
      throw graphon_ldp::Error(graphon_ldp::ErrorCode::kConfig,
                               "cannot open config '" + f.config + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw graphon_ldp::Error(graphon_ldp::ErrorCode::kConfig,
                               std::string("config is not valid JSON: ") + e.what());
    }
    config = graphon_ldp::ConfigFromJson(j);
  }
  config.command = command;
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--ref")) config.ref = f.ref;
  if (given("--target")) config.h = f.h;
  if (given("--m")) config.m = f.m;
  if (given("--seed")) config.seed = f.seed;
  if (given("--beta")) config.beta = f.beta;
  if (given("--eps")) config.eps = f.eps;
  if (given("--n")) config.n = f.n;
  if (given("--count")) config.count = f.count;
  if (given("--thresholds")) config.thresholds = f.thresholds;
  if (given("--k")) config.k_list = f.k_list;
  if (given("--out")) config.out_dir = f.out;
  if (given("--verbose")) config.verbose = f.verbose;
  if (given("--no-delta-start")) config.no_delta_start = f.no_delta_start;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphon large-deviation toolkit"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"info", "reference summary and constants"},
      {"rate", "relative-entropy rate I_r(h)"},
      {"sample", "sample one graph"},
      {"ensemble", "top-eigenvalue ensemble statistics"},
      {"psi", "solve the constrained rate problem at --beta"},
      {"scaling", "quadratic scaling table over --eps"},
      {"approx", "block-approximant rate convergence over --k"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    AddOptions(sub, flags);
    subs.push_back(sub);
  }

  std::vector<std::string> args = NormalizeArgs(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const auto command = *graphon_ldp::ParseCommand(commands[i].first);
    ExperimentConfig config;
    try {
      config = Resolve(subs[i], flags, command);
    } catch (const graphon_ldp::Error& e) {
      nlohmann::json err = {{"error",
                             {{"code", std::string(graphon_ldp::ErrorCodeName(e.code()))},
                              {"message", e.what()}}}};
      std::cerr << err.dump(2) << "\n";
      return 2;
    }
    const graphon_ldp::RunOutcome outcome = graphon_ldp::Run(config);
    (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.summary;
    return outcome.exit_code;
  }
  return 1;
}
