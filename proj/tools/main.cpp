#include "bcsgp/cli/commands.hpp"
#include <CLI11.hpp>
#include <iostream>

using namespace bcsgp;

int main(int argc, char **argv) {
  CLI::App app{"BCS / Gross-Pitaevskii numerical laboratory"};
  app.set_version_flag("--version", std::string(cli::k_version));
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> h;

  for (const auto &name : cli::subcommands()) {
    auto *sub = app.add_subcommand(name);
    sub->set_help_flag("--help", "print help and exit");
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "override, key=value (repeatable)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "Monte Carlo seed");
    sub->add_option("--threads", threads, "Monte Carlo threads")->check(CLI::PositiveNumber);
    if (name == "trial-energy" || name == "mu-c")
      sub->add_option("--h", h, "semiclassical parameter h");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  cli::json cfg;
  try {
    cfg = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    for (const auto &s : sets)
      cli::apply_override(cfg, s);
    if (seed)
      cli::apply_override(cfg, "mc.seed=" + std::to_string(*seed));
    if (threads)
      cli::apply_override(cfg, "mc.threads=" + std::to_string(*threads));
    if (h) {
      const auto v = cli::json(*h).dump();
      cli::apply_override(cfg, name == "mu-c" ? "mu_c.h_list=[" + v + "]" : "model.h=" + v);
    }
    cli::decode(cfg);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    cli::json rep = {{"tool", "bcsgp"},
                     {"version", cli::k_version},
                     {"subcommand", name},
                     {"status", "validation_failure"},
                     {"exit_code", cli::exit_validation},
                     {"config", nullptr},
                     {"error", {{"type", "config"}, {"message", e.what()}}}};
    try {
      cli::write_atomic(std::filesystem::path(out_dir) / (name + ".json"), rep.dump(2) + "\n");
    } catch (const std::exception &w) {
      std::cerr << "cannot write report: " << w.what() << "\n";
    }
    return cli::exit_validation;
  }

  try {
    const int code = cli::run(name, cfg, out_dir, std::cerr);
    std::cout << name << ": exit " << code << ", report in " << out_dir << "/" << name
              << ".json\n";
    return code;
  } catch (const std::exception &e) {
    std::cerr << "error writing output: " << e.what() << "\n";
    return cli::exit_validation;
  }
}
