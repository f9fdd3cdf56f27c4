// Command-line front end: `run <config>` and `sweep <config> --param N --values 3..11`.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "bernoulli/errors.hpp"
#include "bernoulli/experiment.hpp"

namespace {

std::set<int> parse_iter_list(const std::string& text, bool& want_final) {
  std::set<int> iters;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "final") {
      want_final = true;
      continue;
    }
    std::size_t used = 0;
    const int k = std::stoi(item, &used);
    if (used != item.size() || k < 0) throw bernoulli::ConfigError("bad --dump-mesh entry '" + item + "'");
    iters.insert(k);
  }
  return iters;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernoulli free boundary shape optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string dump_mesh;
  std::string output_root;

  auto* run_cmd = app.add_subcommand("run", "run one experiment configuration");
  run_cmd->add_option("config", config_path, "key=value configuration file")->required();
  run_cmd->add_option("--dump-mesh", dump_mesh, "comma-separated iterations (or 'final') whose mesh is written");
  run_cmd->add_option("--output-root", output_root, "directory for relative 'out' paths");

  std::string param;
  std::string values;
  auto* sweep_cmd = app.add_subcommand("sweep", "repeat an experiment over a parameter");
  sweep_cmd->add_option("config", config_path, "key=value configuration file")->required();
  sweep_cmd->add_option("--param", param, "N or cnt_pair")->required();
  sweep_cmd->add_option("--values", values, "3..11, 3,5,8 or 24:50,48:100")->required();
  sweep_cmd->add_option("--output-root", output_root, "directory for relative 'out' paths");

  CLI11_PARSE(app, argc, argv);

  try {
    namespace ex = bernoulli::experiment;
    ex::RunOptions options;
    options.output_root = output_root;
    options.dump_mesh_iters = parse_iter_list(dump_mesh, options.dump_final_mesh);
    const auto cfg = bernoulli::config::load_config(config_path);
    if (run_cmd->parsed()) {
      const auto r = ex::run(cfg, options);
      std::cout << "wrote " << r.out_dir.string() << "\n";
      if (cfg.mode == bernoulli::config::RunMode::Optimize) {
        std::cout << "initial_error " << r.initial_error << "  NoI " << r.iterations << "  final_error "
                  << r.final_error << "  (" << r.stop_reason << ")\n";
      }
      return 0;
    }
    const auto p = ex::parse_sweep_param(param);
    const auto rows = ex::sweep(cfg, p, ex::parse_sweep_values(p, values), options);
    int failures = 0;
    for (const auto& row : rows) {
      std::cout << param << '=' << row.value << ": ";
      if (row.status == "ok") {
        std::cout << row.result.initial_error << ' ' << row.result.iterations << ' ' << row.result.final_error << '\n';
      } else {
        std::cout << "FAILED " << row.status << '\n';
        ++failures;
      }
    }
    return failures == 0 ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
