#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace diracmech;
using namespace diracmech::cli;

int main(int argc, char** argv) {
  CLI::App app{"discrete Dirac mechanics with abelian symmetry reduction"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::size_t> steps;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "directory prefixed to relative output paths");
  };

  CLI::App* sim = app.add_subcommand("simulate", "integrate the reduced equations, emit CSV/SVG");
  add_common(sim);
  CLI::App* conv = app.add_subcommand("converge", "error-vs-steps study against the exact orbit");
  add_common(conv);
  conv->add_option("--steps", steps, "step counts (defaults to config Ns or 10,50,100,200)");
  CLI::App* comp = app.add_subcommand("compare", "reduced vs unreduced steppers, deviations and timings");
  add_common(comp);
  CLI::App* check = app.add_subcommand("check", "invariant and property audit suite");
  add_common(check);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (sim->parsed()) return cmd_simulate(cfg, out_dir);
    if (conv->parsed()) return cmd_converge(cfg, steps, out_dir);
    if (comp->parsed()) return cmd_compare(cfg, out_dir);
    if (check->parsed()) return cmd_check(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NoConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const SingularJacobianError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
