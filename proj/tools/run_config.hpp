#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracmech/integrator.hpp"
#include "diracmech/systems.hpp"

namespace diracmech::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SystemKind { charged_particle, double_pendulum, custom_linear };

struct OutputConfig {
  std::string csv_path = "out.csv";
  std::optional<std::string> svg_path;
  std::vector<int> svg_coords;  // shape coordinates to plot, one file each
  bool diagnostics = true;
};

struct InitialOverride {
  std::optional<Vector> x0, g0, w0, mu0;
};

struct CustomLinearParams {
  Eigen::Index dim_sigma = 2;
  Eigen::Index dim_g = 1;
  Matrix mass;       // dim_q x dim_q, SPD
  Matrix stiffness;  // dim_sigma x dim_sigma, symmetric
  Matrix H;          // dim_g x dim_sigma
};

struct RunConfig {
  SystemKind system = SystemKind::charged_particle;
  Variant variant = Variant::plus;
  double T = 20.0;
  std::size_t N = 100;
  ChargedParticleParams charged;
  PendulumParams pendulum;
  CustomLinearParams custom;
  InitialOverride initial;
  NewtonConfig solver;
  OutputConfig outputs;
  unsigned seed = 0;
  std::vector<std::size_t> Ns;  // cmd_converge step counts

  double h() const { return T / double(N); }
};

RunConfig load_config(const std::string& path);

/// Instantiate the configured system with h = T/N and any initial overrides.
SystemSetup build_system(const RunConfig& cfg);

}  // namespace diracmech::cli
