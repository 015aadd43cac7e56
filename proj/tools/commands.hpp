#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace diracmech::cli {

// Exit codes: 0 success, 2 config error, 3 solver failure, 4 audit failure.
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
int cmd_converge(const RunConfig& cfg, const std::vector<std::size_t>& Ns,
                 const std::string& out_dir);
int cmd_compare(const RunConfig& cfg, const std::string& out_dir);
int cmd_check(const RunConfig& cfg, const std::string& out_dir);

std::string resolve_out_path(const std::string& path, const std::string& out_dir);

}  // namespace diracmech::cli
