#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hjlab/hamiltonian.hpp"

namespace hjlab {

/// Resolve the Hamiltonian block (builtin id or expression + metadata) and run
/// the monotonicity spot check when u-monotonicity is asserted.
HamiltonianSpec hamiltonian_from_config(const nlohmann::json& config, std::uint64_t seed);

/// Fully-resolved copy of the run configuration (defaults materialized);
/// embedded in every emitted JSON document for reproducibility.
nlohmann::json materialize_config(const nlohmann::json& config, const std::string& subcommand,
                                  std::uint64_t seed);

int run_effective(const nlohmann::json& config, const std::string& out_dir, bool plot,
                  std::uint64_t seed, std::ostream& log);
int run_solve(const nlohmann::json& config, const std::string& out_dir, bool plot,
              std::uint64_t seed, std::ostream& log);
int run_mather(const nlohmann::json& config, const std::string& out_dir, bool plot,
               std::uint64_t seed, std::ostream& log);
int run_rate(const nlohmann::json& config, const std::string& out_dir, bool plot,
             std::uint64_t seed, std::ostream& log);
int run_examples(std::ostream& out);

/// Full argv-level entry point; maps ConfigError -> 1 and NumericalError -> 2.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hjlab
