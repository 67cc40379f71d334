// SPDX-License-Identifier: MIT
#pragma once

#include "config.hpp"
#include "output.hpp"

#include <iosfwd>

namespace cli {

// Each command fills `out` and returns true when every check it runs passes.
// Library failures surface as ApiError.
bool cmd_alpha_curve(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log);
bool cmd_verify(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log);
bool cmd_simulate(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log);
bool cmd_zeta_sweep(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log);
bool cmd_ic_audit(const ExperimentConfig& cfg, OutputSet& out, std::ostream& log);

} // namespace cli
