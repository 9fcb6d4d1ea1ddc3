// Subcommand implementations shared by the CLI and the test suites.

#pragma once

#include "catlift/config.hpp"
#include "catlift/emit.hpp"

namespace catlift::io {

// One row per configured set-up with every derived comparison quantity:
// ground-state spread, couplings, optimal time, protocol times, maximum
// superposition, and the decoherence/precision bounds evaluated there.
Table cmd_table(const ScenarioConfig& cfg);

// Branch first moments and covariance along the expansion protocol.
Table cmd_trajectory(const ScenarioConfig& cfg);

// Wigner grids of the two branches and their equal-weight mixture at the
// requested protocol times.
Table cmd_wigner(const ScenarioConfig& cfg);

// Force-sensing phase sweep over the expansion time, both published routes.
Table cmd_force(const ScenarioConfig& cfg);

// PPT eigenvalue and witness sweep over the expansion time; adds a dephased
// column when a qubit rate is configured.
Table cmd_gie(const ScenarioConfig& cfg);

// Switching-jitter visibility (analytic and Monte Carlo) plus the
// operational-precision bounds.
Table cmd_robustness(const ScenarioConfig& cfg);

// Dispatch by subcommand name; throws on unknown names.
Table run_command(const std::string& name, const ScenarioConfig& cfg);

}  // namespace catlift::io
