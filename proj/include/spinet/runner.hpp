// Experiment orchestration behind the CLI: dispatches a validated
// configuration to the matching pipeline and writes CSV/JSON artifacts plus a
// manifest sufficient to re-run it.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spinet/config.hpp"

namespace spinet {

inline constexpr const char* kVersion = "0.1.0";

// Returns 0 on success, 2 on configuration errors, 3 on numeric instability.
// Progress and errors go to `log`.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant suite behind the `validate` mode.
std::vector<ValidationCheck> run_validation_checks();

}  // namespace spinet
