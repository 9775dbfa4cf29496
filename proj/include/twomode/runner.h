#pragma once

#include <iosfwd>

#include "twomode/run_config.h"

namespace twomode {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSimulation = 3,
  kExitFitFailed = 4,
};

// Runs one plan and writes config.output_path. A one-line JSON summary goes to
// report. Fit output also lists the (x, y) points it used. Simulation failures
// still write what was produced, flagged as partial (a "partial" key in JSON,
// a <path>.partial note next to CSV).
int run(const RunConfig& config, std::ostream& report);

}  // namespace twomode
