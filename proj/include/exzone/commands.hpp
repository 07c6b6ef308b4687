#pragma once

#include <string>

#include "exzone/scenario.hpp"

namespace exzone::io {

// Command entry points shared by the CLI and the tests.  Each writes one or
// more headered CSV files under out_dir and returns the process exit code
// (0 ok, 2 infeasible optimization, 3 validation failure).
int cmd_analyze(const ScenarioFile& s, const std::string& out_dir, int threads = 0);
int cmd_simulate(const ScenarioFile& s, const std::string& out_dir, int threads = 0);
int cmd_optimize(const ScenarioFile& s, const std::string& out_dir, int threads = 0);
int cmd_validate(const ScenarioFile& s, const std::string& out_dir, int threads = 0);

}  // namespace exzone::io
