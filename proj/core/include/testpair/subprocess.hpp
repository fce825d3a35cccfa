// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace testpair {

// Conventional timeout exit status; paired with timed_out = true.
inline constexpr int kTimeoutExitCode = 124;

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
  double duration_secs = 0.0;
  bool timed_out = false;
};

// Runs argv in cwd with a minimal allowlisted environment (PATH, HOME,
// TMPDIR plus deterministic Python defaults) extended by `env`. The child
// gets its own process group and the whole group is killed on timeout.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd,
                          const std::map<std::string, std::string>& env,
                          int timeout_secs);

}  // namespace testpair
