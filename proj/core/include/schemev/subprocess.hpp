// Minimal child-process runner (argv exec, no shell). Used to drive the
// version-control tool; exposed for tests that exercise CLI exit codes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace schemev {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] with the given arguments, feeding `stdin_data` (if any) and
// capturing stdout/stderr. `extra_env` entries override the inherited
// environment. Throws ToolInvocationError when the process cannot be
// spawned; a nonzero exit is reported via exit_code, not thrown.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_data = {},
                          const std::map<std::string, std::string>& extra_env = {});

}  // namespace schemev
