#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasesync::cli {

/// Runs one `phasesync` invocation. `args` excludes the program name.
/// Returns the process exit code; 0 iff every output was written.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker-count environment variable read by `sync` and `sweep`.
inline constexpr const char* kWorkersEnv = "PHASESYNC_WORKERS";

}  // namespace phasesync::cli
