#pragma once

namespace irs {

/// Entry point of the command-line tool (simulate / sweep / bounds / oracle).
/// Returns the process exit code: 0 on success, 2 for invalid usage or
/// config, 3 when a request exceeds a capacity limit.
int run_cli(int argc, char** argv);

}  // namespace irs
