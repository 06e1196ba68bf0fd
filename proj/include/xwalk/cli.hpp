#pragma once

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace xwalk {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2, kExitBackend = 3 };

// Entry point shared by the xwalk binary and the tests. `stop` is polled by
// the live loop (the binary wires it to SIGINT/SIGTERM).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>& stop);

}  // namespace xwalk
