#pragma once

namespace qimg {

// Entry point behind the command line binary. Returns the process exit code:
// 0 success, 1 failed check, 2 usage / input error, 3 timeout.
int run_cli(int argc, char** argv);

}  // namespace qimg
