#pragma once

namespace qhahn {

// Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or
// parameter error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, char** argv);

}  // namespace qhahn
