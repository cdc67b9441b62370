#pragma once

// Command-line front end: gen | eval | stats | train | compare.

#include <iosfwd>
#include <string>
#include <vector>

namespace l2e::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Default output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "L2E_OUT_DIR";

/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l2e::cli
