#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcube {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConstraint = 3;

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "PCUBE_CONFIG";

/// Runs one `pcube` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcube
