#pragma once

#include <string>
#include <vector>

namespace lagr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitSolver = 4;

// Runs one invocation of the tool; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace lagr
