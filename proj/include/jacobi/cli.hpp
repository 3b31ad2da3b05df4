#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jacobi::cli {

inline constexpr const char* kToolName = "jacobi-lab";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kBadInput = 2, kDecayFailure = 3, kInstability = 4 };

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a(std::string_view data);

}  // namespace jacobi::cli
