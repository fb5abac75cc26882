#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nrot::cli {

inline constexpr std::string_view kToolName = "nrot";

/// Runs one subcommand. `args` excludes the program name. Data goes to
/// files or `out`; diagnostics go to `err`. Returns 0 on success, 1 on
/// usage, config, parse or validation errors, 2 on I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace nrot::cli
