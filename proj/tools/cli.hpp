#pragma once
// Command-line front end; main() is a thin wrapper so tests can drive run().

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace softecm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // unexpected runtime error
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitSweepFailed = 4;

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Recomputes every input digest in a manifest. Returns false and fills
/// `problem` on the first mismatch or unreadable input.
bool verify_manifest(const std::filesystem::path& manifest, std::string* problem = nullptr);

}  // namespace softecm::cli
