#pragma once
// Command-line front end. `run` is the whole program minus process plumbing so
// tests can drive it in-process.
//
// Exit codes: 0 success, 2 configuration / validation / usage error, 3 I/O
// error, 4 insufficient data, 1 anything else.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace kljn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInsufficientData = 4;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `contents` to `path` through a temporary file and a rename.
/// Throws IoError.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace kljn::cli
