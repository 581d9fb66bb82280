#pragma once

#include <cstdint>
#include <string>

namespace drest::cli {

/// Parses and dispatches one command line. Returns the process exit code for
/// usage problems CLI11 reports itself (including --help); anything else is
/// signalled by exception: std::invalid_argument for bad arguments or
/// configs, other exceptions for runtime/IO failures.
int run(int argc, const char* const* argv);

/// FNV-1a 64-bit hash of a file's bytes, used to fingerprint run inputs.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace drest::cli
