#pragma once

#include <filesystem>
#include <string>

namespace nvcap::testing {

std::filesystem::path cli_path();

// Runs the CLI with `args` (shell syntax); stdout and stderr go to files in
// `work`. Returns the exit status.
int run_cli(const std::string& args, const std::filesystem::path& work);

std::string read_file(const std::filesystem::path& path);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

} // namespace nvcap::testing
