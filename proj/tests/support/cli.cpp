#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace nvcap::testing {

std::filesystem::path cli_path() { return NVCAP_CLI_PATH; }

int run_cli(const std::string& args, const std::filesystem::path& work) {
    std::filesystem::create_directories(work);
    const std::string cmd = "cd '" + work.string() + "' && '" + cli_path().string() + "' " + args + " >'" +
                            (work / "stdout.txt").string() + "' 2>'" + (work / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("nvcap_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace nvcap::testing
