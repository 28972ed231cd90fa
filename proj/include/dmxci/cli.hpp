#pragma once

#include <string>
#include <vector>

namespace dmxci {

// Exit codes: 0 success, 2 validation/config error, 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;        // empty = config's output.directory
    std::uint64_t seed = 0;     // 0 = config's seed
    bool seed_set = false;
    std::string scale;          // empty = config's scale
    int workers = 0;            // 0 = env DMXCI_WORKERS or hardware
};

int cmd_run(const CommonOpts& opts, const std::string& mode, const std::string& snapshot_dir);
int cmd_matrix(const CommonOpts& opts);
int cmd_gn(const CommonOpts& opts);
int cmd_dispersion_map(const CommonOpts& opts);
int cmd_scatter(const CommonOpts& opts, const std::string& traces_path);
int cmd_analyze(const CommonOpts& opts, const std::string& traces_path);

int run_cli(int argc, const char* const* argv);

} // namespace dmxci
