#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qtf {

// Exit codes: 0 ok, 2 usage/config error, 3 numerical abort, 4 audit failure.
struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;   // overrides [output] directory when nonempty
    std::uint64_t seed = 0;  // overrides [initial] seed when nonzero
    int threads = 1;       // recorded in run metadata
};

struct TwinOptions {
    double perturb_amplitude = 1e-6;
    std::uint64_t perturb_seed = 7;
    std::string perturb_target = "both";  // Q | u | both
};

int cmd_simulate(const CommonOptions& opt);
int cmd_twin(const CommonOptions& opt, const TwinOptions& twin);
int cmd_audit(const CommonOptions& opt, const std::string& kind, int seeds);
int cmd_lp_check(const std::string& check, int grid_n, int trials,
                 std::uint64_t seed, const std::string& out_dir,
                 const std::string& thresholds_path, double product_s = 0.5,
                 double product_t = 0.5);
int cmd_snapshot_info(const std::string& path);

}  // namespace qtf
