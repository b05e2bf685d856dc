#include <CLI11.hpp>

#include <cstdlib>
#include <string>

#include "qtf/commands.hpp"

namespace {

int threads_from_env() {
    const char* env = std::getenv("QTF_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qtflow: pseudo-spectral Q-tensor / Navier-Stokes toolkit"};
    app.require_subcommand(1);

    qtf::CommonOptions common;
    common.threads = threads_from_env();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "run configuration file")
            ->required();
        cmd->add_option("--seed", common.seed, "override the initial-data seed");
        cmd->add_option("--out", common.out_dir, "output directory override");
        cmd->add_option("--threads", common.threads,
                        "worker thread count (recorded in outputs)");
        cmd->add_option("--override", common.overrides,
                        "config override section.key=value (repeatable)");
    };

    auto* simulate = app.add_subcommand("simulate", "advance the coupled system");
    add_common(simulate);

    auto* twin = app.add_subcommand(
        "twin", "co-advance two states and monitor the uniqueness functional");
    add_common(twin);
    qtf::TwinOptions twin_opt;
    twin->add_option("--perturb-amplitude", twin_opt.perturb_amplitude,
                     "L2 size of the second twin's initial perturbation");
    twin->add_option("--perturb-seed", twin_opt.perturb_seed,
                     "seed for the perturbation field");
    twin->add_option("--perturb-target", twin_opt.perturb_target,
                     "which field to perturb: Q, u, or both")
        ->check(CLI::IsMember({"Q", "u", "both"}));

    auto* audit = app.add_subcommand("audit", "run an analysis audit");
    add_common(audit);
    std::string audit_kind = "lyapunov";
    int audit_seeds = 20;
    audit->add_option("kind", audit_kind, "lyapunov | uniqueness | scaling | energy")
        ->required()
        ->check(CLI::IsMember({"lyapunov", "uniqueness", "scaling", "energy"}));
    audit->add_option("--seeds", audit_seeds, "number of random snapshots");

    auto* lp = app.add_subcommand("lp-check", "statistical inequality checks");
    std::string lp_name;
    int lp_grid = 64;
    int lp_trials = 100;
    std::uint64_t lp_seed = 1;
    std::string lp_out = "out";
    std::string lp_thresholds;
    lp->add_option("check", lp_name,
                   "bernstein | commutator | product-law | sqrtN | L2p")
        ->required();
    lp->add_option("--grid", lp_grid, "points per axis");
    lp->add_option("--trials", lp_trials, "number of random trials");
    lp->add_option("--seed", lp_seed, "base seed");
    lp->add_option("--out", lp_out, "output directory");
    lp->add_option("--thresholds", lp_thresholds,
                   "threshold file (defaults to built-in frozen table)");
    double lp_s = 0.5, lp_t = 0.5;
    lp->add_option("--s", lp_s, "product-law regularity s (|s| < d/2)");
    lp->add_option("--t", lp_t, "product-law regularity t (s + t > 0)");

    auto* info = app.add_subcommand("snapshot-info", "print a snapshot header");
    std::string info_path;
    info->add_option("path", info_path, "snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) return qtf::cmd_simulate(common);
    if (twin->parsed()) return qtf::cmd_twin(common, twin_opt);
    if (audit->parsed()) return qtf::cmd_audit(common, audit_kind, audit_seeds);
    if (lp->parsed())
        return qtf::cmd_lp_check(lp_name, lp_grid, lp_trials, lp_seed, lp_out,
                                 lp_thresholds, lp_s, lp_t);
    if (info->parsed()) return qtf::cmd_snapshot_info(info_path);
    return 2;
}
