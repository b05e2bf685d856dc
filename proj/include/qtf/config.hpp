#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtf/model.hpp"
#include "qtf/solver.hpp"

namespace qtf {

// Run configuration parsed from sectioned key=value text (INI-like; '#' and
// ';' start comments). Unknown sections or keys are rejected.
struct RunConfig {
    // [grid]
    int d = 2;
    int n_axis = 64;
    double l_box = 1.0;
    // [model]
    ModelParams model;
    // [stepper]
    StepperConfig stepper;
    // [initial]
    std::string generator = "random-bandlimited";  // or taylor-green,
                                                   // uniaxial-stripe, snapshot
    std::uint64_t seed = 1;
    double amplitude_q = 0.1;
    double amplitude_u = 0.1;
    double slope = 2.0;
    int kmax = 0;
    int stripe_modulation = 1;
    double stripe_angle = 0.0;
    std::string snapshot_q;
    std::string snapshot_u;
    // [output]
    std::string out_dir = "out";
    int snapshot_cadence = 0;  // 0 = no snapshots

    void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

// FNV-1a over the canonicalized (sorted key=value) configuration; embedded in
// every output file for provenance. The [output] block is excluded so the
// hash identifies the run itself.
std::string config_hash(const RunConfig& cfg);

std::string canonical_config_text(const RunConfig& cfg);

// Build the initial state described by [initial] on the configured grid.
SimState make_initial_state(const RunConfig& cfg);

}  // namespace qtf
