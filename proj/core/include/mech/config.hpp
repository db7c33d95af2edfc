#pragma once

#include <string>

#include "mech/highway.hpp"
#include "mech/metrics.hpp"
#include "mech/topology.hpp"

namespace mech {

/// One compilation setup: architecture, highway shape, scheduling knobs,
/// error model, seed. Parsed from a sectioned key-value config file.
struct RunConfig {
    ChipletSpec chip;
    HighwayConfig highway;
    ErrorModel error_model;
    int min_targets = 2;
    uint64_t seed = 1;

    SchedulerConfig scheduler(bool use_highway = true) const {
        SchedulerConfig s;
        s.min_targets = min_targets;
        s.meas_depth = error_model.meas_depth;
        s.use_highway = use_highway;
        return s;
    }
};

/// Parses the flat sectioned key-value format:
///
///   [chiplet]
///   structure = square
///   chiplet_rows = 6
///   ...
///   [highway]
///   density_multiplier = 1
///   ...
///   [error_model]
///   ratio_cross = 7.4
///   ...
///   [run]
///   seed = 1
///   min_targets = 2
///
/// Unknown or malformed keys raise MechError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Renders a RunConfig back into the config format (for artifact dumps).
std::string config_to_text(const RunConfig& cfg);

}  // namespace mech
