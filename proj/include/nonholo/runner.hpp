#pragma once

#include <filesystem>
#include <string>

#include "nonholo/scenario.hpp"

#include "json.hpp"

namespace nonholo {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct StageSet {
    bool classify = false;
    bool spectrum = false;
    bool compat = false;
    bool simulate = false;
    bool compare = false; // implies simulate (trajectories are produced either way)

    static StageSet all() { return {true, true, true, true, true}; }
};

struct RunOutcome {
    std::filesystem::path dir;
    nlohmann::json manifest;
    nlohmann::json verdict;
};

/**
 * Execute the requested stages for one scenario and persist the artifacts:
 * manifest.json (scenario echo, output list, summary), verdict.json (full
 * numeric records), and one CSV per integrated trajectory with columns
 * t, q1..qN, qd1..qdN, multiplier, energy, drift at 17 significant digits.
 *
 * Identical scenario + seed produce byte-identical CSV and verdict files.
 * On a validation failure the manifest (with the error recorded) is the only
 * file written, and the error is rethrown.
 */
RunOutcome run_scenario(Scenario scenario, const std::filesystem::path& out_dir,
                        const StageSet& stages);

/// Render the stored results of a run directory as a text summary.
std::string report(const std::filesystem::path& run_dir);

/// UTC timestamp suitable for directory names (YYYYmmdd-HHMMSS).
std::string timestamp_compact();

} // namespace nonholo
