#pragma once

#include <string>

#include "trawlkit/montecarlo.hpp"
#include "trawlkit/simulator.hpp"

namespace trawlkit {

/// JSON configuration. A simulation config looks like
///
///   {"trawl": {"kind": "exp", "lambda": 1.0},
///    "marginal": {"kind": "negbin", "theta": 0.2},
///    "delta": 0.1, "n": 10000, "rng_seed": 42}
///
/// The seed law may also be given as an object under "seed", and the RNG
/// seed as an integer "seed". Study cells add "runs", "report",
/// "targets", "statistics", "slices", "levels", "subset_of",
/// "grid_centering", "N_n" and "K_n"; see README.md.
[[nodiscard]] TrawlSpec parse_trawl_json(const std::string& json_text);
[[nodiscard]] SeedSpec parse_seed_json(const std::string& json_text);
[[nodiscard]] SimConfig parse_sim_config(const std::string& json_text);
[[nodiscard]] StudyCell parse_study_cell(const std::string& json_text);

/// Reads a whole file; throws ParseError when it cannot be opened.
[[nodiscard]] std::string read_text_file(const std::string& path);

}  // namespace trawlkit
