// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Config ingestion and tabular output. System configs are JSON:
//
// {
//   "modes":     [{"label": "q1", "freq_GHz": 4.85, "anharm_MHz": -220,
//                  "levels": 4, "tunable": true}, ...],
//   "couplings": [{"a": "q1", "b": "q2", "J_MHz": 5.0}, ...],
//   "drive":     {"target": "q1", "eps_MHz": 276, "fp_MHz": 150,
//                 "phase_rad": 0.0}            // optional
// }
//
// All file-facing numbers are ordinary frequencies (f = omega/2pi).

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "floqmap/model.hpp"

namespace floqmap {

struct LoadedConfig {
    System system;
    std::optional<DriveSpec> drive;
};

// Parse a config from a JSON string or file; throws std::runtime_error with a
// field diagnostic on malformed input.
LoadedConfig parse_config(const std::string& json_text);
LoadedConfig load_config(const std::string& path);

// Serialize back to the schema above (drive included when present).
std::string config_to_json(const System& system, const std::optional<DriveSpec>& drive);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_number(double x);

// Minimal CSV emitter: header fixed at construction, one row per call,
// numbers via format_number.
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    static std::string cell(double x) { return format_number(x); }

  private:
    std::ostream& out_;
    size_t width_;
};

}  // namespace floqmap
