// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <nlohmann/json.hpp>

#include "floqmap/units.hpp"

namespace floqmap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error("config error at " + where + ": " + what);
}

double require_number(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!j[key].is_number()) fail(where, std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!j[key].is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

}  // namespace

LoadedConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
        fail("$", "'modes' must be a non-empty array");

    std::vector<ModeSpec> modes;
    for (size_t i = 0; i < j["modes"].size(); ++i) {
        const auto& jm = j["modes"][i];
        const std::string where = "modes[" + std::to_string(i) + "]";
        ModeSpec m;
        m.label = require_string(jm, where, "label");
        m.freq = require_number(jm, where, "freq_GHz") * units::GHz;
        m.anharm = require_number(jm, where, "anharm_MHz") * units::MHz;
        m.levels = jm.value("levels", 4);
        m.tunable = jm.value("tunable", false);
        modes.push_back(std::move(m));
    }

    std::vector<CouplingSpec> couplings;
    if (j.contains("couplings")) {
        if (!j["couplings"].is_array()) fail("$", "'couplings' must be an array");
        for (size_t i = 0; i < j["couplings"].size(); ++i) {
            const auto& jc = j["couplings"][i];
            const std::string where = "couplings[" + std::to_string(i) + "]";
            CouplingSpec c;
            const std::string a = require_string(jc, where, "a");
            const std::string b = require_string(jc, where, "b");
            auto find = [&](const std::string& lbl) {
                for (size_t m = 0; m < modes.size(); ++m)
                    if (modes[m].label == lbl) return static_cast<int>(m);
                fail(where, "unknown mode label '" + lbl + "'");
            };
            c.a = find(a);
            c.b = find(b);
            c.strength = require_number(jc, where, "J_MHz") * units::MHz;
            couplings.push_back(c);
        }
    }

    System system(std::move(modes), std::move(couplings));

    std::optional<DriveSpec> drive;
    if (j.contains("drive") && !j["drive"].is_null()) {
        const auto& jd = j["drive"];
        DriveSpec d;
        d.mode = system.mode_index(require_string(jd, "drive", "target"));
        d.amplitude = require_number(jd, "drive", "eps_MHz") * units::MHz;
        d.frequency = require_number(jd, "drive", "fp_MHz") * units::MHz;
        d.phase = jd.value("phase_rad", 0.0);
        if (d.frequency <= 0.0) fail("drive", "'fp_MHz' must be > 0");
        drive = d;
    }
    return LoadedConfig{std::move(system), drive};
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const System& system, const std::optional<DriveSpec>& drive) {
    json j;
    j["modes"] = json::array();
    for (const auto& m : system.modes()) {
        j["modes"].push_back({{"label", m.label},
                              {"freq_GHz", units::to_GHz(m.freq)},
                              {"anharm_MHz", units::to_MHz(m.anharm)},
                              {"levels", m.levels},
                              {"tunable", m.tunable}});
    }
    j["couplings"] = json::array();
    for (const auto& c : system.couplings()) {
        j["couplings"].push_back({{"a", system.mode(c.a).label},
                                  {"b", system.mode(c.b).label},
                                  {"J_MHz", units::to_MHz(c.strength)}});
    }
    if (drive) {
        j["drive"] = {{"target", system.mode(drive->mode).label},
                      {"eps_MHz", units::to_MHz(drive->amplitude)},
                      {"fp_MHz", units::to_MHz(drive->frequency)},
                      {"phase_rad", drive->phase}};
    }
    return j.dump(2);
}

std::string format_number(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i)
        out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace floqmap
