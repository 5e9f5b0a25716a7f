#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sramlab/aging.hpp"
#include "sramlab/timeutil.hpp"

namespace sramlab {

/// Full campaign + model configuration. Serialized flat (keys mu_m, s_m,
/// delta, n, seed, cycles_per_epoch, epochs, ...) so a manifest is a
/// superset of a config file and can be fed back in directly.
struct SimulationConfig {
    std::size_t devices = 16;
    std::size_t n = 8192;
    int epochs = 25;              ///< evaluation points 0..epochs-1
    int cycles_per_epoch = 5000;
    int window = 1000;            ///< consecutive measurements per evaluation window
    std::uint64_t seed = 20170208;
    CivilDate start_date{2017, 2, 8};
    int sample_day = 8;           ///< day-of-month the sampling policy anchors on
    ModelParams model;
    std::size_t flush_every = 1000;
    int threads = 1;

    std::uint64_t total_rounds() const {
        return static_cast<std::uint64_t>(epochs - 1) * cycles_per_epoch + window;
    }
    std::uint64_t total_records() const { return total_rounds() * devices; }

    void validate() const;

    nlohmann::ordered_json to_json() const;
    /// Unknown keys are ignored, so manifests load as configs.
    static SimulationConfig from_json(const nlohmann::json& doc);

    static SimulationConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

} // namespace sramlab
