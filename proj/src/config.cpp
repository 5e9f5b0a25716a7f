#include "sramlab/config.hpp"

#include <fstream>

#include "sramlab/errors.hpp"

namespace sramlab {

void SimulationConfig::validate() const {
    if (devices < 1) throw ConfigError("devices must be >= 1");
    if (devices % 2 != 0) throw ConfigError("devices must be even (two equal board layers)");
    if (n == 0 || n % 8 != 0) throw ConfigError("n must be a positive multiple of 8");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (cycles_per_epoch < 1) throw ConfigError("cycles_per_epoch must be >= 1");
    if (window < 1 || window > cycles_per_epoch)
        throw ConfigError("window must be in [1, cycles_per_epoch]");
    if (sample_day < 1 || sample_day > 28) throw ConfigError("sample_day must be in [1, 28]");
    if (model.delta < 0) throw ConfigError("delta must be >= 0");
    if (model.s_m <= 0) throw ConfigError("s_m must be > 0");
    if (model.aging_exponent <= 0 || model.aging_exponent > 1)
        throw ConfigError("aging_exponent must be in (0, 1]");
    if (model.aging_ref_cycles <= 0) throw ConfigError("aging_ref_cycles must be > 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    // epoch windows sample the first hours of each simulated month; keep them there
    const double window_ms = static_cast<double>(cycles_per_epoch) * 5400.0;
    if (window_ms > 27.0 * 86400000.0)
        throw ConfigError("cycles_per_epoch too large: an epoch must fit inside one month");
}

nlohmann::ordered_json SimulationConfig::to_json() const {
    nlohmann::ordered_json doc;
    doc["devices"] = devices;
    doc["n"] = n;
    doc["epochs"] = epochs;
    doc["cycles_per_epoch"] = cycles_per_epoch;
    doc["window"] = window;
    doc["seed"] = seed;
    doc["start_date"] = format_civil_date(start_date);
    doc["sample_day"] = sample_day;
    doc["mu_m"] = model.mu_m;
    doc["s_m"] = model.s_m;
    doc["delta"] = model.delta;
    doc["drift_bias_spread"] = model.drift_bias_spread;
    doc["aging_exponent"] = model.aging_exponent;
    doc["aging_ref_cycles"] = model.aging_ref_cycles;
    doc["flush_every"] = flush_every;
    doc["threads"] = threads;
    return doc;
}

SimulationConfig SimulationConfig::from_json(const nlohmann::json& doc) {
    SimulationConfig cfg;
    const auto get = [&](const char* key, auto& out) {
        if (doc.contains(key)) out = doc.at(key).get<std::decay_t<decltype(out)>>();
    };
    get("devices", cfg.devices);
    get("n", cfg.n);
    get("epochs", cfg.epochs);
    get("cycles_per_epoch", cfg.cycles_per_epoch);
    get("window", cfg.window);
    get("seed", cfg.seed);
    get("sample_day", cfg.sample_day);
    get("mu_m", cfg.model.mu_m);
    get("s_m", cfg.model.s_m);
    get("delta", cfg.model.delta);
    get("drift_bias_spread", cfg.model.drift_bias_spread);
    get("aging_exponent", cfg.model.aging_exponent);
    get("aging_ref_cycles", cfg.model.aging_ref_cycles);
    get("flush_every", cfg.flush_every);
    get("threads", cfg.threads);
    if (doc.contains("start_date"))
        cfg.start_date = parse_civil_date(doc.at("start_date").get<std::string>());
    cfg.validate();
    return cfg;
}

SimulationConfig SimulationConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    try {
        return from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void SimulationConfig::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file '" + path + "'");
    out << to_json().dump(2) << "\n";
}

} // namespace sramlab
