#include "sramlab/aging.hpp"

#include <cmath>

#include "sramlab/errors.hpp"
#include "sramlab/normal.hpp"

namespace sramlab {

namespace {

// Beyond this margin the latch outcome is treated as deterministic and no
// noise draw is consumed; Phi(-7) ~ 1.3e-12, far below any metric tolerance.
constexpr double kDeterministicMargin = 7.0;

} // namespace

double ModelParams::cumulative_drift(double cycles) const {
    if (cycles <= 0.0) return 0.0;
    if (aging_exponent == 1.0) return delta * cycles;
    return delta * aging_ref_cycles * std::pow(cycles / aging_ref_cycles, aging_exponent);
}

double ModelParams::step_magnitude(std::uint64_t cycle) const {
    if (aging_exponent == 1.0) return delta;
    return cumulative_drift(static_cast<double>(cycle)) -
           cumulative_drift(static_cast<double>(cycle - 1));
}

DevicePopulation::DevicePopulation(std::string id, std::size_t n, const ModelParams& params,
                                   std::uint64_t campaign_seed, std::uint64_t device_index)
    : id_(std::move(id)), n_(n), params_(params), rng_(Rng::stream(campaign_seed, device_index)) {
    if (n == 0) throw ConfigError("device needs at least one cell");
    if (params.s_m <= 0.0) throw ConfigError("s_m must be positive");
    m_.resize(n);
    drift_.assign(n, 0.0);
    bias_.resize(n);
    // draw order is part of the replay contract: all mismatches, then all biases
    for (std::size_t i = 0; i < n; ++i)
        m_[i] = params.mu_m + params.s_m * rng_.next_gaussian();
    for (std::size_t i = 0; i < n; ++i)
        bias_[i] = params.drift_bias_spread * rng_.next_gaussian();
}

DevicePopulation DevicePopulation::with_cells(std::string id, std::vector<double> m,
                                              std::vector<double> bias,
                                              const ModelParams& params, std::uint64_t seed) {
    if (m.empty() || m.size() != bias.size())
        throw ConfigError("hand-placed device needs equal, nonempty m and bias vectors");
    DevicePopulation d;
    d.id_ = std::move(id);
    d.n_ = m.size();
    d.params_ = params;
    d.m_ = std::move(m);
    d.bias_ = std::move(bias);
    d.drift_.assign(d.n_, 0.0);
    d.rng_ = Rng::stream(seed, 0);
    return d;
}

double DevicePopulation::expected_one_probability(std::size_t i) const {
    return normal_cdf(m_[i] + drift_[i]);
}

PowerUpPattern DevicePopulation::power_up() {
    PatternBuilder out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double meff = m_[i] + drift_[i];
        bool bit;
        if (meff > kDeterministicMargin)
            bit = true;
        else if (meff < -kDeterministicMargin)
            bit = false;
        else
            bit = (meff + rng_.next_gaussian()) > 0.0;
        if (bit) out.set(i, true);
    }
    return std::move(out).build();
}

void DevicePopulation::apply_aging(const PowerUpPattern& observed) {
    if (observed.size() != n_)
        throw LengthMismatchError("aging pattern length " + std::to_string(observed.size()) +
                                  " does not match device cell count " + std::to_string(n_));
    const double lambda = params_.step_magnitude(cycle_ + 1);
    const auto& words = observed.words();
    for (std::size_t i = 0; i < n_; ++i) {
        const double latched_sign = ((words[i >> 6] >> (i & 63)) & 1u) ? 1.0 : -1.0;
        drift_[i] += lambda * (bias_[i] - latched_sign);
    }
    ++cycle_;
}

std::vector<DevicePopulation> make_population(std::size_t device_count, std::size_t n,
                                              const ModelParams& params, std::uint64_t seed) {
    if (device_count == 0) throw ConfigError("device count must be >= 1");
    std::vector<DevicePopulation> devices;
    devices.reserve(device_count);
    const std::size_t half = (device_count + 1) / 2;
    for (std::size_t i = 0; i < device_count; ++i) {
        // paper-style slave ids: layer 0 is S0..., layer 1 starts at S16
        const std::size_t label = i < half ? i : 16 + (i - half);
        devices.emplace_back("S" + std::to_string(label), n, params, seed, i);
    }
    return devices;
}

} // namespace sramlab
