#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sramlab/pattern.hpp"
#include "sramlab/rng.hpp"

namespace sramlab {

/// Stochastic cell-population parameters. The noise scale is normalized
/// to 1, so mu_m, s_m, delta and drift states are all in noise-sigma units.
struct ModelParams {
    double mu_m = 5.569058;   ///< mean of the initial mismatch distribution
    double s_m = 17.163687;   ///< spread of the initial mismatch distribution
    double delta = 2.5e-6;    ///< drift budget per cycle (see aging_exponent)
    double drift_bias_spread = 2.1; ///< per-cell drift-rate bias spread (chi)
    double aging_exponent = 0.6;    ///< sublinear stress-time exponent (1 = constant rate)
    double aging_ref_cycles = 120000.0; ///< cycle count at which total drift equals delta*ref

    /// Cumulative unsigned drift budget after `cycles` power cycles.
    double cumulative_drift(double cycles) const;
    /// Magnitude applied by aging step number `cycle` (1-based).
    double step_magnitude(std::uint64_t cycle) const;
};

/// Read-only view of one cell's state.
struct CellPhysics {
    double m;           ///< manufacturing mismatch (fixed)
    double drift_state; ///< accumulated aging shift
    double drift_bias;  ///< per-cell drift-rate bias factor b
    double m_effective() const { return m + drift_state; }
};

/// One simulated SRAM: n cells plus a private RNG stream.
///
/// Cell i powers up to 1 iff m_effective[i] + noise > 0, noise ~ N(0,1)
/// fresh per cell per power-up. Each aging step moves drift_state by
/// lambda * (b - latched_sign): the feedback part pulls the cell toward
/// balance given the state it just latched, the bias part is the cell's
/// own fixed aging asymmetry.
class DevicePopulation {
public:
    DevicePopulation(std::string id, std::size_t n, const ModelParams& params,
                     std::uint64_t campaign_seed, std::uint64_t device_index);

    const std::string& id() const { return id_; }
    std::size_t n() const { return n_; }
    const ModelParams& params() const { return params_; }
    std::uint64_t cycles_aged() const { return cycle_; }

    CellPhysics cell(std::size_t i) const { return {m_[i], drift_[i], bias_[i]}; }

    /// Closed-form one-probability of cell i at the current state, Phi(m_eff).
    double expected_one_probability(std::size_t i) const;

    /// One read-out. Advances only the RNG stream.
    PowerUpPattern power_up();

    /// One aging step driven by the pattern the device just latched.
    void apply_aging(const PowerUpPattern& observed);

    /// Test hook: a device with hand-placed cells (same aging semantics).
    static DevicePopulation with_cells(std::string id, std::vector<double> m,
                                       std::vector<double> bias, const ModelParams& params,
                                       std::uint64_t seed);

private:
    DevicePopulation() = default;

    std::string id_;
    std::size_t n_ = 0;
    ModelParams params_;
    std::vector<double> m_;
    std::vector<double> drift_;
    std::vector<double> bias_;
    std::uint64_t cycle_ = 0;
    Rng rng_{0};
};

/// The 16 simulated boards of a campaign, in slave-id order
/// (S0..S7 on layer 0, S16..S23 on layer 1 for the default count).
std::vector<DevicePopulation> make_population(std::size_t device_count, std::size_t n,
                                              const ModelParams& params, std::uint64_t seed);

} // namespace sramlab
