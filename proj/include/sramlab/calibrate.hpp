#pragma once

#include <string>

#include "sramlab/aging.hpp"

namespace sramlab {

/// The four start-state observables of a device population.
struct QualityPoint {
    double fhw = 0.0;
    double wchd = 0.0;
    double stable = 0.0;
    double noise = 0.0;
};

/// Expected window noise entropy -log2(max(k,S-k)/S) under k ~ Bin(S, p).
/// Used both by the calibration model and by tests as a closed-form check
/// against the simulator.
double window_noise_entropy(double p, int window);

/// Deterministic population-level forward model of the simulator:
/// quadrature over the initial mismatch distribution and the per-cell
/// drift-rate bias, with the mean drift ODE dm/dtau = 1 - 2*Phi(m) + b.
/// No RNG anywhere, so calibration is exactly reproducible.
class AgingForwardModel {
public:
    explicit AgingForwardModel(int window = 1000);

    /// Observables of a fresh population (no aging applied).
    QualityPoint predict_start(double mu, double s) const;

    /// Observables after a cumulative drift budget `total_drift`
    /// (= ModelParams::cumulative_drift at the evaluation cycle).
    /// WCHD is computed against a reference latched at drift 0.
    QualityPoint predict_aged(double mu, double s, double chi, double total_drift) const;

    int window() const { return window_; }

private:
    int window_;
};

struct CalibrationTargets {
    // start column
    double fhw = 0.6270;
    double wchd = 0.0249;
    double stable = 0.859;
    double noise = 0.0305;
    // relative changes over the campaign horizon (skipped if horizon == 0)
    double rel_wchd = 0.193;
    double rel_stable = -0.0249;
    double rel_noise = 0.193;
    double horizon_cycles = 120000.0;
    int window = 1000;
};

struct CalibrationOptions {
    double fhw_tol = 0.015;
    double wchd_tol = 0.004;
    double stable_tol = 0.015;
    double noise_tol = 0.005;
    double rel_wchd_tol = 0.05;
    double rel_stable_tol = 0.015;
    double rel_noise_tol = 0.05;
    double aging_exponent = 0.6; ///< passed through to the returned params
};

struct CalibrationResult {
    ModelParams params;
    QualityPoint predicted_start;
    QualityPoint predicted_end;
    std::string residual_report; ///< one line per observable: predicted vs target
};

/// Coarse grid search plus golden-section refinement:
/// stage A fits (mu_m, s_m) to the start column with mu pinned by the FHW
/// target, stage B fits (delta, drift_bias_spread) to the relative-change
/// targets. Throws CalibrationError (carrying the residuals) if the best
/// point misses any tolerance.
CalibrationResult calibrate(const CalibrationTargets& targets,
                            const CalibrationOptions& options = {});

} // namespace sramlab
