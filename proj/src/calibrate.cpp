#include "sramlab/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "sramlab/errors.hpp"
#include "sramlab/normal.hpp"

namespace sramlab {

namespace {

// Quadrature over the mismatch axis: Simpson on [-14, 14]. Every transition
// kernel is flat (0 or saturated) outside a few sigma of the origin, and no
// cell can drift from beyond 14 into the transition zone over any sane
// campaign, so the tails contribute only saturated terms.
constexpr double kMLo = -14.0, kMHi = 14.0;
constexpr int kMNodes = 561; // odd, h = 0.05
constexpr int kBNodes = 41;  // odd, Simpson over [-5chi, 5chi]
constexpr int kOdeSteps = 96;

struct Quadrature {
    std::vector<double> x, w;
};

Quadrature simpson_nodes(double lo, double hi, int count) {
    Quadrature q;
    q.x.resize(count);
    q.w.resize(count);
    const double h = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        q.x[i] = lo + h * i;
        double c = (i == 0 || i == count - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        q.w[i] = c * h / 3.0;
    }
    return q;
}

double normal_pdf(double x, double mu, double s) {
    const double z = (x - mu) / s;
    return 0.3989422804014326779 / s * std::exp(-0.5 * z * z);
}

// p^S + (1-p)^S: probability that a window of S reads is all-same.
double window_stable_prob(double p, int S) {
    double acc = 0.0;
    if (p > 0.0) acc += std::exp(S * std::log(p));
    if (p < 1.0) acc += std::exp(S * std::log1p(-p));
    return std::min(acc, 1.0);
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// mean drift velocity at mismatch m under bias b
double drift_rhs(double m, double b) { return 1.0 - 2.0 * normal_cdf(m) + b; }

// RK4 on the full node vector at once
void evolve(std::vector<double>& m, double b, double tau) {
    if (tau <= 0.0) return;
    const double h = tau / kOdeSteps;
    const std::size_t n = m.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n);
    for (int step = 0; step < kOdeSteps; ++step) {
        for (std::size_t i = 0; i < n; ++i) k1[i] = drift_rhs(m[i], b);
        for (std::size_t i = 0; i < n; ++i) k2[i] = drift_rhs(m[i] + 0.5 * h * k1[i], b);
        for (std::size_t i = 0; i < n; ++i) k3[i] = drift_rhs(m[i] + 0.5 * h * k2[i], b);
        for (std::size_t i = 0; i < n; ++i) k4[i] = drift_rhs(m[i] + h * k3[i], b);
        for (std::size_t i = 0; i < n; ++i)
            m[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

} // namespace

double window_noise_entropy(double p, int window) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    const int S = window;
    const double sd = std::sqrt(S * p * (1.0 - p));
    const int lo = std::max(0, static_cast<int>(S * p - 10.0 * sd) - 2);
    const int hi = std::min(S, static_cast<int>(S * p + 10.0 * sd) + 2);
    const double lf_s = log_factorial(S);
    const double lp = std::log(p), lq = std::log1p(-p);
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) {
        const double logpmf = lf_s - log_factorial(k) - log_factorial(S - k) + k * lp + (S - k) * lq;
        const int majority = std::max(k, S - k);
        if (majority == S) continue;
        acc += std::exp(logpmf) * -std::log2(static_cast<double>(majority) / S);
    }
    return acc;
}

AgingForwardModel::AgingForwardModel(int window) : window_(window) {
    if (window < 1) throw ConfigError("forward model window must be >= 1");
}

QualityPoint AgingForwardModel::predict_start(double mu, double s) const {
    const Quadrature q = simpson_nodes(kMLo, kMHi, kMNodes);
    const double tail_hi = normal_cdf((mu - kMHi) / s);        // mass above +14, p = 1
    const double tail_lo = normal_cdf((kMLo - mu) / s);        // mass below -14, p = 0
    QualityPoint out;
    for (int i = 0; i < kMNodes; ++i) {
        const double d = normal_pdf(q.x[i], mu, s) * q.w[i];
        const double p = normal_cdf(q.x[i]);
        out.fhw += d * p;
        out.wchd += d * 2.0 * p * (1.0 - p);
        out.stable += d * window_stable_prob(p, window_);
        out.noise += d * window_noise_entropy(p, window_);
    }
    out.fhw += tail_hi;
    out.stable += tail_hi + tail_lo;
    out.wchd *= static_cast<double>(window_ - 1) / window_; // window mean includes the reference
    return out;
}

QualityPoint AgingForwardModel::predict_aged(double mu, double s, double chi,
                                             double total_drift) const {
    if (total_drift <= 0.0) return predict_start(mu, s);
    const Quadrature qm = simpson_nodes(kMLo, kMHi, kMNodes);
    const double tail_hi = normal_cdf((mu - kMHi) / s);
    const double tail_lo = normal_cdf((kMLo - mu) / s);

    Quadrature qb;
    if (chi <= 0.0) {
        qb.x = {0.0};
        qb.w = {1.0};
    } else {
        qb = simpson_nodes(-5.0 * chi, 5.0 * chi, kBNodes);
        double mass = 0.0;
        for (int j = 0; j < kBNodes; ++j) {
            qb.w[j] *= normal_pdf(qb.x[j], 0.0, chi);
            mass += qb.w[j];
        }
        for (auto& w : qb.w) w /= mass;
    }

    std::vector<double> dens(kMNodes), p0(kMNodes);
    for (int i = 0; i < kMNodes; ++i) {
        dens[i] = normal_pdf(qm.x[i], mu, s) * qm.w[i];
        p0[i] = normal_cdf(qm.x[i]);
    }

    QualityPoint out;
    for (std::size_t j = 0; j < qb.x.size(); ++j) {
        std::vector<double> m = qm.x;
        evolve(m, qb.x[j], total_drift);
        for (int i = 0; i < kMNodes; ++i) {
            const double d = dens[i] * qb.w[j];
            const double pt = normal_cdf(m[i]);
            out.fhw += d * pt;
            out.wchd += d * (p0[i] * (1.0 - pt) + (1.0 - p0[i]) * pt);
            out.stable += d * window_stable_prob(pt, window_);
            out.noise += d * window_noise_entropy(pt, window_);
        }
    }
    // tail cells move by at most (1+5chi)*drift, far from the transition zone
    out.fhw += tail_hi;
    out.stable += tail_hi + tail_lo;
    return out;
}

CalibrationResult calibrate(const CalibrationTargets& targets, const CalibrationOptions& options) {
    const AgingForwardModel model(targets.window);
    const double z_fhw = normal_quantile(targets.fhw);
    const auto mu_of = [&](double s) { return z_fhw * std::sqrt(1.0 + s * s); };

    const auto start_objective = [&](double s) {
        const QualityPoint p = model.predict_start(mu_of(s), s);
        const double rw = (p.wchd - targets.wchd) / targets.wchd;
        const double rs = (p.stable - targets.stable) / (1.0 - targets.stable);
        const double rn = (p.noise - targets.noise) / targets.noise;
        return rw * rw + rs * rs + rn * rn;
    };

    // stage A: coarse grid on the spread, then golden-section refinement
    double best_s = 8.0, best_f = start_objective(8.0);
    for (double s = 10.0; s <= 48.0; s += 2.0) {
        const double f = start_objective(s);
        if (f < best_f) {
            best_f = f;
            best_s = s;
        }
    }
    const double s_fit = golden_min(start_objective, std::max(2.0, best_s - 2.0), best_s + 2.0, 40);
    const double mu_fit = mu_of(s_fit);
    const QualityPoint start = model.predict_start(mu_fit, s_fit);

    ModelParams params;
    params.mu_m = mu_fit;
    params.s_m = s_fit;
    params.aging_exponent = options.aging_exponent;
    params.aging_ref_cycles = targets.horizon_cycles > 0 ? targets.horizon_cycles : 120000.0;

    QualityPoint end = start;
    if (targets.horizon_cycles > 0.0) {
        const auto trend_objective = [&](double drift, double chi) {
            const QualityPoint p = model.predict_aged(mu_fit, s_fit, chi, drift);
            const double rw = (p.wchd / start.wchd - 1.0 - targets.rel_wchd) / 0.05;
            const double rs = (p.stable / start.stable - 1.0 - targets.rel_stable) / 0.015;
            const double rn = (p.noise / start.noise - 1.0 - targets.rel_noise) / 0.05;
            return rw * rw + rs * rs + rn * rn;
        };

        double best_drift = 0.3, best_chi = 2.0;
        double best = trend_objective(best_drift, best_chi);
        for (double drift : {0.15, 0.25, 0.35, 0.5}) {
            for (double chi : {0.0, 1.0, 1.8, 2.6}) {
                const double f = trend_objective(drift, chi);
                if (f < best) {
                    best = f;
                    best_drift = drift;
                    best_chi = chi;
                }
            }
        }
        for (int sweep = 0; sweep < 2; ++sweep) {
            best_drift = golden_min([&](double d) { return trend_objective(d, best_chi); },
                                    best_drift * 0.6, best_drift * 1.6, 18);
            best_chi = golden_min([&](double c) { return trend_objective(best_drift, c); },
                                  std::max(0.0, best_chi - 1.0), best_chi + 1.0, 18);
        }
        params.delta = best_drift / targets.horizon_cycles;
        params.drift_bias_spread = best_chi;
        end = model.predict_aged(mu_fit, s_fit, best_chi, best_drift);
    } else {
        params.delta = 0.0;
        params.drift_bias_spread = 0.0;
    }

    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "start FHW    %.5f (target %.5f, residual %+.5f)\n"
                  "start WCHD   %.5f (target %.5f, residual %+.5f)\n"
                  "start stable %.5f (target %.5f, residual %+.5f)\n"
                  "start noise  %.5f (target %.5f, residual %+.5f)\n"
                  "rel WCHD     %+.4f (target %+.4f)\n"
                  "rel stable   %+.4f (target %+.4f)\n"
                  "rel noise    %+.4f (target %+.4f)\n",
                  start.fhw, targets.fhw, start.fhw - targets.fhw,
                  start.wchd, targets.wchd, start.wchd - targets.wchd,
                  start.stable, targets.stable, start.stable - targets.stable,
                  start.noise, targets.noise, start.noise - targets.noise,
                  end.wchd / start.wchd - 1.0, targets.rel_wchd,
                  end.stable / start.stable - 1.0, targets.rel_stable,
                  end.noise / start.noise - 1.0, targets.rel_noise);
    const std::string residuals = buf;

    const bool start_ok = std::abs(start.fhw - targets.fhw) <= options.fhw_tol &&
                          std::abs(start.wchd - targets.wchd) <= options.wchd_tol &&
                          std::abs(start.stable - targets.stable) <= options.stable_tol &&
                          std::abs(start.noise - targets.noise) <= options.noise_tol;
    bool trend_ok = true;
    if (targets.horizon_cycles > 0.0) {
        trend_ok = std::abs(end.wchd / start.wchd - 1.0 - targets.rel_wchd) <= options.rel_wchd_tol &&
                   std::abs(end.stable / start.stable - 1.0 - targets.rel_stable) <=
                       options.rel_stable_tol &&
                   std::abs(end.noise / start.noise - 1.0 - targets.rel_noise) <= options.rel_noise_tol;
    }
    if (!start_ok || !trend_ok)
        throw CalibrationError("no parameter set within tolerance", residuals);

    return CalibrationResult{params, start, end, residuals};
}

} // namespace sramlab
