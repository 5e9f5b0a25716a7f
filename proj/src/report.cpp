#include "sramlab/report.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sramlab/errors.hpp"

namespace sramlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// |relative change| below this prints as "negligible"
constexpr double kNegligible = 1e-4;

std::string format_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
    return buf;
}

std::string format_signed_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.2f%%", v * 100.0);
    return buf;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "n/a";
    return format_pct(v);
}

} // namespace

void Histogram::add(double value) {
    if (value < 0.0) value = 0.0;
    std::size_t bin = static_cast<std::size_t>(value / bin_width);
    if (bin >= counts.size()) bin = counts.size() - 1;
    counts[bin]++;
    total++;
}

struct CampaignAnalyzer::DeviceState {
    std::string id;

    // enrollment reference: the first read-out seen for this device
    std::optional<PowerUpPattern> reference;

    // active window
    bool active = false;
    int active_epoch = -1;
    std::uint32_t count = 0;
    std::uint64_t expect_seq = 0;
    std::vector<std::uint32_t> one_counts;
    double fhw_sum = 0.0;
    double wchd_sum = 0.0;
    std::optional<PowerUpPattern> first_of_window;

    // timestamp-policy state
    bool anchor_ready = false;
    CivilDate anchor_date;
    InstantMs next_anchor_ms = 0;
    int next_epoch = 0;

    struct EpochResult {
        double wchd = kNaN, fhw = kNaN, stable = kNaN, noise = kNaN;
        std::uint32_t count = 0;
        std::optional<PowerUpPattern> first;
    };
    std::vector<EpochResult> results;
};

CampaignAnalyzer::CampaignAnalyzer(Options options) : options_(options) {
    if (options_.window < 1) throw ConfigError("analysis window must be >= 1");
    if (options_.cycles_per_epoch && *options_.cycles_per_epoch < std::uint64_t(options_.window))
        throw ConfigError("cycles_per_epoch must be >= window");
}

void CampaignAnalyzer::open_window(DeviceState& dev, int epoch) {
    dev.active = true;
    dev.active_epoch = epoch;
    dev.count = 0;
    dev.fhw_sum = 0.0;
    dev.wchd_sum = 0.0;
    dev.first_of_window.reset();
    if (dev.one_counts.size() != n_) dev.one_counts.assign(n_, 0);
    else std::fill(dev.one_counts.begin(), dev.one_counts.end(), 0);
}

void CampaignAnalyzer::close_window(DeviceState& dev) {
    if (!dev.active) return;
    DeviceState::EpochResult res;
    res.count = dev.count;
    if (dev.count > 0) {
        std::size_t stable = 0;
        double entropy = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::uint32_t c = dev.one_counts[i];
            if (c == 0 || c == dev.count) {
                ++stable;
            } else {
                const std::uint32_t majority = std::max(c, dev.count - c);
                entropy -= std::log2(static_cast<double>(majority) / dev.count);
            }
        }
        res.stable = static_cast<double>(stable) / static_cast<double>(n_);
        res.noise = entropy / static_cast<double>(n_);
        res.fhw = dev.fhw_sum / dev.count;
        res.wchd = dev.wchd_sum / dev.count;
        res.first = std::move(dev.first_of_window);
    }
    if (dev.results.size() <= static_cast<std::size_t>(dev.active_epoch))
        dev.results.resize(dev.active_epoch + 1);
    dev.results[dev.active_epoch] = std::move(res);
    dev.active = false;
}

void CampaignAnalyzer::add(const RecordDocument& record) {
    if (n_ == 0) n_ = record.n();
    if (record.n() != n_)
        throw LengthMismatchError("record for " + record.device_id + " has n=" +
                                  std::to_string(record.n()) + ", expected " + std::to_string(n_));

    auto it = device_index_.find(record.device_id);
    if (it == device_index_.end()) {
        it = device_index_.emplace(record.device_id, states_.size()).first;
        device_order_.push_back(record.device_id);
        states_.emplace_back();
        states_.back().id = record.device_id;
    }
    DeviceState& dev = states_[it->second];

    // decide window membership
    bool opens = false;
    int open_epoch = 0;
    if (options_.cycles_per_epoch) {
        const std::uint64_t cpe = *options_.cycles_per_epoch;
        const std::uint64_t j = record.seq % cpe;
        const int epoch = static_cast<int>(record.seq / cpe);
        if (dev.active && (epoch != dev.active_epoch || record.seq != dev.expect_seq))
            close_window(dev);
        if (!dev.active && j < static_cast<std::uint64_t>(options_.window)) {
            opens = true;
            open_epoch = epoch;
        }
    } else {
        if (!record.has_timestamp)
            throw ParseError("record for " + record.device_id +
                             " lacks a timestamp; use sequence-based windows instead");
        if (dev.active && record.seq != dev.expect_seq) close_window(dev);
        if (!dev.active) {
            const InstantMs local = record.timestamp +
                                    static_cast<InstantMs>(options_.tz_offset_minutes) * 60000;
            if (!dev.anchor_ready) {
                // first anchor: the sampling day of the record's month, or of
                // the previous month if the record precedes it
                std::int64_t days = local / 86400000;
                if (local < 0 && local % 86400000 != 0) --days;
                // reuse format/parse helpers to recover the civil date
                const std::string iso = format_iso8601(days * 86400000);
                CivilDate date = parse_civil_date(iso.substr(0, 10));
                date.day = options_.sample_day;
                if (civil_to_ms(date) > local) date = add_months(date, -1);
                dev.anchor_date = date;
                dev.next_anchor_ms = civil_to_ms(date);
                dev.anchor_ready = true;
            }
            bool pending = false;
            int pending_epoch = 0;
            while (local >= dev.next_anchor_ms) {
                pending = true;
                pending_epoch = dev.next_epoch;
                dev.anchor_date = add_months(dev.anchor_date, 1);
                dev.next_anchor_ms = civil_to_ms(dev.anchor_date);
                dev.next_epoch++;
            }
            if (pending) {
                opens = true;
                open_epoch = pending_epoch;
            }
        }
    }
    if (opens) open_window(dev, open_epoch);
    if (!dev.active) return;

    // accumulate
    if (!dev.reference) dev.reference = record.pattern;
    if (dev.count == 0) dev.first_of_window = record.pattern;
    const double w = fractional_hd(*dev.reference, record.pattern);
    const double f = fractional_hw(record.pattern);
    dev.wchd_sum += w;
    dev.fhw_sum += f;
    const auto& words = record.pattern.words();
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        std::uint64_t bits = words[wi];
        while (bits) {
            dev.one_counts[(wi << 6) + static_cast<std::size_t>(std::countr_zero(bits))]++;
            bits &= bits - 1;
        }
    }
    if (dev.active_epoch == 0) {
        wchd_hist_.add(w);
        fhw_hist_.add(f);
    }
    dev.count++;
    dev.expect_seq = record.seq + 1;
    if (dev.count == static_cast<std::uint32_t>(options_.window)) close_window(dev);
}

namespace {

SummaryRow make_row(double start, double end, int months, std::string who = "") {
    SummaryRow row;
    row.start = start;
    row.end = end;
    row.who = std::move(who);
    if (months >= 1 && start > 0.0 && !std::isnan(start) && !std::isnan(end)) {
        row.relative = end / start - 1.0;
        row.monthly_geometric = monthly_change(start, end, months);
        row.monthly_arithmetic = row.relative / months;
        row.rates_defined = true;
    }
    return row;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

MetricReport CampaignAnalyzer::finish() {
    MetricReport rep;
    for (auto& dev : states_) close_window(dev);

    rep.devices = device_order_;
    rep.n = n_;
    rep.window = options_.window;
    std::size_t epochs = 0;
    for (const auto& dev : states_) epochs = std::max(epochs, dev.results.size());
    rep.epochs = static_cast<int>(epochs);
    if (rep.epochs == 0 || states_.empty()) return rep;

    const std::size_t D = states_.size();
    const auto series = [&](auto member) {
        std::vector<std::vector<double>> out(epochs, std::vector<double>(D, kNaN));
        for (std::size_t d = 0; d < D; ++d)
            for (std::size_t e = 0; e < states_[d].results.size(); ++e)
                out[e][d] = states_[d].results[e].*member;
        return out;
    };
    rep.wchd_series = series(&DeviceState::EpochResult::wchd);
    rep.fhw_series = series(&DeviceState::EpochResult::fhw);
    rep.stable_series = series(&DeviceState::EpochResult::stable);
    rep.noise_series = series(&DeviceState::EpochResult::noise);

    rep.epoch_complete.assign(epochs, true);
    for (std::size_t e = 0; e < epochs; ++e)
        for (const auto& dev : states_) {
            const bool full = e < dev.results.size() &&
                              dev.results[e].count == static_cast<std::uint32_t>(options_.window) &&
                              dev.results[e].first.has_value();
            if (!full) rep.epoch_complete[e] = false;
        }

    // cross-device series over the first read-out of each window
    if (D >= 2) {
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = i + 1; j < D; ++j)
                rep.pair_labels.push_back(device_order_[i] + "|" + device_order_[j]);
    }
    rep.bchd_pairs_series.assign(epochs, {});
    rep.bchd_mean_series.assign(epochs, kNaN);
    rep.puf_entropy_series.assign(epochs, kNaN);
    for (std::size_t e = 0; e < epochs; ++e) {
        if (!rep.epoch_complete[e] || D < 2) continue;
        std::vector<PowerUpPattern> firsts;
        firsts.reserve(D);
        for (const auto& dev : states_) firsts.push_back(*dev.results[e].first);
        rep.bchd_pairs_series[e] = bchd(firsts);
        rep.bchd_mean_series[e] = mean_of(rep.bchd_pairs_series[e]);
        rep.puf_entropy_series[e] = puf_min_entropy(firsts);
    }

    int start = -1, end = -1;
    for (std::size_t e = 0; e < epochs; ++e)
        if (rep.epoch_complete[e]) {
            if (start < 0) start = static_cast<int>(e);
            end = static_cast<int>(e);
        }
    rep.start_epoch = start;
    rep.end_epoch = end;
    rep.months = (start >= 0 && end > start) ? end - start : 0;
    if (start < 0) return rep;

    const int months = rep.months;
    const auto avg_row = [&](const std::vector<std::vector<double>>& s) {
        return make_row(mean_of(s[start]), mean_of(s[end]), months);
    };
    rep.wchd_avg = avg_row(rep.wchd_series);
    rep.hw_avg = avg_row(rep.fhw_series);
    rep.stable_avg = avg_row(rep.stable_series);
    rep.noise_avg = avg_row(rep.noise_series);

    // worst-case selection (documented rule):
    //   WCHD, HW: end-of-test value farthest from the ideal (0 resp. 0.5)
    //   stable cells, noise entropy: lowest value at the start
    //   BCHD: lowest end-of-test pair
    const auto pick = [&](const std::vector<std::vector<double>>& s, bool by_end,
                          auto badness) {
        const auto& v = by_end ? s[end] : s[start];
        std::size_t best = 0;
        for (std::size_t d = 1; d < D; ++d)
            if (badness(v[d]) > badness(v[best])) best = d;
        return best;
    };
    const auto dev_row = [&](const std::vector<std::vector<double>>& s, std::size_t d) {
        return make_row(s[start][d], s[end][d], months, device_order_[d]);
    };
    rep.wchd_wc = dev_row(rep.wchd_series,
                          pick(rep.wchd_series, true, [](double v) { return v; }));
    rep.hw_wc = dev_row(rep.fhw_series,
                        pick(rep.fhw_series, true, [](double v) { return std::abs(v - 0.5); }));
    rep.stable_wc = dev_row(rep.stable_series,
                            pick(rep.stable_series, false, [](double v) { return -v; }));
    rep.noise_wc = dev_row(rep.noise_series,
                           pick(rep.noise_series, false, [](double v) { return -v; }));

    if (D >= 2) {
        rep.bchd_avg = make_row(rep.bchd_mean_series[start], rep.bchd_mean_series[end], months);
        const auto& pe = rep.bchd_pairs_series[end];
        std::size_t worst = 0;
        for (std::size_t p = 1; p < pe.size(); ++p)
            if (pe[p] < pe[worst]) worst = p;
        rep.bchd_wc = make_row(rep.bchd_pairs_series[start][worst], pe[worst], months,
                               rep.pair_labels[worst]);
        rep.puf_entropy =
            make_row(rep.puf_entropy_series[start], rep.puf_entropy_series[end], months);
    }

    // start-epoch distributions; WCHD/FHW were binned sample by sample in add()
    rep.wchd_hist = std::move(wchd_hist_);
    rep.fhw_hist = std::move(fhw_hist_);
    if (D >= 2 && !states_.empty() && rep.epoch_complete.size() > 0 && rep.epoch_complete[0]) {
        std::vector<PowerUpPattern> refs;
        for (const auto& dev : states_) refs.push_back(*dev.results[0].first);
        for (double v : bchd(refs)) rep.bchd_hist.add(v);
    }
    return rep;
}

MetricReport build_report(const std::vector<std::vector<SampleSet>>& samples) {
    if (samples.empty()) throw ConfigError("build_report needs at least one device");
    const std::size_t epochs = samples.front().size();
    for (const auto& dev : samples)
        if (dev.size() != epochs)
            throw ConfigError("build_report needs the same epoch count per device");
    if (epochs == 0) throw ConfigError("build_report needs at least one epoch");
    std::size_t window = 0;
    for (const auto& dev : samples)
        for (const auto& set : dev) window = std::max(window, set.count());

    CampaignAnalyzer::Options opt;
    opt.window = static_cast<int>(window);
    opt.cycles_per_epoch = window;
    CampaignAnalyzer analyzer(opt);
    for (std::size_t e = 0; e < epochs; ++e) {
        for (std::size_t d = 0; d < samples.size(); ++d) {
            const SampleSet& set = samples[d][e];
            set.validate();
            for (std::size_t j = 0; j < set.patterns.size(); ++j) {
                RecordDocument rec;
                rec.device_id = set.device.empty() ? "D" + std::to_string(d) : set.device;
                rec.seq = e * window + j;
                rec.pattern = set.patterns[j];
                analyzer.add(rec);
            }
        }
    }
    return analyzer.finish();
}

namespace {

nlohmann::ordered_json row_json(const SummaryRow& row) {
    nlohmann::ordered_json j;
    j["start"] = row.start;
    j["end"] = row.end;
    if (row.rates_defined) {
        j["relative"] = row.relative;
        j["monthly_geometric"] = row.monthly_geometric;
        j["monthly_arithmetic"] = row.monthly_arithmetic;
    }
    if (!row.who.empty()) j["who"] = row.who;
    return j;
}

nlohmann::ordered_json hist_json(const Histogram& h) {
    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        if (h.counts[b] == 0) continue;
        nlohmann::ordered_json bin;
        bin["lo"] = b * h.bin_width;
        bin["hi"] = (b + 1) * h.bin_width;
        bin["count"] = h.counts[b];
        bins.push_back(bin);
    }
    return bins;
}

} // namespace

nlohmann::ordered_json MetricReport::to_json() const {
    nlohmann::ordered_json j;
    j["devices"] = devices;
    j["n"] = n;
    j["window"] = window;
    j["epochs"] = epochs;
    j["start_epoch"] = start_epoch;
    j["end_epoch"] = end_epoch;
    j["months"] = months;
    j["epoch_complete"] = epoch_complete;
    j["summary"]["wchd"]["avg"] = row_json(wchd_avg);
    j["summary"]["wchd"]["wc"] = row_json(wchd_wc);
    j["summary"]["hw"]["avg"] = row_json(hw_avg);
    j["summary"]["hw"]["wc"] = row_json(hw_wc);
    j["summary"]["stable_cells"]["avg"] = row_json(stable_avg);
    j["summary"]["stable_cells"]["wc"] = row_json(stable_wc);
    j["summary"]["noise_entropy"]["avg"] = row_json(noise_avg);
    j["summary"]["noise_entropy"]["wc"] = row_json(noise_wc);
    j["summary"]["bchd"]["avg"] = row_json(bchd_avg);
    j["summary"]["bchd"]["wc"] = row_json(bchd_wc);
    j["summary"]["puf_entropy"] = row_json(puf_entropy);
    j["series"]["wchd"] = wchd_series;
    j["series"]["fhw"] = fhw_series;
    j["series"]["stable_cells"] = stable_series;
    j["series"]["noise_entropy"] = noise_series;
    j["series"]["bchd_mean"] = bchd_mean_series;
    j["series"]["bchd_pairs"] = bchd_pairs_series;
    j["series"]["pair_labels"] = pair_labels;
    j["series"]["puf_entropy"] = puf_entropy_series;
    j["histograms"]["wchd"] = hist_json(wchd_hist);
    j["histograms"]["bchd"] = hist_json(bchd_hist);
    j["histograms"]["fhw"] = hist_json(fhw_hist);
    return j;
}

namespace {

void render_row(std::string& out, const std::string& metric, const std::string& scope,
                const SummaryRow& row) {
    const bool negligible = row.rates_defined && std::abs(row.relative) < kNegligible;
    const std::string rel = !row.rates_defined ? "n/a"
                            : negligible       ? "negligible"
                                               : format_signed_pct(row.relative);
    const std::string geo = !row.rates_defined ? "n/a"
                            : negligible       ? "negligible"
                                               : format_signed_pct(row.monthly_geometric);
    const std::string ari = !row.rates_defined ? "n/a"
                            : negligible       ? "negligible"
                                               : format_signed_pct(row.monthly_arithmetic);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-14s %-12s %10s %10s %12s %14s %15s\n", metric.c_str(),
                  scope.c_str(), format_value(row.start).c_str(), format_value(row.end).c_str(),
                  rel.c_str(), geo.c_str(), ari.c_str());
    out += buf;
}

} // namespace

std::string render_report_text(const MetricReport& report, const std::string& manifest_name) {
    std::string out;
    out += "SRAM power-up quality report\n";
    out += "============================\n";
    if (!manifest_name.empty()) out += "manifest: " + manifest_name + "\n";
    char buf[256];
    int complete = 0;
    for (bool c : report.epoch_complete) complete += c ? 1 : 0;
    std::snprintf(buf, sizeof buf,
                  "devices: %zu   pattern bits: %zu   window: %d   epochs: %d (complete %d)   "
                  "months: %d\n\n",
                  report.devices.size(), report.n, report.window, report.epochs, complete,
                  report.months);
    out += buf;

    std::snprintf(buf, sizeof buf, "%-14s %-12s %10s %10s %12s %14s %15s\n", "metric", "scope",
                  "start", "end", "rel.change", "monthly(geom)", "monthly(arith)");
    out += buf;
    out += std::string(92, '-') + "\n";
    render_row(out, "WCHD", "AVG.", report.wchd_avg);
    render_row(out, "WCHD", "WC. " + report.wchd_wc.who, report.wchd_wc);
    render_row(out, "HW", "AVG.", report.hw_avg);
    render_row(out, "HW", "WC. " + report.hw_wc.who, report.hw_wc);
    render_row(out, "Stable cells", "AVG.", report.stable_avg);
    render_row(out, "Stable cells", "WC. " + report.stable_wc.who, report.stable_wc);
    render_row(out, "Noise entropy", "AVG.", report.noise_avg);
    render_row(out, "Noise entropy", "WC. " + report.noise_wc.who, report.noise_wc);
    render_row(out, "BCHD", "AVG.", report.bchd_avg);
    render_row(out, "BCHD", "WC. " + report.bchd_wc.who, report.bchd_wc);
    render_row(out, "PUF entropy", "all", report.puf_entropy);
    out += std::string(92, '-') + "\n";

    out += "notes:\n";
    out += "  rel.change = end/start - 1; monthly(geom) = (end/start)^(1/months) - 1; "
           "monthly(arith) = rel.change / months.\n";
    out += "  rows with |rel.change| < 0.01% print as negligible.\n";
    out += "  worst case: WCHD and HW by end value farthest from ideal; stable cells and noise "
           "entropy by lowest start; BCHD by lowest end pair.\n";
    out += "  incomplete epochs:";
    bool any_incomplete = false;
    for (std::size_t e = 0; e < report.epoch_complete.size(); ++e)
        if (!report.epoch_complete[e]) {
            out += " " + std::to_string(e);
            any_incomplete = true;
        }
    if (!any_incomplete) out += " none";
    out += "\n";
    return out;
}

std::string render_timeseries_csv(const MetricReport& report, const std::string& manifest_name) {
    std::string out;
    if (!manifest_name.empty()) out += "# manifest: " + manifest_name + "\n";
    out += "epoch,device,metric,value\n";
    char buf[160];
    const auto emit = [&](int e, const std::string& dev, const char* metric, double v) {
        if (std::isnan(v)) return;
        std::snprintf(buf, sizeof buf, "%d,%s,%s,%.10g\n", e, dev.c_str(), metric, v);
        out += buf;
    };
    for (int e = 0; e < report.epochs; ++e) {
        for (std::size_t d = 0; d < report.devices.size(); ++d) {
            emit(e, report.devices[d], "wchd", report.wchd_series[e][d]);
            emit(e, report.devices[d], "fhw", report.fhw_series[e][d]);
            emit(e, report.devices[d], "stable_cells", report.stable_series[e][d]);
            emit(e, report.devices[d], "noise_entropy", report.noise_series[e][d]);
        }
        for (std::size_t p = 0; p < report.bchd_pairs_series[e].size(); ++p)
            emit(e, report.pair_labels[p], "bchd", report.bchd_pairs_series[e][p]);
        emit(e, "all", "bchd_mean", report.bchd_mean_series[e]);
        emit(e, "all", "puf_entropy", report.puf_entropy_series[e]);
    }
    return out;
}

std::string render_histograms_csv(const MetricReport& report, const std::string& manifest_name) {
    std::string out;
    if (!manifest_name.empty()) out += "# manifest: " + manifest_name + "\n";
    out += "metric,bin_lo,bin_hi,count\n";
    char buf[160];
    const auto emit = [&](const char* metric, const Histogram& h) {
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            if (h.counts[b] == 0) continue;
            std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%llu\n", metric, b * h.bin_width,
                          (b + 1) * h.bin_width,
                          static_cast<unsigned long long>(h.counts[b]));
            out += buf;
        }
    };
    emit("wchd", report.wchd_hist);
    emit("bchd", report.bchd_hist);
    emit("fhw", report.fhw_hist);
    return out;
}

} // namespace sramlab
