#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sramlab/datastore.hpp"
#include "sramlab/metrics.hpp"

namespace sramlab {

/// One summary row of the quality table.
struct SummaryRow {
    double start = 0.0;
    double end = 0.0;
    double relative = 0.0;           ///< end/start - 1
    double monthly_geometric = 0.0;  ///< (end/start)^(1/months) - 1
    double monthly_arithmetic = 0.0; ///< relative / months
    bool rates_defined = false;      ///< false when months == 0 or start == 0
    std::string who;                 ///< device or pair behind a worst-case row
};

struct Histogram {
    double bin_width = 0.005;
    std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(200, 0);

    void add(double value);
    std::uint64_t total = 0;
};

/// Everything the analysis produces: per-epoch series, the summary table
/// and the start-epoch distributions.
struct MetricReport {
    std::vector<std::string> devices; ///< first-seen order
    std::size_t n = 0;
    int window = 0;
    int epochs = 0; ///< number of epoch slots (0..epochs-1)
    int start_epoch = -1;
    int end_epoch = -1;
    int months = 0;
    std::vector<bool> epoch_complete;

    // series[epoch][device]; NaN where a window is missing
    std::vector<std::vector<double>> wchd_series;
    std::vector<std::vector<double>> fhw_series;
    std::vector<std::vector<double>> stable_series;
    std::vector<std::vector<double>> noise_series;
    // cross-device series (complete epochs only; NaN/empty otherwise)
    std::vector<std::string> pair_labels;
    std::vector<std::vector<double>> bchd_pairs_series; // [epoch][pair]
    std::vector<double> bchd_mean_series;
    std::vector<double> puf_entropy_series;

    SummaryRow wchd_avg, wchd_wc;
    SummaryRow hw_avg, hw_wc;
    SummaryRow stable_avg, stable_wc;
    SummaryRow noise_avg, noise_wc;
    SummaryRow bchd_avg, bchd_wc;
    SummaryRow puf_entropy;

    Histogram wchd_hist, bchd_hist, fhw_hist; ///< start-epoch distributions

    nlohmann::ordered_json to_json() const;
};

/// Streaming report builder. Feed records in file order (seq ascending
/// per device); windows are detected online, reduced immediately, and the
/// full report is assembled by finish().
class CampaignAnalyzer {
public:
    struct Options {
        int window = 1000;
        /// timestamp policy: first `window` consecutive records at or
        /// after 00:00 on sample_day of each month (evaluated in UTC plus
        /// tz_offset_minutes)
        int sample_day = 8;
        int tz_offset_minutes = 0;
        /// when set, windows are cut by sequence number instead:
        /// epoch e = seq in [e*cpe, e*cpe + window)
        std::optional<std::uint64_t> cycles_per_epoch;
    };

    explicit CampaignAnalyzer(Options options);

    void add(const RecordDocument& record);
    MetricReport finish();

private:
    struct DeviceState;
    void open_window(DeviceState& dev, int epoch);
    void close_window(DeviceState& dev);

    Options options_;
    std::vector<std::string> device_order_;
    std::map<std::string, std::size_t> device_index_;
    std::vector<DeviceState> states_;
    std::size_t n_ = 0;
    Histogram wchd_hist_, fhw_hist_;
};

/// build_report over in-memory sample sets: samples[d][e] is device d's
/// window for epoch e (epoch 0 first pattern doubles as the reference).
/// Thin wrapper over the streaming analyzer so there is only one
/// computation path.
MetricReport build_report(const std::vector<std::vector<SampleSet>>& samples);

/// Table-style text rendering (the golden-file surface). Deterministic
/// bytes for fixed inputs.
std::string render_report_text(const MetricReport& report, const std::string& manifest_name);

/// epoch,device,metric,value rows; pair metrics use "Sa|Sb" as the device,
/// cross-device aggregates use "all".
std::string render_timeseries_csv(const MetricReport& report, const std::string& manifest_name);

/// metric,bin_lo,bin_hi,count rows for the start-epoch distributions.
std::string render_histograms_csv(const MetricReport& report, const std::string& manifest_name);

} // namespace sramlab
