#include "sramlab/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <queue>

namespace sramlab {

CampaignCalendar::CampaignCalendar(CivilDate start, int cycles_per_epoch, CycleTiming timing)
    : start_(start), cycles_per_epoch_(cycles_per_epoch), timing_(timing) {
    timing_.validate();
    if (cycles_per_epoch < 1) throw ConfigError("cycles_per_epoch must be >= 1");
}

InstantMs CampaignCalendar::epoch_anchor(int epoch) const {
    return civil_to_ms(add_months(start_, epoch));
}

InstantMs CampaignCalendar::timestamp(int layer, std::uint64_t seq) const {
    const int epoch = static_cast<int>(seq / cycles_per_epoch_);
    const std::uint64_t j = seq % cycles_per_epoch_;
    return epoch_anchor(epoch) + static_cast<InstantMs>(j) * timing_.period_ms +
           timing_.layer_phase(layer);
}

namespace {

RecordDocument make_record(DevicePopulation& dev, int layer, std::uint64_t round,
                           const CampaignCalendar& cal) {
    RecordDocument rec;
    rec.device_id = dev.id();
    rec.seq = round;
    rec.has_timestamp = true;
    rec.timestamp = cal.timestamp(layer, round);
    rec.pattern = dev.power_up();
    dev.apply_aging(rec.pattern);
    return rec;
}

} // namespace

std::vector<RecordDocument> run_handshake_round(const BoardTopology& topology,
                                                std::vector<DevicePopulation>& devices,
                                                const CampaignCalendar& calendar,
                                                std::uint64_t round) {
    if (devices.size() != topology.device_count)
        throw ConfigError("device list does not match the topology");

    enum Kind { kPowerOn = 0, kRead = 1, kPowerOff = 2 };
    struct Event {
        InstantMs t;
        int order; // tie-break: power-on precedes read at the same instant
        Kind kind;
        int layer;
        bool operator>(const Event& o) const {
            return t != o.t ? t > o.t : order > o.order;
        }
    };

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
    for (int layer = 0; layer < 2; ++layer) {
        const InstantMs on = calendar.timestamp(layer, round);
        queue.push({on, 0, kPowerOn, layer});
        queue.push({on, 1, kRead, layer});
        queue.push({on + calendar.timing().on_ms, 2, kPowerOff, layer});
    }

    bool powered[2] = {false, false};
    bool read_done[2] = {false, false};
    InstantMs read_at[2] = {-1, -1};
    std::vector<RecordDocument> records;
    records.reserve(devices.size());

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        switch (ev.kind) {
        case kPowerOn:
            // layer 1 starts only on layer 0's "switched on" signal
            if (ev.layer == 1 && !powered[0])
                throw Error("handshake stalled: layer 1 powering on before layer 0");
            powered[ev.layer] = true;
            break;
        case kRead: {
            if (!powered[ev.layer])
                throw Error("handshake stalled: read-out on a powered-off layer");
            if (read_at[1 - ev.layer] == ev.t)
                throw Error("handshake stalled: simultaneous read-outs on both layers");
            read_at[ev.layer] = ev.t;
            const std::size_t begin = ev.layer == 0 ? 0 : topology.layer_size();
            const std::size_t end = ev.layer == 0 ? topology.layer_size() : devices.size();
            for (std::size_t d = begin; d < end; ++d)
                records.push_back(make_record(devices[d], ev.layer, round, calendar));
            read_done[ev.layer] = true;
            break;
        }
        case kPowerOff:
            if (!read_done[ev.layer])
                throw Error("handshake stalled: power-off before read-out completed");
            powered[ev.layer] = false;
            break;
        }
    }
    if (!read_done[0] || !read_done[1] || records.size() != devices.size())
        throw Error("handshake stalled: round finished incomplete");
    return records;
}

CampaignResult run_campaign(const SimulationConfig& config, const RecordSink& sink,
                            std::uint64_t start_round, const ProgressFn& progress) {
    config.validate();
    const BoardTopology topology{config.devices};
    const CampaignCalendar calendar(config.start_date, config.cycles_per_epoch);
    auto devices = make_population(config.devices, config.n, config.model, config.seed);

    const std::uint64_t total =
        static_cast<std::uint64_t>(config.epochs) * config.cycles_per_epoch;
    if (start_round > total)
        throw ConfigError("resume point " + std::to_string(start_round) +
                          " lies beyond the campaign (" + std::to_string(total) + " rounds)");

    // resume: replay device state deterministically, emit nothing
    for (std::uint64_t r = 0; r < start_round; ++r)
        for (auto& dev : devices) dev.apply_aging(dev.power_up());

    constexpr std::uint64_t kChunkRounds = 512;
    std::vector<std::vector<PowerUpPattern>> buffers(config.devices);

    const auto t_begin = std::chrono::steady_clock::now();
    CampaignResult result{start_round, start_round * config.devices};

    for (std::uint64_t chunk = start_round; chunk < total; chunk += kChunkRounds) {
        const std::uint64_t count = std::min(kChunkRounds, total - chunk);

        const auto simulate_device = [&](std::size_t d) {
            auto& buf = buffers[d];
            buf.clear();
            buf.reserve(count);
            for (std::uint64_t r = 0; r < count; ++r) {
                buf.push_back(devices[d].power_up());
                devices[d].apply_aging(buf.back());
            }
        };

        if (config.threads <= 1 || config.devices == 1) {
            for (std::size_t d = 0; d < config.devices; ++d) simulate_device(d);
        } else {
            const std::size_t workers =
                std::min<std::size_t>(config.threads, config.devices);
            std::vector<std::future<void>> jobs;
            for (std::size_t w = 0; w < workers; ++w)
                jobs.push_back(std::async(std::launch::async, [&, w] {
                    for (std::size_t d = w; d < config.devices; d += workers)
                        simulate_device(d);
                }));
            for (auto& j : jobs) j.get();
        }

        // emission order: round-major, layer 0 boards then layer 1 boards
        for (std::uint64_t r = 0; r < count; ++r) {
            const std::uint64_t round = chunk + r;
            for (std::size_t d = 0; d < config.devices; ++d) {
                RecordDocument rec;
                rec.device_id = devices[d].id();
                rec.seq = round;
                rec.has_timestamp = true;
                rec.timestamp = calendar.timestamp(topology.layer_of(d), round);
                rec.pattern = std::move(buffers[d][r]);
                sink(std::move(rec));
                ++result.records;
            }
        }
        result.rounds = chunk + count;

        if (progress) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
            CampaignProgress p;
            p.rounds_done = result.rounds;
            p.total_rounds = total;
            p.records = result.records;
            p.epoch = static_cast<int>((result.rounds - 1) / config.cycles_per_epoch);
            p.records_per_second =
                secs > 0 ? static_cast<double>(result.records - start_round * config.devices) / secs
                         : 0.0;
            progress(p);
        }
    }
    return result;
}

std::vector<EpochWindowSpec> campaign_epoch_index(const SimulationConfig& config) {
    std::vector<EpochWindowSpec> out;
    out.reserve(config.epochs);
    for (int e = 0; e < config.epochs; ++e)
        out.push_back({static_cast<std::uint64_t>(e) * config.cycles_per_epoch,
                       static_cast<std::uint32_t>(config.window)});
    return out;
}

} // namespace sramlab
