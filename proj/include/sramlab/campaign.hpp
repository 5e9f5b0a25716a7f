#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sramlab/aging.hpp"
#include "sramlab/config.hpp"
#include "sramlab/datastore.hpp"

namespace sramlab {

/// Power-cycle waveform: 3.8 s on, 1.6 s off, 5.4 s period per board,
/// the two layers phase-shifted by half a period so their power-on edges
/// and read-outs strictly alternate.
struct CycleTiming {
    InstantMs period_ms = 5400;
    InstantMs on_ms = 3800;
    InstantMs off_ms = 1600;

    InstantMs layer_phase(int layer) const { return layer * period_ms / 2; }
    void validate() const {
        if (on_ms + off_ms != period_ms)
            throw ConfigError("cycle timing: on + off must equal the period");
    }
};

/// Two stacked board layers; master boards produce no data.
struct BoardTopology {
    std::size_t device_count = 16;

    std::size_t layer_size() const { return (device_count + 1) / 2; }
    int layer_of(std::size_t device_index) const {
        return device_index < layer_size() ? 0 : 1;
    }
};

/// Simulated wall clock: each epoch is one calendar month, anchored at
/// 00:00 on the sampling day, and cycles tick at the waveform period
/// inside the epoch. Record timestamps are
/// anchor(epoch) + (seq mod cycles_per_epoch)*period + layer_phase.
class CampaignCalendar {
public:
    CampaignCalendar(CivilDate start, int cycles_per_epoch, CycleTiming timing = {});

    InstantMs epoch_anchor(int epoch) const;
    InstantMs timestamp(int layer, std::uint64_t seq) const;
    const CycleTiming& timing() const { return timing_; }

private:
    CivilDate start_;
    int cycles_per_epoch_;
    CycleTiming timing_;
};

/// One fully synchronized measurement round driven by the two-layer
/// handshake: layer 0 powers on only after layer 1 finished its previous
/// read-out, layer 1 only after layer 0 is on. Returns one record per
/// slave in emission order (layer 0 boards, then layer 1 boards).
/// A stalled or reordered schedule trips an internal assertion.
std::vector<RecordDocument> run_handshake_round(const BoardTopology& topology,
                                                std::vector<DevicePopulation>& devices,
                                                const CampaignCalendar& calendar,
                                                std::uint64_t round);

struct CampaignProgress {
    std::uint64_t rounds_done = 0;
    std::uint64_t total_rounds = 0;
    std::uint64_t records = 0;
    int epoch = 0;
    double records_per_second = 0.0;
};
using ProgressFn = std::function<void(const CampaignProgress&)>;

struct CampaignResult {
    std::uint64_t rounds = 0;
    std::uint64_t records = 0;
};

/// Streams the whole campaign to `sink` in deterministic order
/// (round-major, layer, board). `start_round` > 0 resumes a checkpointed
/// run: device state is replayed deterministically and emission starts at
/// that round. Device work runs on config.threads workers in round chunks;
/// the emitted stream is identical for any thread count.
CampaignResult run_campaign(const SimulationConfig& config, const RecordSink& sink,
                            std::uint64_t start_round = 0, const ProgressFn& progress = {});

/// Arithmetic epoch index: epoch e covers seq [e*cycles_per_epoch,
/// e*cycles_per_epoch + window) for every device.
struct EpochWindowSpec {
    std::uint64_t first_seq = 0;
    std::uint32_t count = 0;
};
std::vector<EpochWindowSpec> campaign_epoch_index(const SimulationConfig& config);

} // namespace sramlab
