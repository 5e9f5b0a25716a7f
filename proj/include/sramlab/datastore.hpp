#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "sramlab/pattern.hpp"
#include "sramlab/timeutil.hpp"

namespace sramlab {

/// One persisted measurement. Serialized as a single JSON document per
/// line: {"device_id": ..., "seq": ..., "timestamp": ..., "n": ...,
/// "data": <base64 of PowerUpPattern::to_bytes()>}. Lines starting with
/// '#' are comments; the writer emits one header comment naming the
/// manifest of the producing run.
struct RecordDocument {
    std::string device_id;
    std::uint64_t seq = 0;
    bool has_timestamp = false; ///< imported dumps may lack timestamps
    InstantMs timestamp = 0;
    PowerUpPattern pattern{1};

    std::size_t n() const { return pattern.size(); }
};

/// Write failure carrying how many records are known durable (flushed).
class WriteError : public Error {
public:
    WriteError(const std::string& msg, std::uint64_t durable)
        : Error(msg + " (durably written records: " + std::to_string(durable) + ")"),
          durable_(durable) {}
    std::uint64_t durable() const { return durable_; }

private:
    std::uint64_t durable_;
};

/// Single-writer JSON-lines appender with a periodic flush policy.
class RecordWriter {
public:
    /// flush_every: records per flush (default 1000).
    explicit RecordWriter(std::ostream& out, std::size_t flush_every = 1000,
                          const std::string& manifest_name = "");

    void append(const RecordDocument& record);
    void flush();
    std::uint64_t written() const { return written_; }

private:
    std::ostream& out_;
    std::size_t flush_every_;
    std::uint64_t written_ = 0;
    std::uint64_t durable_ = 0;
};

struct ScanFilter {
    std::optional<std::string> device;
    std::optional<std::uint64_t> seq_begin; ///< inclusive
    std::optional<std::uint64_t> seq_end;   ///< exclusive

    bool matches(const RecordDocument& r) const {
        if (device && r.device_id != *device) return false;
        if (seq_begin && r.seq < *seq_begin) return false;
        if (seq_end && r.seq >= *seq_end) return false;
        return true;
    }
};

enum class ScanMode {
    strict,  ///< first malformed line aborts with ParseError (line number included)
    tolerant ///< malformed lines are skipped and counted
};

struct ScanStats {
    std::uint64_t delivered = 0; ///< records passed to the sink
    std::uint64_t scanned = 0;   ///< well-formed records seen (before filtering)
    std::uint64_t errors = 0;    ///< malformed lines skipped (tolerant mode)
};

using RecordSink = std::function<void(RecordDocument&&)>;

/// Single-pass, constant-memory streaming read. Enforces per-device
/// strictly increasing seq; violations count as malformed lines.
ScanStats scan(std::istream& in, const ScanFilter& filter, ScanMode mode,
               const RecordSink& sink);

/// Field mapping for foreign JSON-lines dumps.
struct SchemaHints {
    std::string device_field = "device_id";
    std::string seq_field = "seq";             ///< empty: synthesize from file order
    std::string timestamp_field = "timestamp"; ///< empty: admit without timestamps
    std::string data_field = "data";
    std::string encoding = "auto"; ///< auto | base64 | hex
    std::optional<std::size_t> n;  ///< validate/override pattern length
};

/// Normalizes a foreign dump into RecordDocuments: stable device ids from
/// the mapped field, seq synthesized per device from file order when
/// absent, hex or base64 payloads. Unmappable fields raise ParseError
/// naming the missing field (strict) or count as errors (tolerant).
ScanStats import_external(std::istream& in, const SchemaHints& hints, ScanMode mode,
                          const RecordSink& sink);

} // namespace sramlab
