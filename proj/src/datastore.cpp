#include "sramlab/datastore.hpp"

#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "sramlab/encoding.hpp"

namespace sramlab {

using json = nlohmann::ordered_json;

RecordWriter::RecordWriter(std::ostream& out, std::size_t flush_every,
                           const std::string& manifest_name)
    : out_(out), flush_every_(flush_every ? flush_every : 1) {
    out_ << "# sramlab records v1";
    if (!manifest_name.empty()) out_ << " manifest=" << manifest_name;
    out_ << "\n";
}

void RecordWriter::append(const RecordDocument& record) {
    json doc;
    doc["device_id"] = record.device_id;
    doc["seq"] = record.seq;
    if (record.has_timestamp) doc["timestamp"] = format_iso8601(record.timestamp);
    doc["n"] = record.n();
    doc["data"] = to_base64(record.pattern.to_bytes());
    out_ << doc.dump() << '\n';
    if (!out_) throw WriteError("record write failed", durable_);
    ++written_;
    if (written_ % flush_every_ == 0) flush();
}

void RecordWriter::flush() {
    out_.flush();
    if (!out_) throw WriteError("record flush failed", durable_);
    durable_ = written_;
}

namespace {

RecordDocument parse_native(const json& doc) {
    RecordDocument rec;
    rec.device_id = doc.at("device_id").get<std::string>();
    rec.seq = doc.at("seq").get<std::uint64_t>();
    if (doc.contains("timestamp")) {
        rec.has_timestamp = true;
        rec.timestamp = parse_iso8601(doc.at("timestamp").get<std::string>());
    }
    const std::size_t n = doc.at("n").get<std::size_t>();
    const auto bytes = from_base64(doc.at("data").get<std::string>());
    if (bytes.size() * 8 != n)
        throw ParseError("payload holds " + std::to_string(bytes.size() * 8) +
                         " bits but n = " + std::to_string(n));
    rec.pattern = PowerUpPattern::from_bytes(bytes, n);
    return rec;
}

bool is_hex_like(const std::string& s) {
    if (s.empty() || s.size() % 2 != 0) return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F')))
            return false;
    return true;
}

// shared line loop for scan and import
template <typename ParseFn>
ScanStats stream_lines(std::istream& in, ScanMode mode, const ParseFn& parse) {
    ScanStats stats;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        try {
            parse(line, stats);
        } catch (const std::exception& e) {
            if (mode == ScanMode::strict) throw ParseError(e.what(), line_no);
            ++stats.errors;
        }
    }
    return stats;
}

} // namespace

ScanStats scan(std::istream& in, const ScanFilter& filter, ScanMode mode, const RecordSink& sink) {
    std::unordered_map<std::string, std::uint64_t> last_seq;
    return stream_lines(in, mode, [&](const std::string& line, ScanStats& stats) {
        RecordDocument rec = parse_native(json::parse(line));
        const auto it = last_seq.find(rec.device_id);
        if (it != last_seq.end() && rec.seq <= it->second)
            throw ParseError("seq " + std::to_string(rec.seq) + " not increasing for device " +
                             rec.device_id);
        last_seq[rec.device_id] = rec.seq;
        ++stats.scanned;
        if (filter.matches(rec)) {
            ++stats.delivered;
            sink(std::move(rec));
        }
    });
}

ScanStats import_external(std::istream& in, const SchemaHints& hints, ScanMode mode,
                          const RecordSink& sink) {
    std::unordered_map<std::string, std::uint64_t> next_seq;
    return stream_lines(in, mode, [&](const std::string& line, ScanStats& stats) {
        const json doc = json::parse(line);
        RecordDocument rec;

        if (!doc.contains(hints.device_field))
            throw ParseError("no field '" + hints.device_field + "' to map the device id from");
        const auto& dev = doc.at(hints.device_field);
        rec.device_id = dev.is_string() ? dev.get<std::string>() : dev.dump();

        if (!doc.contains(hints.data_field))
            throw ParseError("no field '" + hints.data_field + "' to map the payload from");
        const std::string payload = doc.at(hints.data_field).get<std::string>();
        std::vector<std::uint8_t> bytes;
        if (hints.encoding == "hex" || (hints.encoding == "auto" && is_hex_like(payload)))
            bytes = from_hex(payload);
        else if (hints.encoding == "base64" || hints.encoding == "auto")
            bytes = from_base64(payload);
        else
            throw ParseError("unknown payload encoding '" + hints.encoding + "'");

        std::size_t n = bytes.size() * 8;
        if (doc.contains("n")) n = doc.at("n").get<std::size_t>();
        if (hints.n) n = *hints.n;
        if (bytes.size() * 8 != n)
            throw ParseError("payload holds " + std::to_string(bytes.size() * 8) +
                             " bits but n = " + std::to_string(n));
        rec.pattern = PowerUpPattern::from_bytes(bytes, n);

        if (!hints.seq_field.empty() && doc.contains(hints.seq_field))
            rec.seq = doc.at(hints.seq_field).get<std::uint64_t>();
        else
            rec.seq = next_seq[rec.device_id];
        next_seq[rec.device_id] = rec.seq + 1;

        if (!hints.timestamp_field.empty() && doc.contains(hints.timestamp_field)) {
            rec.has_timestamp = true;
            rec.timestamp = parse_iso8601(doc.at(hints.timestamp_field).get<std::string>());
        }

        ++stats.scanned;
        ++stats.delivered;
        sink(std::move(rec));
    });
}

} // namespace sramlab
