#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sramlab {

// Text encodings for pattern payloads embedded in JSON records.
// base64 is the canonical storage form; hex is accepted on import.

std::string to_base64(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_base64(const std::string& text);

std::string to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_hex(const std::string& text);

} // namespace sramlab
