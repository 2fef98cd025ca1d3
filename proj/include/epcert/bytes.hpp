#ifndef EPCERT_BYTES_HPP
#define EPCERT_BYTES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace epcert {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

std::string hex_encode(const Bytes& b);
Bytes hex_decode(std::string_view hex);

// 8-byte big-endian encoding, used for ids, slot indices and frame lengths.
Bytes be64(std::uint64_t v);
std::uint64_t read_be64(const Bytes& b, std::size_t offset);

// Length-prefixed framing: each part is encoded as be64(len) | part.
// Unambiguous: ("ab","c") and ("a","bc") encode differently.
Bytes encode_parts(const std::vector<Bytes>& parts);
std::vector<Bytes> decode_parts(const Bytes& framed);  // throws on malformed input

}  // namespace epcert

#endif
