#include "epcert/bytes.hpp"

#include <stdexcept>

namespace epcert {

std::string hex_encode(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (std::uint8_t c : b) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0x0f]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("hex_decode: invalid character");
}

Bytes hex_decode(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex_decode: odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(hex_val(hex[2 * i]) << 4 | hex_val(hex[2 * i + 1]));
    return out;
}

Bytes be64(std::uint64_t v) {
    Bytes out(8);
    for (int i = 7; i >= 0; --i) {
        out[i] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::uint64_t read_be64(const Bytes& b, std::size_t offset) {
    if (offset + 8 > b.size()) throw std::out_of_range("read_be64: out of range");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = v << 8 | b[offset + i];
    return v;
}

Bytes encode_parts(const std::vector<Bytes>& parts) {
    std::size_t total = 0;
    for (const auto& p : parts) total += 8 + p.size();
    Bytes out;
    out.reserve(total);
    for (const auto& p : parts) {
        Bytes len = be64(p.size());
        out.insert(out.end(), len.begin(), len.end());
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<Bytes> decode_parts(const Bytes& framed) {
    std::vector<Bytes> parts;
    std::size_t pos = 0;
    while (pos < framed.size()) {
        std::uint64_t len = read_be64(framed, pos);
        pos += 8;
        if (pos + len > framed.size()) throw std::invalid_argument("decode_parts: truncated part");
        parts.emplace_back(framed.begin() + pos, framed.begin() + pos + len);
        pos += len;
    }
    return parts;
}

}  // namespace epcert
