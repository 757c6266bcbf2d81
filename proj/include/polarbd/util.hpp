// Small shared helpers: bit vectors, hex/binary text forms, atomic file writes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarbd {

using BitVec = std::vector<std::uint8_t>;
using LlrVec = std::vector<double>;

inline std::string bits_to_string(const BitVec& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

// MSB-first hex, padded to whole digits: bit 0 is the high bit of the first digit.
inline std::string bits_to_hex(const BitVec& bits) {
    static const char* digits = "0123456789abcdef";
    std::string s = "0x";
    std::size_t i = 0;
    const std::size_t pad = (4 - bits.size() % 4) % 4;
    unsigned nib = 0;
    for (std::size_t k = 0; k < pad; ++k) nib <<= 1;
    for (; i < bits.size(); ++i) {
        nib = (nib << 1) | (bits[i] & 1u);
        if ((i + 1 + pad) % 4 == 0) {
            s.push_back(digits[nib & 0xF]);
            nib = 0;
        }
    }
    return s;
}

// Accepts "0x..." hex (left-padded to nbits) or a plain 0/1 string of length nbits.
inline BitVec parse_bits(const std::string& text, std::size_t nbits) {
    BitVec out;
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
        std::vector<std::uint8_t> nibbles;
        for (std::size_t i = 2; i < text.size(); ++i) {
            char c = text[i];
            unsigned v;
            if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
            else throw std::invalid_argument("bad hex digit in '" + text + "'");
            nibbles.push_back(static_cast<std::uint8_t>(v));
        }
        BitVec all;
        all.reserve(nibbles.size() * 4);
        for (auto v : nibbles)
            for (int b = 3; b >= 0; --b) all.push_back((v >> b) & 1u);
        if (all.size() < nbits)
            all.insert(all.begin(), nbits - all.size(), 0);
        if (all.size() > nbits) {
            // leading bits beyond nbits must be zero padding
            for (std::size_t i = 0; i + nbits < all.size(); ++i)
                if (all[i]) throw std::invalid_argument("hex value wider than " + std::to_string(nbits) + " bits");
            all.erase(all.begin(), all.end() - static_cast<std::ptrdiff_t>(nbits));
        }
        out = std::move(all);
    } else {
        if (text.size() != nbits)
            throw std::invalid_argument("expected " + std::to_string(nbits) + " bits, got " + std::to_string(text.size()));
        out.reserve(nbits);
        for (char c : text) {
            if (c != '0' && c != '1') throw std::invalid_argument("bad bit character in '" + text + "'");
            out.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    return out;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Writes via a temp file in the same directory and renames into place, so a
// failure never leaves a partial output behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) {
            os.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace polarbd
