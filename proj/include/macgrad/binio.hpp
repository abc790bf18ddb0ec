#pragma once

// Little-endian scalar I/O shared by tensor, curvature and checkpoint code.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "macgrad/errors.hpp"

namespace macgrad::binio {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ParseError("unexpected end of stream");
    return v;
}

inline void put_string(std::ostream& os, const std::string& s) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& is, std::size_t max_len = 1 << 20) {
    const auto n = get<std::uint32_t>(is);
    if (n > max_len) throw ParseError("string length " + std::to_string(n) + " exceeds limit");
    std::string s(n, '\0');
    if (n && !is.read(s.data(), n)) throw ParseError("unexpected end of stream");
    return s;
}

}  // namespace macgrad::binio
