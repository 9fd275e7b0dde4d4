#pragma once

// arithmetic in the prime field F_p with p = 2^61 - 1 (Mersenne).
// residues live in [0, p); reduction uses the fold (x & p) + (x >> 61).

#include <cstdint>
#include <cassert>

namespace linident {

inline constexpr std::uint64_t FP61_PRIME = (std::uint64_t(1) << 61) - 1;

namespace fp61 {

inline std::uint64_t reduce(std::uint64_t x) {
    x = (x & FP61_PRIME) + (x >> 61);
    if (x >= FP61_PRIME) x -= FP61_PRIME;
    return x;
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b; // < 2^62, no overflow
    if (s >= FP61_PRIME) s -= FP61_PRIME;
    return s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) {
    return a >= b ? a - b : a + FP61_PRIME - b;
}

inline std::uint64_t neg(std::uint64_t a) { return a ? FP61_PRIME - a : 0; }

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 t = (unsigned __int128)a * b;
    std::uint64_t lo = (std::uint64_t)(t & FP61_PRIME);
    std::uint64_t hi = (std::uint64_t)(t >> 61);
    return add(lo, reduce(hi));
}

inline std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t inv(std::uint64_t a) {
    assert(a != 0);
    return pow(a, FP61_PRIME - 2);
}

// signed integer -> residue
inline std::uint64_t from_int(long long v) {
    long long m = v % (long long)FP61_PRIME;
    if (m < 0) m += (long long)FP61_PRIME;
    return (std::uint64_t)m;
}

} // namespace fp61
} // namespace linident
