#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccresm/rng.hpp"

namespace ccresm {

// A packet of bits; every element is 0 or 1.
using BitVector = std::vector<std::uint8_t>;

inline BitVector random_bits(std::size_t len, SplitRng& rng) {
    BitVector out(len);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_bit());
    return out;
}

inline BitVector xor_bits(const BitVector& a, const BitVector& b) {
    BitVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d += (a[i] != b[i]);
    return d;
}

}  // namespace ccresm
