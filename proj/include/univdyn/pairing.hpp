#pragma once

#include <cstdint>
#include <utility>

namespace univdyn {

// Cantor pairing N x N -> N, 0-based: pair(a,b) = (a+b)(a+b+1)/2 + b.
// Throws Error(InvalidIndex) when the result does not fit in 64 bits.
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n);

// Z -> N zig-zag: p >= 0 -> 2p, p < 0 -> -2p-1.
std::uint64_t zigzag(std::int64_t p);
std::int64_t unzigzag(std::uint64_t code);

}  // namespace univdyn
