#pragma once

#include <cstdint>
#include <random>

namespace dtsp {

// Tags keep streams derived from the same user seed from colliding.
enum class StreamTag : std::uint32_t {
    InstanceCoords = 0x1c0,
    AntConstruction = 0xa27,
    DescentInit = 0x6d1,
};

// Deterministic generator for (seed, tag, a, b). All randomness in the
// library flows through streams built here, so results depend only on the
// declared seeds and never on thread scheduling: ant k at iteration i always
// draws from make_stream(seed, AntConstruction, i, k) no matter which thread
// runs it.
inline std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag,
                                   std::uint64_t a = 0, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag),
                      static_cast<std::uint32_t>(a),
                      static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

} // namespace dtsp
