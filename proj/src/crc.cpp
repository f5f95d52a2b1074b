#include "ura/crc.hpp"

#include <stdexcept>

namespace ura {

namespace {

// Remainder of (bits * x^width + init-preload) mod generator, as a register value.
std::uint32_t crc_remainder(const BitVec& bits, const CrcSpec& spec) {
    const std::uint32_t top = 1u << (spec.width - 1);
    const std::uint32_t mask = (spec.width >= 32) ? 0xFFFFFFFFu : ((1u << spec.width) - 1);
    std::uint32_t reg = spec.init & mask;
    for (std::uint8_t b : bits) {
        const std::uint32_t in = (reg & top) ? 1u : 0u;
        reg = (reg << 1) & mask;
        if (in ^ (b & 1u)) reg ^= spec.poly & mask;
    }
    return reg;
}

}  // namespace

BitVec crc_append(const BitVec& message, const CrcSpec& spec) {
    if (spec.width == 0) return message;
    const std::uint32_t rem = crc_remainder(message, spec);
    BitVec out = message;
    out.reserve(message.size() + spec.width);
    for (unsigned i = 0; i < spec.width; ++i)
        out.push_back(static_cast<std::uint8_t>((rem >> (spec.width - 1 - i)) & 1u));
    return out;
}

bool crc_check(const BitVec& bits, const CrcSpec& spec) {
    if (spec.width == 0) return true;
    if (bits.size() < spec.width) throw std::invalid_argument("crc_check: input shorter than CRC");
    return crc_remainder(bits, spec) == 0;
}

}  // namespace ura
