#pragma once

#include <cstdint>
#include <vector>

namespace ura {

using BitVec = std::vector<std::uint8_t>;

// CRC over GF(2) with an explicit generator polynomial.
// poly holds the polynomial without the leading x^width term, MSB first,
// so CRC-12 0x80F means x^12 + x^11 + x^3 + x^2 + x + 1.
struct CrcSpec {
    unsigned width = 12;
    std::uint32_t poly = 0x80F;
    std::uint32_t init = 0;

    static CrcSpec crc12() { return CrcSpec{}; }
    static CrcSpec none() { return CrcSpec{0, 0, 0}; }
};

// message + width parity bits; crc_check of the result is true.
BitVec crc_append(const BitVec& message, const CrcSpec& spec);

// true iff bits (message followed by parity) leave zero remainder.
bool crc_check(const BitVec& bits, const CrcSpec& spec);

}  // namespace ura
