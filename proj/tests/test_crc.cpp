#include <doctest.h>

#include "ura/crc.hpp"
#include "ura/rng.hpp"

using namespace ura;

TEST_CASE("crc_append of the all-zero message is all zero") {
    BitVec msg(85, 0);
    const BitVec out = crc_append(msg, CrcSpec::crc12());
    REQUIRE(out.size() == 97);
    for (std::size_t i = 85; i < 97; ++i) CHECK(out[i] == 0);
}

TEST_CASE("crc_check accepts every crc_append output") {
    Rng rng(7);
    const CrcSpec spec = CrcSpec::crc12();
    for (int t = 0; t < 200; ++t) {
        BitVec msg(85);
        for (auto& b : msg) b = rng.bit();
        CHECK(crc_check(crc_append(msg, spec), spec));
    }
}

TEST_CASE("single bit flips are always detected") {
    Rng rng(8);
    const CrcSpec spec = CrcSpec::crc12();
    BitVec msg(85);
    for (auto& b : msg) b = rng.bit();
    BitVec out = crc_append(msg, spec);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] ^= 1;
        CHECK(!crc_check(out, spec));
        out[i] ^= 1;
    }
}

TEST_CASE("all-ones message matches a long-division oracle") {
    // Schoolbook polynomial division over GF(2), bit at a time.
    const CrcSpec spec = CrcSpec::crc12();
    BitVec msg(85, 1);
    std::vector<std::uint8_t> work(msg);
    work.resize(85 + 12, 0);
    const std::uint32_t gen = (1u << 12) | spec.poly;  // x^12+x^11+x^3+x^2+x+1
    for (std::size_t i = 0; i + 12 < work.size(); ++i) {
        if (!work[i]) continue;
        for (unsigned b = 0; b <= 12; ++b) work[i + b] ^= (gen >> (12 - b)) & 1;
    }
    const BitVec out = crc_append(msg, spec);
    for (unsigned b = 0; b < 12; ++b) CHECK(out[85 + b] == work[85 + b]);
}

TEST_CASE("random 97-bit vectors pass with probability about 2^-12") {
    Rng rng(9);
    const CrcSpec spec = CrcSpec::crc12();
    const std::size_t trials = 1'000'000;
    std::size_t passes = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        BitVec v(97);
        for (auto& b : v) b = rng.bit();
        if (crc_check(v, spec)) ++passes;
    }
    const double p = 1.0 / 4096.0;
    const double sigma = std::sqrt(p * (1 - p) * trials);
    CHECK(std::abs(static_cast<double>(passes) - p * trials) <= 3.0 * sigma);
}
