#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ura/crc.hpp"

namespace ura {

using LlrVec = std::vector<double>;

// A polar code instance: mother code of length 2^n with the first
// (2^n - punctured_length) codeword bits punctured, info set selected by
// Gaussian-approximation density evolution at the design SINR.
//
// Generator is G = B F^{kron n} (bit-reversal times the Arikan kernel power).
// info_set indexes the input vector u in 0-based natural order.
struct CodeConstruction {
    unsigned mother_exponent = 0;          // n
    std::size_t mother_length = 0;         // 2^n
    std::size_t punctured_length = 0;      // N_c, transmitted bits
    std::size_t payload_bits = 0;          // B_c
    unsigned crc_bits = 0;
    double design_snr_db = 0.0;
    std::vector<std::size_t> info_set;     // sorted, |I| = B_c + crc_bits
    std::vector<std::uint8_t> frozen;      // mask over u, 1 = frozen

    std::size_t puncture_count() const { return mother_length - punctured_length; }
    std::size_t info_count() const { return info_set.size(); }
};

// Info set = the (B_c + crc_bits) most reliable subchannels under GA density
// evolution with punctured codeword positions initialised at zero reliability.
// Throws std::invalid_argument on capacity violation or bad lengths.
CodeConstruction construct_code(unsigned mother_exponent, std::size_t punctured_length,
                                std::size_t payload_bits, unsigned crc_bits,
                                double design_snr_db);

// GA mean-LLR reliability of each u subchannel (natural u order) for the
// given construction geometry. Exposed for construction cross-checks.
std::vector<double> ga_subchannel_means(unsigned mother_exponent, std::size_t punctured_length,
                                        double design_snr_db);

// u -> u G over GF(2), then the first puncture_count positions dropped.
// info_bits length must equal |info_set|; frozen bits are 0.
BitVec polar_encode(const BitVec& info_bits, const CodeConstruction& code);

// Mother-length LLR vector from N_c transmitted-position LLRs: punctured
// positions (the first puncture_count) carry LLR exactly 0.
LlrVec expand_punctured_llrs(const LlrVec& channel_llrs, const CodeConstruction& code);

// Successive cancellation decode. llrs has mother length (zeros at punctured
// positions). Positive LLR favours bit 0; LLR 0 decides bit 0.
// Returns the |I| information bits.
BitVec sc_decode(const LlrVec& llrs, const CodeConstruction& code);

// CRC-aided SCL decode: returns the payload (B_c bits, CRC stripped) of the
// most probable CRC-valid path, or nullopt when no path passes the CRC.
// Path metrics use the exact log-likelihood update, so with an exhaustive
// list the selected path is the ML codeword among CRC-valid candidates.
std::optional<BitVec> ca_scl_decode(const LlrVec& llrs, const CodeConstruction& code,
                                    std::size_t list_size, const CrcSpec& crc);

}  // namespace ura
