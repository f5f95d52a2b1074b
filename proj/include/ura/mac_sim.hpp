#pragma once

#include <cstdint>
#include <vector>

#include "ura/codebook.hpp"
#include "ura/crc.hpp"
#include "ura/polar.hpp"
#include "ura/rng.hpp"

namespace ura {

struct SystemParams {
    std::size_t total_block = 30000;   // N_total = N + N_p
    std::size_t coded_block = 28000;   // N
    std::size_t preamble_bits = 15;    // B_p
    std::size_t payload_bits = 85;     // B_c
    double target_epsilon = 0.05;
};

// One active user's realization. The transmitted vector is regenerated on
// demand from (message, class, seed), so trials stay light in memory.
struct UserTx {
    std::size_t user_id = 0;
    BitVec message;              // B_c payload bits
    std::size_t class_index = 0;  // index into CodebookConfig::classes
    std::uint64_t interleaver_seed = 0;
};

enum class SampleMode { FixedCounts, Multinomial };

// Shared code constructions for every class of a config, built once.
// Classes reuse a construction keyed by code length (power does not enter
// the GA design SNR here; the table SINR the class was designed at does).
class CodeBank {
public:
    CodeBank(const CodebookConfig& config, const SnrTable& table, unsigned crc_bits);
    const CodeConstruction& for_class(std::size_t class_index) const;
    const CodebookConfig& config() const { return config_; }

private:
    CodebookConfig config_;
    std::vector<std::size_t> class_to_code_;
    std::vector<CodeConstruction> codes_;
};

// K_a users with classes per `mode`, uniform messages, and distinct
// interleaver seeds. Throws if the seed space cannot host K_a users.
std::vector<UserTx> sample_users(const CodebookConfig& config, std::size_t k_a, SampleMode mode,
                                 Rng& rng);

// The user's length-N transmitted vector: CRC append, polar encode, BPSK at
// sqrt(P), zero-pad and interleave.
std::vector<double> build_signal(const UserTx& user, const CodeBank& bank, const CrcSpec& crc);

struct ChannelOutput {
    std::vector<double> y;
};

// y = sum of user signals + z, z iid standard normal (omitted when
// add_noise is false, for exact-arithmetic tests).
ChannelOutput transmit(const std::vector<UserTx>& users, const CodeBank& bank, const CrcSpec& crc,
                       Rng& rng, bool add_noise = true);

// Genie stand-in for the compressive-sensing preamble decoder: the receiver
// learns each surviving user's class and interleaver, nothing else.
struct SideInfoEntry {
    std::size_t class_index;
    std::uint64_t interleaver_seed;
};

std::vector<SideInfoEntry> genie_preambles(const std::vector<UserTx>& users, double p_miss,
                                           Rng& rng);

// Probability that at least two of k_a users draw the same B_p-bit preamble,
// reported for documentation of the genie model.
double preamble_collision_probability(std::size_t k_a, std::size_t preamble_bits);

}  // namespace ura
