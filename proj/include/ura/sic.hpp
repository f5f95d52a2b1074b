#pragma once

#include <cstdint>
#include <vector>

#include "ura/crc.hpp"
#include "ura/mac_sim.hpp"

namespace ura {

enum class NoiseModel { Realized, Designed };

struct ReceiverConfig {
    std::size_t list_size = 32;
    NoiseModel noise_model = NoiseModel::Realized;
    std::size_t cleanup_passes = 0;
    CrcSpec crc = CrcSpec::crc12();
    std::size_t workers = 1;  // per-user decode fan-out within one class pass
};

struct ClassReport {
    std::size_t class_index;
    std::size_t code_length;
    double power;
    std::size_t attempted;
    std::size_t succeeded;
    double noise_variance_used;
};

struct SicResult {
    std::vector<BitVec> messages;       // deduplicated decoded list
    std::vector<ClassReport> reports;   // in processed (decode) order
};

// Residual signal plus per-class bookkeeping during SIC.
struct SicState {
    std::vector<double> residual;
    std::vector<std::size_t> remaining;  // per class, undecoded user count
};

// 1 + sum over not-yet-subtracted classes of count * N_len * P / N, minus the
// current user's own contribution when self_excluded.
double effective_noise_variance(const SicState& state, const CodebookConfig& config,
                                std::size_t class_index, bool self_excluded);

// BPSK LLRs for one user from the residual: owned positions get
// 2 sqrt(P) r / sigma^2, punctured mother positions 0.
LlrVec llr_compute(const std::vector<double>& residual, const Interleaver& pi,
                   const CodeConstruction& code, double amplitude, double noise_var);

struct DecodeOutcome {
    std::vector<std::size_t> success_users;  // indices into the pass's user list
    std::vector<BitVec> messages;            // payload per success
};

// Decode every listed user of one class independently against the current
// residual (no intra-pass subtraction).
DecodeOutcome decode_class(const SicState& state, const CodebookConfig& config,
                           const CodeBank& bank, std::size_t class_index,
                           const std::vector<SideInfoEntry>& class_users,
                           const ReceiverConfig& rx);

// Subtract the re-encoded, re-spread signals of this pass's successes and
// decrement the class count.
void subtract(SicState& state, const CodebookConfig& config, const CodeBank& bank,
              std::size_t class_index, const std::vector<SideInfoEntry>& class_users,
              const DecodeOutcome& outcome, const CrcSpec& crc);

// Full TIN-SIC pipeline: classes in reverse design order (highest power
// first, longest length first within a level).
SicResult run_sic(const std::vector<double>& y, const std::vector<SideInfoEntry>& side_info,
                  const CodeBank& bank, const ReceiverConfig& rx);

}  // namespace ura
