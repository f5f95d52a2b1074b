#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ura/codebook.hpp"
#include "ura/mac_sim.hpp"
#include "ura/sic.hpp"

namespace ura {

// Fraction of sent messages missing from the decoded list, multiset
// semantics: duplicate sent messages each need their own list entry.
double pupe(const std::vector<BitVec>& sent, const std::vector<BitVec>& decoded);

struct CalibrationPoint {
    double snr_db;
    double bler;
    double ci_lo;
    double ci_hi;
    std::size_t trials;
};

struct CalibrationResult {
    std::size_t code_length;
    std::size_t list_size;
    double required_snr_db;  // smallest grid SNR whose upper CI <= eps
    bool found = false;
    std::vector<CalibrationPoint> points;
};

struct CalibrationRequest {
    std::size_t code_length;
    std::size_t payload_bits = 85;
    unsigned crc_bits = 12;
    std::size_t list_size = 32;
    double eps = 0.05;
    double bracket_lo_db;
    double bracket_hi_db;
    double grid_step_db = 0.1;
    std::size_t trials = 2000;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
};

// Single-user AWGN BLER scan on a 0.1 dB grid; per-point early abort when
// the lower confidence bound already exceeds eps (block-deterministic, so
// results do not depend on the worker count).
CalibrationResult calibrate_required_snr(const CalibrationRequest& req);

struct ComparisonPoint {
    std::size_t interferers;
    double sinr_db;
    double bler;
    double ci_lo;
    double ci_hi;
    std::size_t trials;
};

struct ComparisonRequest {
    std::size_t code_length = 4096;
    std::size_t block_length = 28000;
    std::size_t payload_bits = 85;
    unsigned crc_bits = 12;
    std::size_t list_size = 32;
    std::vector<std::size_t> interferer_counts{0, 10, 25, 50};
    std::vector<double> sinr_grid_db;
    double construction_snr_db = -13.9;
    std::size_t trials = 2000;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
};

// BLER of one user under true sparse-spreading interference vs the Gaussian
// noise the decoder assumes; SINR fixes the total noise-plus-interference
// power per case.
std::vector<ComparisonPoint> interference_comparison(const ComparisonRequest& req);

struct TrialResult {
    std::vector<BitVec> sent;
    std::vector<BitVec> decoded;
    std::vector<ClassReport> reports;
    double pupe_value = 0.0;
};

struct TrialRequest {
    std::size_t k_a;
    SampleMode mode = SampleMode::FixedCounts;
    double p_miss = 0.0;
    bool add_noise = true;
    std::uint64_t seed = 1;
};

// One full sample -> transmit -> genie -> run_sic -> pupe round.
TrialResult system_trial(const CodeBank& bank, const ReceiverConfig& rx, const TrialRequest& req);

struct SweepPoint {
    double scale;
    double ebn0_db;
    double pupe;
    double ci_lo;
    double ci_hi;
    std::size_t trials;
};

struct SweepRequest {
    std::size_t k_a;
    std::vector<double> power_scales;
    std::size_t trials_per_point = 20;
    SampleMode mode = SampleMode::FixedCounts;
    double p_miss = 0.0;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    bool target_met = false;
    double required_scale = 0.0;
    double required_ebn0_db = 0.0;  // at the smallest scale with pupe <= eps
};

// Uniformly scales every power (data classes and preamble), re-measures
// PUPE per point; E_b/N0 axis follows from the config energy ledger.
SweepResult sweep_ebn0(const CodebookConfig& config, const SnrTable& table,
                       const ReceiverConfig& rx, const SweepRequest& req);

// Config with all powers multiplied by `scale`.
CodebookConfig scaled_config(const CodebookConfig& config, double scale);

}  // namespace ura
