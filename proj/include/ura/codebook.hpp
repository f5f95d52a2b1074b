#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ura {

// Required-SINR table: code length -> SINR (dB) achieving the target BLER.
// Source records provenance (normal approximation bound, paper table,
// or a calibration run) together with the list size that produced it.
struct SnrTable {
    std::map<std::size_t, double> snr_db;
    std::size_t payload_bits = 85;
    unsigned crc_bits = 12;
    std::size_t list_size = 0;
    double target_bler = 0.05;
    std::string source;

    bool covers(std::size_t length) const { return snr_db.count(length) > 0; }
    double linear(std::size_t length) const;

    static SnrTable load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
};

// One (code length, power level) class and its designed load.
struct CodeClass {
    std::size_t level = 0;       // power level index j (0-based)
    std::size_t length_index = 0;  // i within the level (0-based, lengths ascending)
    std::size_t code_length = 0;   // N_j^i
    double power = 0.0;            // P_j, linear
    std::size_t users = 0;         // k_j^i
    double selection_prob = 0.0;   // p_j^i = k_j^i / K_a
};

struct CodebookConfig {
    std::size_t block_length = 28000;  // N, coded portion
    std::size_t payload_bits = 85;     // B_c
    std::size_t preamble_bits = 15;    // B_p
    std::size_t preamble_length = 2000;  // N_p
    double preamble_power = 0.0;         // P_p
    std::size_t target_users = 0;        // K_a
    double target_epsilon = 0.05;
    std::vector<double> level_powers;    // P_1 < ... < P_s
    std::vector<CodeClass> classes;      // design order: level then length ascending
    double prob_slack = 1e-9;            // tolerated |sum p - 1|

    std::size_t total_users() const;

    std::string to_json() const;
    static CodebookConfig from_json(const std::string& text);
};

// Smallest P with R <= C(P) - sqrt(V(P)/N_c) * Qinv(eps), real-AWGN capacity
// and dispersion; a lower bound on the SINR any real code needs.
double normal_approx_snr(std::size_t code_length, std::size_t total_bits, double eps);

// Average interference power treated as noise by class `index` of `config`
// (design order), counting lower levels, shorter same-level classes, and the
// k-1 same-class peers.
double interference_power(const CodebookConfig& config, std::size_t index);

// Largest k with P / (1 + prior + (k-1) N_c P / N) >= required_snr; 0 when
// even a lone user is infeasible.
std::size_t max_supported_users(double power, double required_snr, double prior_interference,
                                std::size_t code_length, std::size_t block_length);

// P_1 = 1 / (1/snr0 - (k0-1) N0 / N). Throws when the seed is infeasible.
double min_power_p1(double snr0, std::size_t k0, std::size_t n0, std::size_t block_length);

// Eq.-by-eq. greedy designer: seeds P_1 from (N_0, k_0), walks classes in
// design order applying the margin rule, doubles (or `power_ratio`s) the
// power per level, stops once K_a users are covered.
struct DesignRequest {
    std::size_t target_users = 0;                         // K_a
    std::size_t block_length = 28000;
    std::size_t payload_bits = 85;
    std::size_t preamble_bits = 15;
    std::size_t preamble_length = 2000;
    double preamble_power = -1.0;  // <0: default to the strongest level power
    double target_epsilon = 0.05;
    std::vector<std::vector<std::size_t>> lengths_per_level;  // ascending within level
    double power_ratio = 2.0;
    std::size_t seed_users = 0;     // k_0 for the shortest lowest-power class
    double margin_factor = 0.9;
};

CodebookConfig design_codebook(const DesignRequest& req, const SnrTable& table);

// p_j^i = k_j^i / K_a. strict: throws unless sum k == K_a.
std::vector<double> selection_probabilities(const CodebookConfig& config, std::size_t k_a,
                                            bool strict);

struct EnergyPerBit {
    double linear = 0.0;
    double db = 0.0;
};
EnergyPerBit energy_per_bit(const CodebookConfig& config, std::size_t k_a);

// Per-class SINR slack report for Eq. (10); valid iff no slack below -1e-9.
struct FeasibilityReport {
    struct Row {
        std::size_t class_index;
        std::size_t code_length;
        double power;
        double interference;
        double sinr;
        double required_snr;
        double slack;
    };
    std::vector<Row> rows;
    bool valid = true;
};
FeasibilityReport validate_config(const CodebookConfig& config, const SnrTable& table);

}  // namespace ura
