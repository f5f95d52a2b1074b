#include "ura/mac_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ura/spreading.hpp"

namespace ura {

namespace {

unsigned mother_exponent_for(std::size_t code_length) {
    unsigned n = 1;
    while ((std::size_t{1} << n) < code_length) ++n;
    return n;
}

}  // namespace

CodeBank::CodeBank(const CodebookConfig& config, const SnrTable& table, unsigned crc_bits)
    : config_(config) {
    std::unordered_map<std::size_t, std::size_t> by_length;
    class_to_code_.reserve(config.classes.size());
    for (const auto& cls : config.classes) {
        auto it = by_length.find(cls.code_length);
        if (it == by_length.end()) {
            const unsigned n = mother_exponent_for(cls.code_length);
            codes_.push_back(construct_code(n, cls.code_length, config.payload_bits, crc_bits,
                                            table.snr_db.at(cls.code_length)));
            it = by_length.emplace(cls.code_length, codes_.size() - 1).first;
        }
        class_to_code_.push_back(it->second);
    }
}

const CodeConstruction& CodeBank::for_class(std::size_t class_index) const {
    return codes_.at(class_to_code_.at(class_index));
}

std::vector<UserTx> sample_users(const CodebookConfig& config, std::size_t k_a, SampleMode mode,
                                 Rng& rng) {
    const std::size_t seed_space_bits = std::min<std::size_t>(config.preamble_bits, 63);
    const std::uint64_t seed_space = std::uint64_t{1} << seed_space_bits;
    if (k_a > seed_space)
        throw std::runtime_error("sample_users: more users than distinct interleaver seeds");

    std::vector<std::size_t> class_of_user;
    class_of_user.reserve(k_a);
    if (mode == SampleMode::FixedCounts) {
        if (config.total_users() != k_a)
            throw std::invalid_argument("sample_users: fixed-counts mode needs sum k_j^i = K_a");
        for (std::size_t c = 0; c < config.classes.size(); ++c)
            class_of_user.insert(class_of_user.end(), config.classes[c].users, c);
    } else {
        std::vector<double> cum;
        double acc = 0.0;
        for (const auto& c : config.classes) {
            acc += c.selection_prob;
            cum.push_back(acc);
        }
        if (std::abs(acc - 1.0) > config.prob_slack + 1e-9)
            throw std::invalid_argument("sample_users: selection probabilities do not sum to 1");
        for (std::size_t u = 0; u < k_a; ++u) {
            const double r = rng.real01() * acc;
            const auto it = std::lower_bound(cum.begin(), cum.end(), r);
            class_of_user.push_back(
                std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1));
        }
    }

    std::unordered_set<std::uint64_t> used_seeds;
    std::vector<UserTx> users(k_a);
    for (std::size_t u = 0; u < k_a; ++u) {
        users[u].user_id = u;
        users[u].class_index = class_of_user[u];
        users[u].message.resize(config.payload_bits);
        for (auto& b : users[u].message) b = rng.bit() ? 1 : 0;
        std::uint64_t seed;
        do {
            seed = rng.below(seed_space);
        } while (!used_seeds.insert(seed).second);
        users[u].interleaver_seed = seed;
    }
    return users;
}

std::vector<double> build_signal(const UserTx& user, const CodeBank& bank, const CrcSpec& crc) {
    const auto& cfg = bank.config();
    const auto& cls = cfg.classes.at(user.class_index);
    const auto& code = bank.for_class(user.class_index);
    const BitVec codeword = polar_encode(crc_append(user.message, crc), code);
    const double amp = std::sqrt(cls.power);
    std::vector<double> symbols(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i)
        symbols[i] = codeword[i] ? -amp : amp;  // bit b -> (1-2b) sqrt(P)
    Interleaver pi(user.interleaver_seed, cfg.block_length);
    return spread(symbols, pi);
}

ChannelOutput transmit(const std::vector<UserTx>& users, const CodeBank& bank, const CrcSpec& crc,
                       Rng& rng, bool add_noise) {
    const std::size_t n = bank.config().block_length;
    ChannelOutput out;
    out.y.assign(n, 0.0);
    for (const auto& u : users) {
        const auto x = build_signal(u, bank, crc);
        for (std::size_t i = 0; i < n; ++i) out.y[i] += x[i];
    }
    if (add_noise)
        for (std::size_t i = 0; i < n; ++i) out.y[i] += rng.gauss();
    return out;
}

std::vector<SideInfoEntry> genie_preambles(const std::vector<UserTx>& users, double p_miss,
                                           Rng& rng) {
    std::vector<SideInfoEntry> info;
    info.reserve(users.size());
    for (const auto& u : users) {
        if (p_miss > 0.0 && rng.real01() < p_miss) continue;
        info.push_back({u.class_index, u.interleaver_seed});
    }
    return info;
}

double preamble_collision_probability(std::size_t k_a, std::size_t preamble_bits) {
    const double space = std::pow(2.0, static_cast<double>(preamble_bits));
    double log_no_collision = 0.0;
    for (std::size_t i = 1; i < k_a; ++i)
        log_no_collision += std::log1p(-static_cast<double>(i) / space);
    return 1.0 - std::exp(log_no_collision);
}

}  // namespace ura
