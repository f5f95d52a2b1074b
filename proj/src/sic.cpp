#include "ura/sic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "ura/spreading.hpp"

namespace ura {

double effective_noise_variance(const SicState& state, const CodebookConfig& config,
                                std::size_t class_index, bool self_excluded) {
    const double n = static_cast<double>(config.block_length);
    double var = 1.0;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
        var += static_cast<double>(state.remaining[c]) *
               static_cast<double>(config.classes[c].code_length) * config.classes[c].power / n;
    }
    if (self_excluded && state.remaining[class_index] > 0) {
        var -= static_cast<double>(config.classes[class_index].code_length) *
               config.classes[class_index].power / n;
    }
    return var;
}

LlrVec llr_compute(const std::vector<double>& residual, const Interleaver& pi,
                   const CodeConstruction& code, double amplitude, double noise_var) {
    if (noise_var <= 0.0) throw std::invalid_argument("llr_compute: noise variance must be > 0");
    LlrVec owned = despread_llrs(residual, pi, code.punctured_length);
    const double scale = 2.0 * amplitude / noise_var;
    for (auto& v : owned) v *= scale;
    return expand_punctured_llrs(owned, code);
}

DecodeOutcome decode_class(const SicState& state, const CodebookConfig& config,
                           const CodeBank& bank, std::size_t class_index,
                           const std::vector<SideInfoEntry>& class_users,
                           const ReceiverConfig& rx) {
    const auto& cls = config.classes.at(class_index);
    const auto& code = bank.for_class(class_index);
    const double sigma2 = effective_noise_variance(state, config, class_index, true);
    const double amp = std::sqrt(cls.power);

    std::vector<std::optional<BitVec>> results(class_users.size());
    auto decode_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t u = lo; u < hi; ++u) {
            Interleaver pi(class_users[u].interleaver_seed, config.block_length);
            const LlrVec llrs = llr_compute(state.residual, pi, code, amp, sigma2);
            results[u] = ca_scl_decode(llrs, code, rx.list_size, rx.crc);
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(rx.workers, class_users.size()));
    if (workers == 1) {
        decode_range(0, class_users.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (class_users.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(class_users.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(decode_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    DecodeOutcome out;
    for (std::size_t u = 0; u < class_users.size(); ++u) {
        if (results[u]) {
            out.success_users.push_back(u);
            out.messages.push_back(std::move(*results[u]));
        }
    }
    return out;
}

void subtract(SicState& state, const CodebookConfig& config, const CodeBank& bank,
              std::size_t class_index, const std::vector<SideInfoEntry>& class_users,
              const DecodeOutcome& outcome, const CrcSpec& crc) {
    const auto& cls = config.classes.at(class_index);
    const auto& code = bank.for_class(class_index);
    const double amp = std::sqrt(cls.power);
    for (std::size_t s = 0; s < outcome.success_users.size(); ++s) {
        const auto& entry = class_users[outcome.success_users[s]];
        const BitVec codeword = polar_encode(crc_append(outcome.messages[s], crc), code);
        Interleaver pi(entry.interleaver_seed, config.block_length);
        const auto& perm = pi.permutation();
        for (std::size_t i = 0; i < codeword.size(); ++i)
            state.residual[perm[i]] -= codeword[i] ? -amp : amp;
        if (state.remaining[class_index] > 0) --state.remaining[class_index];
    }
}

SicResult run_sic(const std::vector<double>& y, const std::vector<SideInfoEntry>& side_info,
                  const CodeBank& bank, const ReceiverConfig& rx) {
    const auto& config = bank.config();
    if (y.size() != config.block_length) throw std::invalid_argument("run_sic: bad block length");

    std::vector<std::vector<SideInfoEntry>> per_class(config.classes.size());
    for (const auto& e : side_info) per_class.at(e.class_index).push_back(e);

    SicState state;
    state.residual = y;
    state.remaining.resize(config.classes.size());
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
        state.remaining[c] = (rx.noise_model == NoiseModel::Realized) ? per_class[c].size()
                                                                      : config.classes[c].users;
    }

    SicResult result;
    std::set<BitVec> seen;
    // Failures kept for optional cleanup passes, per class.
    std::vector<std::vector<SideInfoEntry>> failed(config.classes.size());

    auto process_class = [&](std::size_t c, const std::vector<SideInfoEntry>& users) {
        const double sigma2 = effective_noise_variance(state, config, c, true);
        DecodeOutcome outcome = decode_class(state, config, bank, c, users, rx);
        subtract(state, config, bank, c, users, outcome, rx.crc);
        std::vector<std::uint8_t> ok(users.size(), 0);
        for (std::size_t s : outcome.success_users) ok[s] = 1;
        std::vector<SideInfoEntry> still_failed;
        for (std::size_t u = 0; u < users.size(); ++u)
            if (!ok[u]) still_failed.push_back(users[u]);
        failed[c] = std::move(still_failed);
        for (auto& msg : outcome.messages)
            if (seen.insert(msg).second) result.messages.push_back(msg);
        result.reports.push_back({c, config.classes[c].code_length, config.classes[c].power,
                                  users.size(), outcome.success_users.size(), sigma2});
    };

    // Decode order is the reverse of the design order.
    for (std::size_t i = config.classes.size(); i-- > 0;) process_class(i, per_class[i]);

    for (std::size_t pass = 0; pass < rx.cleanup_passes; ++pass) {
        bool any = false;
        for (std::size_t i = config.classes.size(); i-- > 0;) {
            if (failed[i].empty()) continue;
            any = true;
            auto users = std::move(failed[i]);
            failed[i].clear();
            process_class(i, users);
        }
        if (!any) break;
    }
    return result;
}

}  // namespace ura
