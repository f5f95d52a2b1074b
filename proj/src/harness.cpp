#include "ura/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "ura/spreading.hpp"
#include "ura/stats.hpp"

namespace ura {

namespace {

// Deterministic parallel map over trial indices [0, n): results land in a
// slot per index, so the reduction is independent of the worker count.
template <typename Fn>
void parallel_trials(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t t = 0; t < n; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= n) return;
                fn(t);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

double pupe(const std::vector<BitVec>& sent, const std::vector<BitVec>& decoded) {
    if (sent.empty()) return 0.0;
    std::map<BitVec, std::size_t> pool;
    for (const auto& d : decoded) ++pool[d];
    std::size_t missed = 0;
    for (const auto& s : sent) {
        auto it = pool.find(s);
        if (it != pool.end() && it->second > 0)
            --it->second;
        else
            ++missed;
    }
    return static_cast<double>(missed) / static_cast<double>(sent.size());
}

CalibrationResult calibrate_required_snr(const CalibrationRequest& req) {
    if (req.bracket_hi_db < req.bracket_lo_db)
        throw std::invalid_argument("calibrate_required_snr: empty bracket");
    const CrcSpec crc = (req.crc_bits == 12) ? CrcSpec::crc12()
                                             : CrcSpec{req.crc_bits, 0x80F, 0};
    unsigned n = 1;
    while ((std::size_t{1} << n) < req.code_length) ++n;

    CalibrationResult result;
    result.code_length = req.code_length;
    result.list_size = req.list_size;

    const std::size_t block = 200;  // early-abort granularity, worker independent
    for (double snr_db = req.bracket_lo_db; snr_db <= req.bracket_hi_db + 1e-9;
         snr_db += req.grid_step_db) {
        const CodeConstruction code =
            construct_code(n, req.code_length, req.payload_bits, req.crc_bits, snr_db);
        const double snr = std::pow(10.0, snr_db / 10.0);
        const double amp = std::sqrt(snr);

        std::size_t done = 0, errors = 0;
        std::vector<std::uint8_t> block_err(block);
        while (done < req.trials) {
            const std::size_t count = std::min(block, req.trials - done);
            parallel_trials(count, req.workers, [&](std::size_t i) {
                const std::size_t trial = done + i;
                Rng rng(derive_seed(req.master_seed, req.code_length * 1000003 + trial,
                                    static_cast<std::uint64_t>(snr_db * 1e6 + 5e8)));
                BitVec payload(req.payload_bits);
                for (auto& b : payload) b = rng.bit() ? 1 : 0;
                const BitVec cw = polar_encode(crc_append(payload, crc), code);
                LlrVec llr(cw.size());
                for (std::size_t s = 0; s < cw.size(); ++s) {
                    const double y = (cw[s] ? -amp : amp) + rng.gauss();
                    llr[s] = 2.0 * amp * y;
                }
                auto decoded = ca_scl_decode(expand_punctured_llrs(llr, code), code,
                                             req.list_size, crc);
                block_err[i] = (!decoded || *decoded != payload) ? 1 : 0;
            });
            for (std::size_t i = 0; i < count; ++i) errors += block_err[i];
            done += count;
            const auto ci = wilson95(errors, done);
            if (ci.lo > req.eps) break;  // hopeless at this SNR
        }

        const auto ci = wilson95(errors, done);
        result.points.push_back({snr_db, static_cast<double>(errors) / static_cast<double>(done),
                                 ci.lo, ci.hi, done});
        if (done == req.trials && ci.hi <= req.eps) {
            result.required_snr_db = snr_db;
            result.found = true;
            break;
        }
    }
    if (!result.found && !result.points.empty())
        result.required_snr_db = result.points.back().snr_db;
    return result;
}

std::vector<ComparisonPoint> interference_comparison(const ComparisonRequest& req) {
    const CrcSpec crc = CrcSpec::crc12();
    unsigned n = 1;
    while ((std::size_t{1} << n) < req.code_length) ++n;
    const CodeConstruction code = construct_code(n, req.code_length, req.payload_bits,
                                                 req.crc_bits, req.construction_snr_db);
    const double rho = static_cast<double>(req.code_length) /
                       static_cast<double>(req.block_length);

    std::vector<ComparisonPoint> out;
    for (std::size_t k : req.interferer_counts) {
        for (double sinr_db : req.sinr_grid_db) {
            const double sinr = std::pow(10.0, sinr_db / 10.0);
            const double total_noise = 1.0 / sinr;  // unit symbol power
            const double z_var = total_noise - static_cast<double>(k) * rho;
            if (z_var <= 0.0)
                throw std::invalid_argument(
                    "interference_comparison: SINR unreachable with this interferer count");

            std::vector<std::uint8_t> errs(req.trials);
            parallel_trials(req.trials, req.workers, [&](std::size_t trial) {
                Rng rng(derive_seed(req.master_seed, k * 1000003 + trial,
                                    static_cast<std::uint64_t>(sinr_db * 1e6 + 5e8)));
                BitVec payload(req.payload_bits);
                for (auto& b : payload) b = rng.bit() ? 1 : 0;
                const BitVec cw = polar_encode(crc_append(payload, crc), code);
                std::vector<double> symbols(cw.size());
                for (std::size_t s = 0; s < cw.size(); ++s) symbols[s] = cw[s] ? -1.0 : 1.0;
                Interleaver own(rng.next_u64(), req.block_length);
                std::vector<double> y = spread(symbols, own);
                // Interferers follow the same spreading scheme with unit power.
                for (std::size_t u = 0; u < k; ++u) {
                    Interleaver pi(rng.next_u64(), req.block_length);
                    const auto& perm = pi.permutation();
                    for (std::size_t s = 0; s < req.code_length; ++s)
                        y[perm[s]] += rng.bit() ? -1.0 : 1.0;
                }
                const double z_sd = std::sqrt(z_var);
                LlrVec llr(req.code_length);
                const auto& own_perm = own.permutation();
                // Decoding always assumes Gaussian noise at the nominal SINR.
                for (std::size_t s = 0; s < req.code_length; ++s) {
                    const double r = y[own_perm[s]] + z_sd * rng.gauss();
                    llr[s] = 2.0 * r / total_noise;
                }
                auto decoded = ca_scl_decode(expand_punctured_llrs(llr, code), code,
                                             req.list_size, crc);
                errs[trial] = (!decoded || *decoded != payload) ? 1 : 0;
            });
            std::size_t errors = 0;
            for (auto e : errs) errors += e;
            const auto ci = wilson95(errors, req.trials);
            out.push_back({k, sinr_db,
                           static_cast<double>(errors) / static_cast<double>(req.trials), ci.lo,
                           ci.hi, req.trials});
        }
    }
    return out;
}

TrialResult system_trial(const CodeBank& bank, const ReceiverConfig& rx, const TrialRequest& req) {
    Rng rng(req.seed);
    auto users = sample_users(bank.config(), req.k_a, req.mode, rng);
    ChannelOutput y = transmit(users, bank, rx.crc, rng, req.add_noise);
    auto side_info = genie_preambles(users, req.p_miss, rng);
    SicResult sic = run_sic(y.y, side_info, bank, rx);

    TrialResult res;
    for (const auto& u : users) res.sent.push_back(u.message);
    res.decoded = std::move(sic.messages);
    res.reports = std::move(sic.reports);
    res.pupe_value = pupe(res.sent, res.decoded);
    return res;
}

CodebookConfig scaled_config(const CodebookConfig& config, double scale) {
    CodebookConfig c = config;
    c.preamble_power *= scale;
    for (auto& p : c.level_powers) p *= scale;
    for (auto& cls : c.classes) cls.power *= scale;
    return c;
}

SweepResult sweep_ebn0(const CodebookConfig& config, const SnrTable& table,
                       const ReceiverConfig& rx, const SweepRequest& req) {
    SweepResult result;
    for (std::size_t si = 0; si < req.power_scales.size(); ++si) {
        const double scale = req.power_scales[si];
        const CodebookConfig cfg = scaled_config(config, scale);
        const CodeBank bank(cfg, table, rx.crc.width);
        const double ebn0 = energy_per_bit(cfg, req.k_a).db;

        std::vector<double> trial_pupe(req.trials_per_point);
        std::vector<std::size_t> missed(req.trials_per_point);
        parallel_trials(req.trials_per_point, req.workers, [&](std::size_t t) {
            TrialRequest tr;
            tr.k_a = req.k_a;
            tr.mode = req.mode;
            tr.p_miss = req.p_miss;
            tr.seed = derive_seed(req.master_seed, si, t);
            const TrialResult r = system_trial(bank, rx, tr);
            trial_pupe[t] = r.pupe_value;
            missed[t] = static_cast<std::size_t>(
                std::llround(r.pupe_value * static_cast<double>(req.k_a)));
        });

        double mean = 0.0;
        std::size_t missed_total = 0;
        for (std::size_t t = 0; t < req.trials_per_point; ++t) {
            mean += trial_pupe[t];
            missed_total += missed[t];
        }
        mean /= static_cast<double>(req.trials_per_point);
        const auto ci = wilson95(missed_total, req.trials_per_point * req.k_a);
        result.points.push_back({scale, ebn0, mean, ci.lo, ci.hi, req.trials_per_point});
        if (!result.target_met && mean <= config.target_epsilon) {
            result.target_met = true;
            result.required_scale = scale;
            result.required_ebn0_db = ebn0;
        }
    }
    return result;
}

}  // namespace ura
