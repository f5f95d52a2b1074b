#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <thread>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ura/harness.hpp"
#include "ura/spreading.hpp"
#include "ura/stats.hpp"

namespace {

constexpr const char* kToolVersion = "ura_cli 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRuntime = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::ofstream open_output(const std::string& path, const std::string& digest,
                          std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << kToolVersion << " config_digest=" << digest << " seed=" << seed << "\n";
    out.precision(12);
    return out;
}

// Manifest values act as defaults; explicitly passed flags win.
template <typename T>
void manifest_default(const nlohmann::json& manifest, const CLI::Option* opt, const char* key,
                      T& value) {
    if (opt->count() == 0 && manifest.contains(key)) value = manifest.at(key).get<T>();
}

ura::SampleMode parse_mode(const std::string& mode) {
    if (mode == "fixed") return ura::SampleMode::FixedCounts;
    if (mode == "multinomial") return ura::SampleMode::Multinomial;
    throw CLI::ValidationError("--mode must be fixed or multinomial");
}

std::vector<double> parse_scales(const std::string& spec) {
    // Either "lo:hi:step" or a comma-separated list.
    std::vector<double> scales;
    if (spec.find(':') != std::string::npos) {
        double lo, hi, step;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw CLI::ValidationError("--scales expects lo:hi:step or a comma list");
        for (double s = lo; s <= hi + 1e-12; s += step) scales.push_back(s);
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) scales.push_back(std::stod(tok));
    }
    if (scales.empty()) throw CLI::ValidationError("--scales is empty");
    return scales;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polar-coded sparse-spreading unsourced random access simulator"};
    app.require_subcommand(1);

    std::string config_path, snr_table_path, out_path = "out.csv";
    std::uint64_t seed = 1;
    std::size_t workers = 1, list_size = 32, trials = 2000, k_a = 25;
    std::string mode = "fixed";
    double p_miss = 0.0;
    bool slow = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON manifest; flags override its values");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--out", out_path, "output file");
        cmd->add_option("--workers", workers, "worker threads");
        cmd->add_flag("--slow", slow, "enable full-scale settings");
    };

    // design
    auto* design = app.add_subcommand("design", "run the codebook designer");
    add_common(design);
    auto* d_table = design->add_option("--snr-table", snr_table_path, "required-SNR CSV");
    std::size_t d_ka = 0, d_seed_users = 0;
    double d_margin = 0.9, d_ratio = 2.0, d_pp = -1.0;
    std::string d_levels;  // level menus: "3584-8192/512;4096-5632/512"
    design->add_option("--k-a", d_ka, "target active users");
    design->add_option("--levels", d_levels, "length menus, e.g. 3584-8192/512;4096-5632/512");
    design->add_option("--seed-users", d_seed_users, "k_0 for the seed class");
    design->add_option("--margin", d_margin, "margin factor below k-bar");
    design->add_option("--power-ratio", d_ratio, "P_j / P_{j-1}");
    design->add_option("--preamble-power", d_pp, "P_p (default: strongest level)");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "single-user required-SNR calibration");
    add_common(cal);
    std::size_t c_length = 1024;
    double c_lo = -12.0, c_hi = -2.0, c_eps = 0.05;
    cal->add_option("--length", c_length, "code length N_c");
    cal->add_option("--bracket-lo", c_lo, "grid start (dB)");
    cal->add_option("--bracket-hi", c_hi, "grid end (dB)");
    cal->add_option("--eps", c_eps, "target BLER");
    cal->add_option("--list-size", list_size, "SCL list size");
    cal->add_option("--trials", trials, "trials per grid point");

    // interference-stats
    auto* ist = app.add_subcommand("interference-stats",
                                   "interference pmf, Gaussian distances, BLER comparison");
    add_common(ist);
    std::size_t i_k = 50, i_nc = 4096, i_n = 28000;
    std::string i_sinr_grid;
    ist->add_option("--interferers", i_k, "interfering user count K");
    ist->add_option("--length", i_nc, "codeword length N_c");
    ist->add_option("--block", i_n, "block length N");
    ist->add_option("--sinr-grid", i_sinr_grid,
                    "comma list of SINR dB points; when set, also runs the true-vs-Gaussian "
                    "BLER comparison into <out>.compare.csv");
    ist->add_option("--list-size", list_size, "SCL list size for the comparison");
    ist->add_option("--trials", trials, "trials per comparison point");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo PUPE trials on a codebook");
    add_common(sim);
    auto* s_table = sim->add_option("--snr-table", snr_table_path, "required-SNR CSV");
    auto* s_ka = sim->add_option("--k-a", k_a, "active users");
    sim->add_option("--list-size", list_size, "SCL list size");
    sim->add_option("--trials", trials, "trial count");
    sim->add_option("--mode", mode, "fixed|multinomial");
    sim->add_option("--p-miss", p_miss, "genie preamble erasure probability");

    // sweep
    auto* swp = app.add_subcommand("sweep", "power-scale sweep, PUPE vs E_b/N0");
    add_common(swp);
    auto* w_table = swp->add_option("--snr-table", snr_table_path, "required-SNR CSV");
    auto* w_ka = swp->add_option("--k-a", k_a, "active users");
    std::string w_scales = "1.0:2.0:0.25";
    swp->add_option("--scales", w_scales, "lo:hi:step or comma list of power scales");
    swp->add_option("--list-size", list_size, "SCL list size");
    swp->add_option("--trials", trials, "trials per point");
    swp->add_option("--mode", mode, "fixed|multinomial");
    swp->add_option("--p-miss", p_miss, "genie preamble erasure probability");

    CLI11_PARSE(app, argc, argv);

    nlohmann::json manifest;
    std::string digest = "none";
    try {
        if (!config_path.empty()) {
            const std::string text = read_file(config_path);
            digest = fnv1a_hex(text);
            manifest = nlohmann::json::parse(text);
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand(design)) {
            ura::DesignRequest req;
            if (manifest.contains("design")) {
                const auto& j = manifest.at("design");
                req.target_users = j.value("target_users", std::size_t{0});
                req.block_length = j.value("block_length", std::size_t{28000});
                req.payload_bits = j.value("payload_bits", std::size_t{85});
                req.preamble_bits = j.value("preamble_bits", std::size_t{15});
                req.preamble_length = j.value("preamble_length", std::size_t{2000});
                req.preamble_power = j.value("preamble_power", -1.0);
                req.target_epsilon = j.value("target_epsilon", 0.05);
                req.power_ratio = j.value("power_ratio", 2.0);
                req.seed_users = j.value("seed_users", std::size_t{0});
                req.margin_factor = j.value("margin_factor", 0.9);
                if (j.contains("lengths_per_level"))
                    req.lengths_per_level =
                        j.at("lengths_per_level").get<std::vector<std::vector<std::size_t>>>();
            }
            if (d_ka) req.target_users = d_ka;
            if (d_seed_users) req.seed_users = d_seed_users;
            manifest_default(manifest, design->get_option("--margin"), "margin_factor", d_margin);
            req.margin_factor = d_margin;
            req.power_ratio = d_ratio;
            if (d_pp >= 0.0) req.preamble_power = d_pp;
            if (!d_levels.empty()) {
                req.lengths_per_level.clear();
                std::stringstream levels(d_levels);
                std::string level;
                while (std::getline(levels, level, ';')) {
                    std::size_t lo, hi, step;
                    if (std::sscanf(level.c_str(), "%zu-%zu/%zu", &lo, &hi, &step) != 3)
                        throw CLI::ValidationError("--levels expects lo-hi/step[;...]");
                    std::vector<std::size_t> lens;
                    for (std::size_t l = lo; l <= hi; l += step) lens.push_back(l);
                    req.lengths_per_level.push_back(lens);
                }
            }
            if (req.target_users == 0) {
                std::cerr << "config error: target user count (--k-a) missing\n";
                return kExitConfigError;
            }
            if (snr_table_path.empty() || req.lengths_per_level.empty()) {
                std::cerr << "config error: --snr-table and --levels are required\n";
                return kExitConfigError;
            }
            const ura::SnrTable table = ura::SnrTable::load_csv(snr_table_path);

            ura::CodebookConfig cfg;
            try {
                cfg = ura::design_codebook(req, table);
            } catch (const std::exception& e) {
                std::cerr << "infeasible design: " << e.what() << "\n";
                return kExitInfeasible;
            }
            const auto report = ura::validate_config(cfg, table);
            if (!report.valid) {
                for (const auto& r : report.rows)
                    if (r.slack < -1e-9)
                        std::cerr << "infeasible design: class " << r.class_index << " (length "
                                  << r.code_length << ") violates the SINR inequality by "
                                  << -r.slack << "\n";
                return kExitInfeasible;
            }
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            out << cfg.to_json() << "\n";
            const auto e = ura::energy_per_bit(cfg, req.target_users);
            std::cout << "designed " << cfg.classes.size() << " classes for K_a="
                      << req.target_users << ", E_b/N0 = " << e.db << " dB, all slacks >= 0\n";
            return kExitOk;
        }

        if (app.got_subcommand(cal)) {
            ura::CalibrationRequest req;
            req.code_length = c_length;
            req.list_size = list_size;
            req.eps = c_eps;
            req.bracket_lo_db = c_lo;
            req.bracket_hi_db = c_hi;
            req.trials = trials;
            req.workers = workers;
            req.master_seed = seed;
            const auto result = ura::calibrate_required_snr(req);
            auto out = open_output(out_path, digest, seed);
            out << "length,snr_db,bler,ci_lo,ci_hi,trials,L\n";
            for (const auto& p : result.points)
                out << result.code_length << "," << p.snr_db << "," << p.bler << "," << p.ci_lo
                    << "," << p.ci_hi << "," << p.trials << "," << result.list_size << "\n";
            if (!result.found) {
                std::cerr << "calibration bracket failure: no grid point met eps\n";
                return kExitRuntime;
            }
            std::cout << "required SNR for length " << c_length << ": " << result.required_snr_db
                      << " dB (L=" << list_size << ")\n";
            return kExitOk;
        }

        if (app.got_subcommand(ist)) {
            const auto pmf = ura::interference_pmf(i_k, i_nc, i_n);
            const auto dist = ura::gaussian_approx_distance(pmf);
            auto out = open_output(out_path, digest, seed);
            out << "m,pmf,gaussian_mass\n";
            const double var =
                static_cast<double>(i_k) * static_cast<double>(i_nc) / static_cast<double>(i_n);
            for (long m = -static_cast<long>(i_k); m <= static_cast<long>(i_k); ++m)
                out << m << "," << pmf.at(m) << ","
                    << ura::gauss_interval_mass(m - 0.5, m + 0.5, var) << "\n";
            std::cout << "K=" << i_k << " variance=" << pmf.variance()
                      << " TV=" << dist.total_variation << " KS=" << dist.kolmogorov_smirnov
                      << "\n";
            if (!i_sinr_grid.empty()) {
                ura::ComparisonRequest creq;
                creq.code_length = i_nc;
                creq.block_length = i_n;
                creq.interferer_counts = {0, i_k};
                creq.sinr_grid_db = parse_scales(i_sinr_grid);
                creq.list_size = list_size;
                creq.trials = trials;
                creq.workers = workers;
                creq.master_seed = seed;
                const auto curves = ura::interference_comparison(creq);
                auto cout_file = open_output(out_path + ".compare.csv", digest, seed);
                cout_file << "interferers,sinr_db,bler,ci_lo,ci_hi\n";
                for (const auto& p : curves)
                    cout_file << p.interferers << "," << p.sinr_db << "," << p.bler << ","
                              << p.ci_lo << "," << p.ci_hi << "\n";
            }
            return kExitOk;
        }

        // simulate and sweep share the codebook + table setup
        std::string codebook_json;
        if (manifest.contains("codebook"))
            codebook_json = manifest.at("codebook").dump();
        else if (manifest.is_object() && manifest.contains("classes"))
            codebook_json = manifest.dump();
        if (codebook_json.empty()) {
            std::cerr << "config error: --config must carry the codebook JSON\n";
            return kExitConfigError;
        }
        const ura::CodebookConfig cfg = ura::CodebookConfig::from_json(codebook_json);
        if (snr_table_path.empty()) {
            std::cerr << "config error: --snr-table is required\n";
            return kExitConfigError;
        }
        const ura::SnrTable table = ura::SnrTable::load_csv(snr_table_path);

        ura::ReceiverConfig rx;
        rx.list_size = list_size;
        rx.workers = 1;

        if (app.got_subcommand(sim)) {
            if (s_ka->count() == 0) k_a = cfg.target_users;
            const ura::CodeBank bank(cfg, table, rx.crc.width);
            std::vector<ura::TrialResult> results(trials);
            std::vector<std::thread> noop;  // trials parallelised below
            {
                std::atomic<std::size_t> next{0};
                auto worker_fn = [&] {
                    for (;;) {
                        const std::size_t t = next.fetch_add(1);
                        if (t >= trials) return;
                        ura::TrialRequest tr;
                        tr.k_a = k_a;
                        tr.mode = parse_mode(mode);
                        tr.p_miss = p_miss;
                        tr.seed = ura::derive_seed(seed, t);
                        results[t] = ura::system_trial(bank, rx, tr);
                    }
                };
                std::vector<std::thread> pool;
                for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker_fn);
                worker_fn();
                for (auto& th : pool) th.join();
            }
            auto out = open_output(out_path, digest, seed);
            out << "trial,pupe,decoded,sent\n";
            double mean = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                out << t << "," << results[t].pupe_value << "," << results[t].decoded.size()
                    << "," << results[t].sent.size() << "\n";
                mean += results[t].pupe_value;
            }
            std::cout << "mean PUPE over " << trials << " trials: " << mean / trials << "\n";
            return kExitOk;
        }

        if (app.got_subcommand(swp)) {
            if (w_ka->count() == 0) k_a = cfg.target_users;
            ura::SweepRequest req;
            req.k_a = k_a;
            req.power_scales = parse_scales(w_scales);
            req.trials_per_point = trials;
            req.mode = parse_mode(mode);
            req.p_miss = p_miss;
            req.workers = workers;
            req.master_seed = seed;
            const auto result = ura::sweep_ebn0(cfg, table, rx, req);
            auto out = open_output(out_path, digest, seed);
            out << "scale,ebn0_db,pupe,ci_lo,ci_hi\n";
            for (const auto& p : result.points)
                out << p.scale << "," << p.ebn0_db << "," << p.pupe << "," << p.ci_lo << ","
                    << p.ci_hi << "\n";
            if (result.target_met)
                std::cout << "PUPE target met at scale " << result.required_scale
                          << ", E_b/N0 = " << result.required_ebn0_db << " dB\n";
            else
                std::cout << "PUPE target not met on this scale grid\n";
            return kExitOk;
        }
        (void)d_table;
        (void)s_table;
        (void)w_table;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
