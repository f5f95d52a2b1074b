#include "ura/codebook.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ura/stats.hpp"

namespace ura {

double SnrTable::linear(std::size_t length) const {
    auto it = snr_db.find(length);
    if (it == snr_db.end()) throw std::out_of_range("SnrTable: length not covered");
    return std::pow(10.0, it->second / 10.0);
}

SnrTable SnrTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SnrTable: cannot open " + path);
    SnrTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // length,snr_db,source,list_size
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string len_s, snr_s, src_s, list_s;
        std::getline(ss, len_s, ',');
        std::getline(ss, snr_s, ',');
        std::getline(ss, src_s, ',');
        std::getline(ss, list_s, ',');
        t.snr_db[std::stoul(len_s)] = std::stod(snr_s);
        t.source = src_s;
        if (!list_s.empty()) t.list_size = std::stoul(list_s);
    }
    if (t.snr_db.empty()) throw std::runtime_error("SnrTable: no rows in " + path);
    return t;
}

void SnrTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("SnrTable: cannot write " + path);
    out << "length,snr_db,source,list_size\n";
    for (const auto& [len, db] : snr_db)
        out << len << "," << db << "," << source << "," << list_size << "\n";
}

std::size_t CodebookConfig::total_users() const {
    std::size_t s = 0;
    for (const auto& c : classes) s += c.users;
    return s;
}

std::string CodebookConfig::to_json() const {
    nlohmann::json j;
    j["block_length"] = block_length;
    j["payload_bits"] = payload_bits;
    j["preamble_bits"] = preamble_bits;
    j["preamble_length"] = preamble_length;
    j["preamble_power"] = preamble_power;
    j["target_users"] = target_users;
    j["target_epsilon"] = target_epsilon;
    j["level_powers"] = level_powers;
    j["prob_slack"] = prob_slack;
    j["classes"] = nlohmann::json::array();
    for (const auto& c : classes) {
        j["classes"].push_back({{"level", c.level},
                                {"length_index", c.length_index},
                                {"code_length", c.code_length},
                                {"power", c.power},
                                {"users", c.users},
                                {"selection_prob", c.selection_prob}});
    }
    return j.dump(2);
}

CodebookConfig CodebookConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CodebookConfig c;
    c.block_length = j.at("block_length").get<std::size_t>();
    c.payload_bits = j.at("payload_bits").get<std::size_t>();
    c.preamble_bits = j.at("preamble_bits").get<std::size_t>();
    c.preamble_length = j.at("preamble_length").get<std::size_t>();
    c.preamble_power = j.at("preamble_power").get<double>();
    c.target_users = j.at("target_users").get<std::size_t>();
    c.target_epsilon = j.at("target_epsilon").get<double>();
    c.level_powers = j.at("level_powers").get<std::vector<double>>();
    if (j.contains("prob_slack")) c.prob_slack = j.at("prob_slack").get<double>();
    for (const auto& jc : j.at("classes")) {
        CodeClass k;
        k.level = jc.at("level").get<std::size_t>();
        k.length_index = jc.at("length_index").get<std::size_t>();
        k.code_length = jc.at("code_length").get<std::size_t>();
        k.power = jc.at("power").get<double>();
        k.users = jc.at("users").get<std::size_t>();
        k.selection_prob = jc.at("selection_prob").get<double>();
        c.classes.push_back(k);
    }
    return c;
}

double normal_approx_snr(std::size_t code_length, std::size_t total_bits, double eps) {
    if (code_length == 0) throw std::invalid_argument("normal_approx_snr: empty code");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("normal_approx_snr: eps in (0,1)");
    const double rate = static_cast<double>(total_bits) / static_cast<double>(code_length);
    const double qi = q_inv(eps);
    const double log2e = 1.4426950408889634;
    auto achievable = [&](double p) {
        const double cap = 0.5 * std::log2(1.0 + p);
        const double disp = (p * (p + 2.0)) / (2.0 * (p + 1.0) * (p + 1.0)) * log2e * log2e;
        return cap - std::sqrt(disp / static_cast<double>(code_length)) * qi;
    };
    double lo = 1e-9, hi = 1.0;
    while (achievable(hi) < rate) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("normal_approx_snr: no solution in bracket");
    }
    if (achievable(lo) >= rate) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (achievable(mid) >= rate)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double interference_power(const CodebookConfig& config, std::size_t index) {
    if (index >= config.classes.size()) throw std::out_of_range("interference_power: bad class");
    const auto& cur = config.classes[index];
    const double n = static_cast<double>(config.block_length);
    double p = 0.0;
    for (std::size_t a = 0; a < index; ++a) {
        const auto& c = config.classes[a];
        if (c.level > cur.level || (c.level == cur.level && c.length_index >= cur.length_index))
            throw std::invalid_argument("interference_power: classes not in design order");
        p += static_cast<double>(c.users) * static_cast<double>(c.code_length) * c.power / n;
    }
    p += static_cast<double>(cur.users > 0 ? cur.users - 1 : 0) *
         static_cast<double>(cur.code_length) * cur.power / n;
    return p;
}

std::size_t max_supported_users(double power, double required_snr, double prior_interference,
                                std::size_t code_length, std::size_t block_length) {
    if (power / (1.0 + prior_interference) < required_snr) return 0;
    // P / (1 + A + (k-1) Nc P / N) >= snr  <=>  k - 1 <= (P/snr - 1 - A) N / (Nc P)
    const double n = static_cast<double>(block_length);
    const double per_user = static_cast<double>(code_length) * power / n;
    const double room = (power / required_snr - 1.0 - prior_interference) / per_user;
    return 1 + static_cast<std::size_t>(std::floor(room + 1e-12));
}

double min_power_p1(double snr0, std::size_t k0, std::size_t n0, std::size_t block_length) {
    if (k0 == 0) throw std::invalid_argument("min_power_p1: need at least one user");
    const double denom = 1.0 / snr0 - static_cast<double>(k0 - 1) * static_cast<double>(n0) /
                                          static_cast<double>(block_length);
    if (denom <= 0.0) throw std::runtime_error("min_power_p1: infeasible seed (denominator <= 0)");
    return 1.0 / denom;
}

CodebookConfig design_codebook(const DesignRequest& req, const SnrTable& table) {
    if (req.target_users == 0) throw std::invalid_argument("design_codebook: K_a must be positive");
    if (req.lengths_per_level.empty())
        throw std::invalid_argument("design_codebook: need at least one power level");
    for (const auto& lens : req.lengths_per_level) {
        if (lens.empty()) throw std::invalid_argument("design_codebook: empty length menu");
        for (std::size_t i = 0; i + 1 < lens.size(); ++i)
            if (lens[i] >= lens[i + 1])
                throw std::invalid_argument("design_codebook: lengths must be strictly increasing");
        for (std::size_t len : lens)
            if (!table.covers(len))
                throw std::out_of_range("design_codebook: SNR table does not cover length " +
                                        std::to_string(len));
    }

    CodebookConfig cfg;
    cfg.block_length = req.block_length;
    cfg.payload_bits = req.payload_bits;
    cfg.preamble_bits = req.preamble_bits;
    cfg.preamble_length = req.preamble_length;
    cfg.target_users = req.target_users;
    cfg.target_epsilon = req.target_epsilon;

    const std::size_t n0 = req.lengths_per_level.front().front();
    const std::size_t k0 = req.seed_users ? req.seed_users : req.target_users;
    const double p1 = min_power_p1(table.linear(n0), k0, n0, req.block_length);

    double level_power = p1;
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < req.lengths_per_level.size() && assigned < req.target_users; ++j) {
        cfg.level_powers.push_back(level_power);
        const auto& lens = req.lengths_per_level[j];
        for (std::size_t i = 0; i < lens.size() && assigned < req.target_users; ++i) {
            CodeClass cls;
            cls.level = j;
            cls.length_index = i;
            cls.code_length = lens[i];
            cls.power = level_power;

            double prior = 0.0;
            for (const auto& c : cfg.classes)
                prior += static_cast<double>(c.users) * static_cast<double>(c.code_length) *
                         c.power / static_cast<double>(req.block_length);

            const std::size_t cap = max_supported_users(level_power, table.linear(lens[i]), prior,
                                                        lens[i], req.block_length);
            std::size_t k = static_cast<std::size_t>(
                std::floor(req.margin_factor * static_cast<double>(cap)));
            if (k == 0 && cap >= 1) k = 1;  // margin never disables a feasible class
            if (k == 0) continue;
            if (assigned + k > req.target_users) k = req.target_users - assigned;  // truncate last
            cls.users = k;
            assigned += k;
            cfg.classes.push_back(cls);
        }
        level_power *= req.power_ratio;
    }

    if (assigned < req.target_users)
        throw std::runtime_error("design_codebook: cannot reach K_a=" +
                                 std::to_string(req.target_users) + " with the given menu (got " +
                                 std::to_string(assigned) + ")");

    for (auto& c : cfg.classes)
        c.selection_prob = static_cast<double>(c.users) / static_cast<double>(req.target_users);
    cfg.preamble_power = (req.preamble_power >= 0.0) ? req.preamble_power
                                                     : cfg.level_powers.back();
    return cfg;
}

std::vector<double> selection_probabilities(const CodebookConfig& config, std::size_t k_a,
                                            bool strict) {
    const std::size_t total = config.total_users();
    if (strict && total != k_a)
        throw std::runtime_error("selection_probabilities: class loads sum to " +
                                 std::to_string(total) + ", expected " + std::to_string(k_a));
    std::vector<double> p;
    p.reserve(config.classes.size());
    for (const auto& c : config.classes)
        p.push_back(static_cast<double>(c.users) / static_cast<double>(k_a));
    return p;
}

EnergyPerBit energy_per_bit(const CodebookConfig& config, std::size_t k_a) {
    double energy = static_cast<double>(k_a) * static_cast<double>(config.preamble_length) *
                    config.preamble_power;
    double users = 0.0;
    for (const auto& c : config.classes) {
        energy += static_cast<double>(c.users) * static_cast<double>(c.code_length) * c.power;
        users += static_cast<double>(c.users);
    }
    const double bits = 2.0 * static_cast<double>(k_a) * static_cast<double>(config.preamble_bits) +
                        2.0 * static_cast<double>(config.payload_bits) * users;
    EnergyPerBit e;
    e.linear = energy / bits;
    e.db = 10.0 * std::log10(e.linear);
    return e;
}

FeasibilityReport validate_config(const CodebookConfig& config, const SnrTable& table) {
    FeasibilityReport rep;
    for (std::size_t idx = 0; idx < config.classes.size(); ++idx) {
        const auto& c = config.classes[idx];
        const double pint = interference_power(config, idx);
        const double sinr = c.power / (1.0 + pint);
        const double req = table.linear(c.code_length);
        FeasibilityReport::Row row{idx, c.code_length, c.power, pint, sinr, req, sinr - req};
        if (row.slack < -1e-9) rep.valid = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace ura
