#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "ura/polar.hpp"

namespace ura {

namespace {

// Exact path-metric penalty: log(1 + exp(-t)) with t = (1-2u)*llr.
// Keeps CA-SCL selection equivalent to ML over the retained list.
double metric_penalty(double t) {
    if (t >= 0.0) return std::log1p(std::exp(-t));
    return -t + std::log1p(std::exp(t));
}

double boxplus(double a, double b) {
    const double sa = std::abs(a), sb = std::abs(b);
    const double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
    return sign * std::min(sa, sb) + std::log1p(std::exp(-(sa + sb))) -
           std::log1p(std::exp(-std::abs(sa - sb)));
}

// Tal-Vardy list decoder state with lazy-copied per-layer arrays.
// Layer lambda holds 2^(m-lambda) LLRs and paired partial-sum bits per slot;
// decision bits are kept in a shared-tail arena so cloning a path is O(1).
class ListDecoder {
public:
    ListDecoder(const CodeConstruction& code, std::size_t list_size)
        : code_(code),
          m_(code.mother_exponent),
          n_(code.mother_length),
          L_(list_size) {
        if (L_ < 1) throw std::invalid_argument("ca_scl_decode: list size must be >= 1");
        llr_.resize(m_ + 1);
        bits_.resize(m_ + 1);
        slot_of_path_.resize(m_ + 1);
        slot_refs_.resize(m_ + 1);
        free_slots_.resize(m_ + 1);
        for (unsigned lam = 0; lam <= m_; ++lam) {
            const std::size_t len = n_ >> lam;
            llr_[lam].assign(L_ * len, 0.0);
            bits_[lam].assign(L_ * 2 * len, 0);
            slot_of_path_[lam].assign(L_, 0);
            slot_refs_[lam].assign(L_, 0);
            free_slots_[lam].resize(L_);
            for (std::size_t s = 0; s < L_; ++s) free_slots_[lam][s] = L_ - 1 - s;
        }
        active_.assign(L_, false);
        metric_.assign(L_, 0.0);
        head_.assign(L_, -1);
        free_paths_.resize(L_);
        for (std::size_t p = 0; p < L_; ++p) free_paths_[p] = L_ - 1 - p;
        nodes_.reserve(2 * L_ * (code_.info_count() + 1));
    }

    std::optional<BitVec> decode(const LlrVec& channel_llrs, const CrcSpec& crc) {
        const std::size_t p0 = assign_initial_path();
        std::copy(channel_llrs.begin(), channel_llrs.end(), llr_ptr(0, p0));

        for (std::size_t phi = 0; phi < n_; ++phi) {
            calc_llr(m_, phi);
            if (code_.frozen[phi])
                continue_frozen(phi);
            else
                continue_unfrozen(phi);
            if (phi % 2 == 1) update_bits(m_, phi);
        }
        return select_output(crc);
    }

private:
    double* llr_ptr(unsigned lam, std::size_t path) {
        return llr_[lam].data() + slot_of_path_[lam][path] * (n_ >> lam);
    }
    std::uint8_t* bits_ptr(unsigned lam, std::size_t path) {
        return bits_[lam].data() + slot_of_path_[lam][path] * 2 * (n_ >> lam);
    }

    // Copy-on-write access for a layer a path is about to modify.
    void ensure_private(unsigned lam, std::size_t path) {
        const std::size_t s = slot_of_path_[lam][path];
        if (slot_refs_[lam][s] == 1) return;
        --slot_refs_[lam][s];
        const std::size_t t = free_slots_[lam].back();
        free_slots_[lam].pop_back();
        const std::size_t len = n_ >> lam;
        std::memcpy(llr_[lam].data() + t * len, llr_[lam].data() + s * len, len * sizeof(double));
        std::memcpy(bits_[lam].data() + t * 2 * len, bits_[lam].data() + s * 2 * len, 2 * len);
        slot_of_path_[lam][path] = t;
        slot_refs_[lam][t] = 1;
    }

    std::size_t assign_initial_path() {
        const std::size_t p = free_paths_.back();
        free_paths_.pop_back();
        active_[p] = true;
        metric_[p] = 0.0;
        head_[p] = -1;
        for (unsigned lam = 0; lam <= m_; ++lam) {
            const std::size_t s = free_slots_[lam].back();
            free_slots_[lam].pop_back();
            slot_of_path_[lam][p] = s;
            slot_refs_[lam][s] = 1;
        }
        return p;
    }

    std::size_t clone_path(std::size_t src) {
        const std::size_t p = free_paths_.back();
        free_paths_.pop_back();
        active_[p] = true;
        metric_[p] = metric_[src];
        head_[p] = head_[src];
        for (unsigned lam = 0; lam <= m_; ++lam) {
            const std::size_t s = slot_of_path_[lam][src];
            slot_of_path_[lam][p] = s;
            ++slot_refs_[lam][s];
        }
        return p;
    }

    void kill_path(std::size_t p) {
        active_[p] = false;
        free_paths_.push_back(p);
        for (unsigned lam = 0; lam <= m_; ++lam) {
            const std::size_t s = slot_of_path_[lam][p];
            if (--slot_refs_[lam][s] == 0) free_slots_[lam].push_back(s);
        }
    }

    void calc_llr(unsigned lam, std::size_t phi) {
        if (lam == 0) return;
        if (phi % 2 == 0) calc_llr(lam - 1, phi >> 1);
        const std::size_t len = n_ >> lam;
        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p]) continue;
            ensure_private(lam, p);
            double* out = llr_ptr(lam, p);
            const double* in = llr_ptr(lam - 1, p);
            const std::uint8_t* c = bits_ptr(lam, p);
            if (phi % 2 == 0) {
                for (std::size_t b = 0; b < len; ++b) out[b] = boxplus(in[2 * b], in[2 * b + 1]);
            } else {
                for (std::size_t b = 0; b < len; ++b)
                    out[b] = (c[2 * b] ? -in[2 * b] : in[2 * b]) + in[2 * b + 1];
            }
        }
    }

    void update_bits(unsigned lam, std::size_t phi) {
        const std::size_t psi = phi >> 1;
        const std::size_t len = n_ >> lam;
        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p]) continue;
            ensure_private(lam - 1, p);
            const std::uint8_t* c = bits_ptr(lam, p);
            std::uint8_t* c1 = bits_ptr(lam - 1, p);
            for (std::size_t b = 0; b < len; ++b) {
                c1[2 * (2 * b) + (psi % 2)] = c[2 * b] ^ c[2 * b + 1];
                c1[2 * (2 * b + 1) + (psi % 2)] = c[2 * b + 1];
            }
        }
        if (psi % 2 == 1) update_bits(lam - 1, psi);
    }

    void push_decision(std::size_t p, std::uint8_t bit) {
        nodes_.push_back({head_[p], bit});
        head_[p] = static_cast<std::int32_t>(nodes_.size()) - 1;
    }

    void set_bit(std::size_t p, std::size_t phi, std::uint8_t bit) {
        ensure_private(m_, p);
        bits_ptr(m_, p)[phi % 2] = bit;
    }

    void continue_frozen(std::size_t phi) {
        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p]) continue;
            metric_[p] += metric_penalty(llr_ptr(m_, p)[0]);
            set_bit(p, phi, 0);
        }
    }

    void continue_unfrozen(std::size_t phi) {
        struct Cand {
            double metric;
            std::uint32_t path;
            std::uint8_t bit;
        };
        std::vector<Cand> cands;
        cands.reserve(2 * L_);
        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p]) continue;
            const double llr = llr_ptr(m_, p)[0];
            cands.push_back({metric_[p] + metric_penalty(llr), static_cast<std::uint32_t>(p), 0});
            cands.push_back({metric_[p] + metric_penalty(-llr), static_cast<std::uint32_t>(p), 1});
        }
        const std::size_t keep = std::min(L_, cands.size());
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.metric != b.metric) return a.metric < b.metric;
            if (a.path != b.path) return a.path < b.path;
            return a.bit < b.bit;
        });

        std::vector<std::uint8_t> keep0(L_, 0), keep1(L_, 0);
        for (std::size_t i = 0; i < keep; ++i)
            (cands[i].bit ? keep1 : keep0)[cands[i].path] = 1;

        // Free abandoned paths first so clones below always find a slot.
        for (std::size_t p = 0; p < L_; ++p)
            if (active_[p] && !keep0[p] && !keep1[p]) kill_path(p);

        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p] || (!keep0[p] && !keep1[p])) continue;
            const double llr = llr_ptr(m_, p)[0];
            if (keep0[p] && keep1[p]) {
                const std::size_t q = clone_path(p);
                metric_[p] += metric_penalty(llr);
                set_bit(p, phi, 0);
                push_decision(p, 0);
                metric_[q] += metric_penalty(-llr);
                set_bit(q, phi, 1);
                push_decision(q, 1);
            } else {
                const std::uint8_t bit = keep1[p] ? 1 : 0;
                metric_[p] += metric_penalty(bit ? -llr : llr);
                set_bit(p, phi, bit);
                push_decision(p, bit);
            }
        }
    }

    BitVec path_info_bits(std::size_t p) const {
        BitVec info(code_.info_count());
        std::int32_t node = head_[p];
        for (std::size_t i = info.size(); i-- > 0;) {
            info[i] = nodes_[static_cast<std::size_t>(node)].bit;
            node = nodes_[static_cast<std::size_t>(node)].parent;
        }
        return info;
    }

    std::optional<BitVec> select_output(const CrcSpec& crc) {
        double best_metric = 0.0;
        std::size_t best_path = L_;
        BitVec best_info;
        for (std::size_t p = 0; p < L_; ++p) {
            if (!active_[p]) continue;
            BitVec info = path_info_bits(p);
            if (!crc_check(info, crc)) continue;
            if (best_path == L_ || metric_[p] < best_metric ||
                (metric_[p] == best_metric && p < best_path)) {
                best_metric = metric_[p];
                best_path = p;
                best_info = std::move(info);
            }
        }
        if (best_path == L_) return std::nullopt;
        best_info.resize(code_.payload_bits);
        return best_info;
    }

    struct DecisionNode {
        std::int32_t parent;
        std::uint8_t bit;
    };

    const CodeConstruction& code_;
    unsigned m_;
    std::size_t n_;
    std::size_t L_;
    std::vector<std::vector<double>> llr_;
    std::vector<std::vector<std::uint8_t>> bits_;
    std::vector<std::vector<std::size_t>> slot_of_path_;
    std::vector<std::vector<std::size_t>> slot_refs_;
    std::vector<std::vector<std::size_t>> free_slots_;
    std::vector<bool> active_;
    std::vector<double> metric_;
    std::vector<std::int32_t> head_;
    std::vector<std::size_t> free_paths_;
    std::vector<DecisionNode> nodes_;
};

}  // namespace

std::optional<BitVec> ca_scl_decode(const LlrVec& llrs, const CodeConstruction& code,
                                    std::size_t list_size, const CrcSpec& crc) {
    if (llrs.size() != code.mother_length)
        throw std::invalid_argument("ca_scl_decode: expected mother-length LLR vector");
    ListDecoder dec(code, list_size);
    return dec.decode(llrs, crc);
}

}  // namespace ura
