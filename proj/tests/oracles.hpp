#pragma once

// Independent reference implementations used only to check the library.
// These deliberately take different computational routes than the
// production code (probability-domain SC, exhaustive ML, convolution pmf).

#include <cmath>
#include <optional>
#include <vector>

#include "ura/crc.hpp"
#include "ura/polar.hpp"

namespace oracle {

using ura::BitVec;
using ura::LlrVec;

// --- probability-domain successive cancellation -------------------------

struct ProbPair {
    double p0;
    double p1;
};

namespace detail {

inline ProbPair normalize(ProbPair p) {
    const double s = p.p0 + p.p1;
    if (s <= 0.0) return {0.5, 0.5};
    return {p.p0 / s, p.p1 / s};
}

// Returns (decisions over u subrange, re-encoded subcodeword).
inline std::vector<std::uint8_t> sc_prob_node(const std::vector<ProbPair>& w,
                                              const std::vector<std::uint8_t>& frozen,
                                              std::size_t u_begin, BitVec& decisions) {
    const std::size_t len = w.size();
    if (len == 1) {
        std::uint8_t bit = 0;
        if (!frozen[u_begin]) bit = (w[0].p1 > w[0].p0) ? 1 : 0;  // ties decide 0
        decisions[u_begin] = bit;
        return {bit};
    }
    const std::size_t half = len / 2;
    std::vector<ProbPair> sub(half);
    for (std::size_t i = 0; i < half; ++i) {
        const ProbPair a = w[2 * i], b = w[2 * i + 1];
        sub[i] = detail::normalize({a.p0 * b.p0 + a.p1 * b.p1, a.p0 * b.p1 + a.p1 * b.p0});
    }
    const auto left = sc_prob_node(sub, frozen, u_begin, decisions);
    for (std::size_t i = 0; i < half; ++i) {
        const ProbPair a = w[2 * i], b = w[2 * i + 1];
        if (left[i] == 0)
            sub[i] = detail::normalize({a.p0 * b.p0, a.p1 * b.p1});
        else
            sub[i] = detail::normalize({a.p1 * b.p0, a.p0 * b.p1});
    }
    const auto right = sc_prob_node(sub, frozen, u_begin + half, decisions);
    std::vector<std::uint8_t> enc(len);
    for (std::size_t i = 0; i < half; ++i) {
        enc[2 * i] = left[i] ^ right[i];
        enc[2 * i + 1] = right[i];
    }
    return enc;
}

}  // namespace detail

inline BitVec sc_decode_reference(const LlrVec& llrs, const ura::CodeConstruction& code) {
    std::vector<ProbPair> w(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i) {
        const double p1 = 1.0 / (1.0 + std::exp(llrs[i]));
        w[i] = {1.0 - p1, p1};
    }
    BitVec decisions(code.mother_length, 0);
    detail::sc_prob_node(w, code.frozen, 0, decisions);
    BitVec info(code.info_set.size());
    for (std::size_t i = 0; i < code.info_set.size(); ++i)
        info[i] = decisions[code.info_set[i]];
    return info;
}

// --- exhaustive CRC-valid maximum likelihood ----------------------------

// Maximises sum_i (1-2x_i) llr_i over all CRC-valid codewords.
inline std::optional<BitVec> ml_decode_exhaustive(const LlrVec& channel_llrs,
                                                  const ura::CodeConstruction& code,
                                                  const ura::CrcSpec& crc) {
    const std::size_t payload = code.payload_bits;
    std::optional<BitVec> best;
    double best_corr = 0.0;
    for (std::size_t msg = 0; msg < (std::size_t{1} << payload); ++msg) {
        BitVec m(payload);
        for (std::size_t b = 0; b < payload; ++b) m[b] = (msg >> b) & 1;
        const BitVec cw = ura::polar_encode(ura::crc_append(m, crc), code);
        double corr = 0.0;
        for (std::size_t i = 0; i < cw.size(); ++i)
            corr += (cw[i] ? -1.0 : 1.0) * channel_llrs[i];
        if (!best || corr > best_corr) {
            best = m;
            best_corr = corr;
        }
    }
    return best;
}

// --- interference pmf by exact convolution ------------------------------

// K-fold convolution of {0: 1-rho, +1: rho/2, -1: rho/2}.
inline std::vector<double> interference_pmf_convolution(std::size_t k, double rho) {
    std::vector<double> pmf{1.0};  // support centered, size 2*j+1 after j users
    for (std::size_t u = 0; u < k; ++u) {
        std::vector<double> next(pmf.size() + 2, 0.0);
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            next[i + 1] += pmf[i] * (1.0 - rho);
            next[i] += pmf[i] * rho / 2.0;
            next[i + 2] += pmf[i] * rho / 2.0;
        }
        pmf = std::move(next);
    }
    return pmf;  // index m + k
}

}  // namespace oracle
