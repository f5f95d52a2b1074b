#include "ura/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ura {

namespace {

std::size_t bit_reverse(std::size_t v, unsigned bits) {
    std::size_t r = 0;
    for (unsigned i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

// Gaussian-approximation phi function (Chung et al. piecewise fit).
double ga_phi(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 10.0) return std::exp(-0.4527 * std::pow(x, 0.86) + 0.0218);
    return std::sqrt(M_PI / x) * std::exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x));
}

double ga_phi_inv(double y) {
    if (y >= 1.0) return 0.0;
    if (y <= 0.0) return 1e9;
    double lo = 0.0, hi = 1.0;
    while (ga_phi(hi) > y) {
        hi *= 2.0;
        if (hi > 4e4) return hi;  // phi underflows; reliability effectively infinite
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ga_phi(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Mean-LLR combine for the check-node side of the polar transform.
double ga_check(double a, double b) {
    if (a <= 0.0 || b <= 0.0) return 0.0;
    const double pa = ga_phi(a), pb = ga_phi(b);
    const double p = pa + pb - pa * pb;
    return ga_phi_inv(p);
}

// Recursive density evolution with adjacent channel pairing; output index
// order matches the natural successive-cancellation decision order of u.
void ga_evolve(std::vector<double>& m) {
    const std::size_t n = m.size();
    if (n == 1) return;
    const std::size_t half = n / 2;
    std::vector<double> left(half), right(half);
    for (std::size_t i = 0; i < half; ++i) {
        left[i] = ga_check(m[2 * i], m[2 * i + 1]);
        right[i] = m[2 * i] + m[2 * i + 1];
    }
    ga_evolve(left);
    ga_evolve(right);
    std::copy(left.begin(), left.end(), m.begin());
    std::copy(right.begin(), right.end(), m.begin() + half);
}

// Exact boxplus in the log domain: stable for any magnitudes, and
// f(0, b) = 0 so punctured positions propagate correctly.
double llr_f(double a, double b) {
    const double sa = std::abs(a), sb = std::abs(b);
    const double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
    return sign * std::min(sa, sb) + std::log1p(std::exp(-(sa + sb))) -
           std::log1p(std::exp(-std::abs(sa - sb)));
}

struct ScWorkspace {
    const std::vector<std::uint8_t>* frozen;
    BitVec decisions;  // u in natural order
};

// Returns the re-encoded sub-codeword (partial sums) for the g-step.
BitVec sc_node(const LlrVec& alpha, std::size_t u_begin, ScWorkspace& ws) {
    const std::size_t len = alpha.size();
    if (len == 1) {
        std::uint8_t bit = 0;
        if (!(*ws.frozen)[u_begin]) bit = (alpha[0] < 0.0) ? 1 : 0;  // ties decide 0
        ws.decisions[u_begin] = bit;
        return {bit};
    }
    const std::size_t half = len / 2;
    LlrVec sub(half);
    for (std::size_t i = 0; i < half; ++i) sub[i] = llr_f(alpha[2 * i], alpha[2 * i + 1]);
    BitVec c_left = sc_node(sub, u_begin, ws);
    for (std::size_t i = 0; i < half; ++i)
        sub[i] = (c_left[i] ? -alpha[2 * i] : alpha[2 * i]) + alpha[2 * i + 1];
    BitVec c_right = sc_node(sub, u_begin + half, ws);
    BitVec out(len);
    for (std::size_t i = 0; i < half; ++i) {
        out[2 * i] = c_left[i] ^ c_right[i];
        out[2 * i + 1] = c_right[i];
    }
    return out;
}

}  // namespace

std::vector<double> ga_subchannel_means(unsigned mother_exponent, std::size_t punctured_length,
                                        double design_snr_db) {
    const std::size_t n = std::size_t{1} << mother_exponent;
    const double snr = std::pow(10.0, design_snr_db / 10.0);
    std::vector<double> means(n, 2.0 * snr);
    const std::size_t punct = n - punctured_length;
    for (std::size_t i = 0; i < punct; ++i) means[i] = 0.0;
    ga_evolve(means);
    return means;
}

CodeConstruction construct_code(unsigned mother_exponent, std::size_t punctured_length,
                                std::size_t payload_bits, unsigned crc_bits,
                                double design_snr_db) {
    if (mother_exponent < 2 || mother_exponent > 20)
        throw std::invalid_argument("construct_code: invalid mother exponent");
    const std::size_t n = std::size_t{1} << mother_exponent;
    if (punctured_length <= n / 2 || punctured_length > n)
        throw std::invalid_argument("construct_code: N_c must satisfy 2^(n-1) < N_c <= 2^n");
    const std::size_t k = payload_bits + crc_bits;
    if (k >= punctured_length)
        throw std::invalid_argument("construct_code: payload + CRC must be below code length");

    std::vector<double> rel = ga_subchannel_means(mother_exponent, punctured_length, design_snr_db);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rel[a] != rel[b]) return rel[a] > rel[b];
        return a < b;
    });

    CodeConstruction code;
    code.mother_exponent = mother_exponent;
    code.mother_length = n;
    code.punctured_length = punctured_length;
    code.payload_bits = payload_bits;
    code.crc_bits = crc_bits;
    code.design_snr_db = design_snr_db;
    code.info_set.assign(order.begin(), order.begin() + k);
    std::sort(code.info_set.begin(), code.info_set.end());
    code.frozen.assign(n, 1);
    for (std::size_t idx : code.info_set) code.frozen[idx] = 0;
    return code;
}

BitVec polar_encode(const BitVec& info_bits, const CodeConstruction& code) {
    if (info_bits.size() != code.info_set.size())
        throw std::invalid_argument("polar_encode: info bit count mismatch");
    const std::size_t n = code.mother_length;
    BitVec u(n, 0);
    for (std::size_t i = 0; i < info_bits.size(); ++i) u[code.info_set[i]] = info_bits[i] & 1;

    // x = u B F^{kron n}: bit-reversal permutation, then the butterfly.
    BitVec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = u[bit_reverse(j, code.mother_exponent)];
    for (std::size_t half = 1; half < n; half <<= 1)
        for (std::size_t blk = 0; blk < n; blk += 2 * half)
            for (std::size_t j = 0; j < half; ++j) x[blk + j] ^= x[blk + j + half];

    return BitVec(x.begin() + static_cast<std::ptrdiff_t>(code.puncture_count()), x.end());
}

LlrVec expand_punctured_llrs(const LlrVec& channel_llrs, const CodeConstruction& code) {
    if (channel_llrs.size() != code.punctured_length)
        throw std::invalid_argument("expand_punctured_llrs: length mismatch");
    LlrVec out(code.mother_length, 0.0);
    std::copy(channel_llrs.begin(), channel_llrs.end(),
              out.begin() + static_cast<std::ptrdiff_t>(code.puncture_count()));
    return out;
}

BitVec sc_decode(const LlrVec& llrs, const CodeConstruction& code) {
    if (llrs.size() != code.mother_length)
        throw std::invalid_argument("sc_decode: expected mother-length LLR vector");
    ScWorkspace ws{&code.frozen, BitVec(code.mother_length, 0)};
    sc_node(llrs, 0, ws);
    BitVec info(code.info_set.size());
    for (std::size_t i = 0; i < code.info_set.size(); ++i) info[i] = ws.decisions[code.info_set[i]];
    return info;
}

}  // namespace ura
