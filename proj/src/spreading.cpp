#include "ura/spreading.hpp"

#include <cmath>
#include <stdexcept>

#include "ura/rng.hpp"
#include "ura/stats.hpp"

namespace ura {

Interleaver::Interleaver(std::uint64_t seed, std::size_t block_length) : seed_(seed) {
    if (block_length == 0) throw std::invalid_argument("Interleaver: empty block");
    perm_.resize(block_length);
    for (std::size_t i = 0; i < block_length; ++i) perm_[i] = static_cast<std::uint32_t>(i);
    Rng rng(seed);
    for (std::size_t i = block_length - 1; i > 0; --i) {
        const std::size_t j = rng.below(i + 1);
        std::swap(perm_[i], perm_[j]);
    }
}

std::vector<double> spread(const std::vector<double>& codeword, const Interleaver& pi) {
    const std::size_t n = pi.block_length();
    if (codeword.size() > n) throw std::invalid_argument("spread: codeword longer than block");
    std::vector<double> out(n, 0.0);
    const auto& perm = pi.permutation();
    for (std::size_t i = 0; i < codeword.size(); ++i) out[perm[i]] = codeword[i];
    return out;
}

std::vector<double> despread_llrs(const std::vector<double>& block, const Interleaver& pi,
                                  std::size_t codeword_length) {
    if (block.size() != pi.block_length())
        throw std::invalid_argument("despread_llrs: block length mismatch");
    if (codeword_length > block.size())
        throw std::invalid_argument("despread_llrs: codeword longer than block");
    std::vector<double> out(codeword_length);
    const auto& perm = pi.permutation();
    for (std::size_t i = 0; i < codeword_length; ++i) out[i] = block[perm[i]];
    return out;
}

double InterferencePmf::variance() const {
    double v = 0.0;
    const long k = static_cast<long>(interferers);
    for (long m = -k; m <= k; ++m) v += static_cast<double>(m) * static_cast<double>(m) * at(m);
    return v;
}

namespace {

double log_binom(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

InterferencePmf interference_pmf(std::size_t interferers, std::size_t codeword_length,
                                 std::size_t block_length) {
    if (codeword_length == 0 || codeword_length > block_length)
        throw std::invalid_argument("interference_pmf: need 0 < N_c <= N");
    const std::size_t K = interferers;
    const double rho = static_cast<double>(codeword_length) / static_cast<double>(block_length);

    InterferencePmf pmf;
    pmf.interferers = K;
    pmf.occupancy = rho;
    pmf.prob.assign(2 * K + 1, 0.0);

    const double log_rho = std::log(rho);
    const double log_1mrho = (rho < 1.0) ? std::log1p(-rho) : 0.0;
    const double log_half = std::log(0.5);

    // P(m) = sum_i C(K,k) rho^k (1-rho)^(K-k) * C(k, i) (1/2)^k with k = |m| + 2i.
    for (std::size_t mm = 0; mm <= K; ++mm) {
        double p = 0.0;
        for (std::size_t i = 0; 2 * i + mm <= K; ++i) {
            const std::size_t k = mm + 2 * i;
            if (rho >= 1.0 && k != K) continue;  // full occupancy: only k = K occurs
            double lg = log_binom(K, k) + static_cast<double>(k) * log_rho +
                        static_cast<double>(K - k) * log_1mrho + log_binom(k, i) +
                        static_cast<double>(k) * log_half;
            p += std::exp(lg);
        }
        pmf.prob[K + mm] = p;
        pmf.prob[K - mm] = p;
    }
    return pmf;
}

GaussDistance gaussian_approx_distance(const InterferencePmf& pmf) {
    GaussDistance d;
    const long k = static_cast<long>(pmf.interferers);
    const double var = static_cast<double>(pmf.interferers) * pmf.occupancy;
    if (pmf.interferers == 0 || var == 0.0) return d;  // degenerate limit, distance 0 by definition

    double tv = 0.0;
    double cdf_pmf = 0.0, ks = 0.0;
    double cdf_gauss = gauss_interval_mass(-1e12, -k - 0.5, var);  // lower Gaussian tail
    for (long m = -k; m <= k; ++m) {
        const double q = gauss_interval_mass(m - 0.5, m + 0.5, var);
        const double p = pmf.at(m);
        tv += std::abs(p - q);
        cdf_pmf += p;
        cdf_gauss += q;
        ks = std::max(ks, std::abs(cdf_pmf - cdf_gauss));
    }
    // Gaussian mass outside the pmf support counts fully toward TV.
    const double tail = 1.0 - gauss_interval_mass(-k - 0.5, k + 0.5, var);
    d.total_variation = 0.5 * (tv + tail);
    d.kolmogorov_smirnov = std::max(ks, 0.5 * tail);
    return d;
}

}  // namespace ura
