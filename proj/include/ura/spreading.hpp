#pragma once

#include <cstdint>
#include <vector>

namespace ura {

// Seeded uniform permutation of {0..N-1}. Regeneration from the same seed is
// bit-identical (Fisher-Yates over mt19937_64 with rejection sampling).
class Interleaver {
public:
    Interleaver(std::uint64_t seed, std::size_t block_length);

    std::uint64_t seed() const { return seed_; }
    std::size_t block_length() const { return perm_.size(); }
    const std::vector<std::uint32_t>& permutation() const { return perm_; }

private:
    std::uint64_t seed_;
    std::vector<std::uint32_t> perm_;
};

// Zero-pad a length-N_c symbol vector to the block length and permute:
// output[perm[i]] = codeword[i], all other positions zero.
std::vector<double> spread(const std::vector<double>& codeword, const Interleaver& pi);

// Inverse on the receiver side: extract the N_c owned positions in
// codeword order from a block-length vector.
std::vector<double> despread_llrs(const std::vector<double>& block, const Interleaver& pi,
                                  std::size_t codeword_length);

// Exact distribution of the summed interference at one channel position from
// K unit-power users with occupancy ratio N_c/N and uniform BPSK symbols.
struct InterferencePmf {
    std::size_t interferers = 0;     // K
    double occupancy = 0.0;          // N_c / N
    std::vector<double> prob;        // index m + K, support m in [-K, K]

    double at(long m) const { return prob[static_cast<std::size_t>(m + static_cast<long>(interferers))]; }
    double variance() const;
};

InterferencePmf interference_pmf(std::size_t interferers, std::size_t codeword_length,
                                 std::size_t block_length);

// Distance between the pmf and N(0, K*N_c/N), comparing lattice mass against
// Gaussian mass on the unit intervals (m - 1/2, m + 1/2].
struct GaussDistance {
    double total_variation = 0.0;
    double kolmogorov_smirnov = 0.0;
};

GaussDistance gaussian_approx_distance(const InterferencePmf& pmf);

}  // namespace ura
