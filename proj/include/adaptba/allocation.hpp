#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptba/random.hpp"

namespace adaptba {

enum class AllocationMode { Random, Contiguous };

/// Largest supported number of chunks. Chunk sets are stored as 64-bit masks
/// and binomials up to C(64, 32) fit in an unsigned 64-bit integer.
inline constexpr int kMaxChunks = 64;

/// Partition of the (unit) band into K equal chunks plus the type mix.
/// Type i occupies i chunks and is chosen with probability type_probs[i-1].
struct BandwidthConfig {
    int chunks = 3;
    std::vector<double> type_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
    AllocationMode mode = AllocationMode::Random;
    double power_per_chunk = 2.0;

    static BandwidthConfig uniform(int chunks, AllocationMode mode = AllocationMode::Random,
                                   double power_per_chunk = 2.0);

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    double type_prob(int type) const { return type_probs[static_cast<std::size_t>(type - 1)]; }
    double chunk_width() const { return 1.0 / chunks; }
    /// Sum_k k p_k.
    double mean_type() const;

    bool operator==(const BandwidthConfig&) const = default;
};

/// Set of distinct 1-based chunk indices, stored as a bit mask (bit j-1 for chunk j).
class ChunkSet {
public:
    ChunkSet() = default;
    explicit ChunkSet(std::uint64_t mask) : mask_(mask) {}

    static ChunkSet from_indices(std::span<const int> indices);
    static ChunkSet window(int first, int length);

    std::vector<int> indices() const;
    int size() const;
    bool contains(int chunk) const { return (mask_ >> (chunk - 1)) & 1U; }
    bool is_contiguous() const;
    std::uint64_t mask() const { return mask_; }

    int overlap(ChunkSet other) const;

    friend bool operator==(ChunkSet, ChunkSet) = default;

private:
    std::uint64_t mask_ = 0;
};

/// Distribution of the number t of chunks shared by a type-k user and a
/// type-i user. mass[j] is the probability of t = t_min + j; the support is
/// exactly [max(0, i+k-K), min(k, i)].
struct OverlapPmf {
    int t_min = 0;
    std::vector<double> mass;

    int t_max() const { return t_min + static_cast<int>(mass.size()) - 1; }
    /// Probability of t; zero outside the support.
    double operator()(int t) const;
};

/// Exact rational form of an overlap pmf: P(t) = numer[t - t_min] / denom.
struct OverlapCounts {
    int t_min = 0;
    std::vector<std::uint64_t> numer;
    std::uint64_t denom = 1;

    OverlapPmf to_pmf() const;
};

/// Exact binomial coefficient, 0 <= r <= n <= 64 (0 when r outside [0, n]).
std::uint64_t binomial(int n, int r);

OverlapCounts overlap_counts_random(int chunks, int k, int i);
OverlapCounts overlap_counts_contiguous(int chunks, int k, int i);

/// Hypergeometric pmf: C(k,t) C(K-k,i-t) / C(K,i).
OverlapPmf overlap_pmf_random(int chunks, int k, int i);
/// Pmf of the overlap between two uniformly placed windows of widths k and i.
OverlapPmf overlap_pmf_contiguous(int chunks, int k, int i);
OverlapPmf overlap_pmf(AllocationMode mode, int chunks, int k, int i);

double mean_overlap(const OverlapPmf& pmf);

/// Mixture seen by a type-k receiver over all interferer types:
/// weight[t] = sum_i p_i P(t | k, i) for t = 0..k. Sums to 1.
std::vector<double> overlap_mixture(const BandwidthConfig& ba, int k);

/// Uniform over all C(K,k) subsets (Random) or the K-k+1 windows (Contiguous).
ChunkSet sample_chunk_set(const BandwidthConfig& ba, int k, Rng& rng);

/// Inverse-CDF draw of a user type from ba.type_probs.
int sample_type(const BandwidthConfig& ba, Rng& rng);

/// Precomputed inverse-CDF table for repeated type draws.
class TypeSampler {
public:
    explicit TypeSampler(const BandwidthConfig& ba);
    int operator()(Rng& rng) const;

private:
    std::vector<double> cumulative_;
    int last_positive_ = 1;
};

}  // namespace adaptba
