#include "adaptba/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptba {

namespace {

void check_types(int chunks, int k, int i) {
    if (chunks < 1 || chunks > kMaxChunks)
        throw std::domain_error("number of chunks must be in [1, 64], got " + std::to_string(chunks));
    if (k < 1 || k > chunks)
        throw std::domain_error("typical type k=" + std::to_string(k) + " outside [1, K]");
    if (i < 1 || i > chunks)
        throw std::domain_error("interferer type i=" + std::to_string(i) + " outside [1, K]");
}

}  // namespace

BandwidthConfig BandwidthConfig::uniform(int chunks, AllocationMode mode, double power_per_chunk) {
    if (chunks < 1 || chunks > kMaxChunks)
        throw std::invalid_argument("bandwidth.K: must be in [1, 64]");
    BandwidthConfig ba;
    ba.chunks = chunks;
    ba.type_probs.assign(static_cast<std::size_t>(chunks), 1.0 / chunks);
    ba.mode = mode;
    ba.power_per_chunk = power_per_chunk;
    return ba;
}

void BandwidthConfig::validate() const {
    if (chunks < 1 || chunks > kMaxChunks)
        throw std::invalid_argument("bandwidth.K: must be in [1, 64], got " + std::to_string(chunks));
    if (type_probs.size() != static_cast<std::size_t>(chunks))
        throw std::invalid_argument("bandwidth.type_probs: expected " + std::to_string(chunks) +
                                    " entries, got " + std::to_string(type_probs.size()));
    double sum = 0.0;
    for (double p : type_probs) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("bandwidth.type_probs: entries must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("bandwidth.type_probs: must sum to 1 (sum is " + std::to_string(sum) + ")");
    if (!(power_per_chunk > 0.0) || !std::isfinite(power_per_chunk))
        throw std::invalid_argument("bandwidth.power: must be > 0");
}

double BandwidthConfig::mean_type() const {
    double m = 0.0;
    for (int k = 1; k <= chunks; ++k) m += k * type_prob(k);
    return m;
}

ChunkSet ChunkSet::from_indices(std::span<const int> indices) {
    std::uint64_t mask = 0;
    for (int c : indices) {
        if (c < 1 || c > kMaxChunks) throw std::domain_error("chunk index out of range");
        const std::uint64_t bit = std::uint64_t{1} << (c - 1);
        if (mask & bit) throw std::domain_error("duplicate chunk index");
        mask |= bit;
    }
    return ChunkSet(mask);
}

ChunkSet ChunkSet::window(int first, int length) {
    if (first < 1 || length < 1 || first + length - 1 > kMaxChunks)
        throw std::domain_error("chunk window out of range");
    const std::uint64_t run = length == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length) - 1);
    return ChunkSet(run << (first - 1));
}

std::vector<int> ChunkSet::indices() const {
    std::vector<int> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
}

int ChunkSet::size() const { return std::popcount(mask_); }

bool ChunkSet::is_contiguous() const {
    if (mask_ == 0) return false;
    const std::uint64_t shifted = mask_ >> std::countr_zero(mask_);
    return (shifted & (shifted + 1)) == 0;
}

int ChunkSet::overlap(ChunkSet other) const { return std::popcount(mask_ & other.mask_); }

double OverlapPmf::operator()(int t) const {
    if (t < t_min || t > t_max()) return 0.0;
    return mass[static_cast<std::size_t>(t - t_min)];
}

OverlapPmf OverlapCounts::to_pmf() const {
    OverlapPmf pmf;
    pmf.t_min = t_min;
    pmf.mass.reserve(numer.size());
    const auto d = static_cast<double>(denom);
    for (std::uint64_t n : numer) pmf.mass.push_back(static_cast<double>(n) / d);
    return pmf;
}

std::uint64_t binomial(int n, int r) {
    if (n < 0 || n > kMaxChunks) throw std::domain_error("binomial: n outside [0, 64]");
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    // acc * (n - r + j) is divisible by j after each step; 128-bit avoids overflow.
    unsigned __int128 acc = 1;
    for (int j = 1; j <= r; ++j) acc = acc * static_cast<unsigned>(n - r + j) / static_cast<unsigned>(j);
    return static_cast<std::uint64_t>(acc);
}

OverlapCounts overlap_counts_random(int chunks, int k, int i) {
    check_types(chunks, k, i);
    OverlapCounts c;
    c.t_min = std::max(0, i + k - chunks);
    const int t_max = std::min(k, i);
    c.denom = binomial(chunks, i);
    for (int t = c.t_min; t <= t_max; ++t) c.numer.push_back(binomial(k, t) * binomial(chunks - k, i - t));
    return c;
}

OverlapCounts overlap_counts_contiguous(int chunks, int k, int i) {
    check_types(chunks, k, i);
    const auto K = static_cast<std::int64_t>(chunks);
    OverlapCounts c;
    c.t_min = std::max(0, i + k - chunks);
    const int t_max = std::min(k, i);
    const std::int64_t wk = K - k + 1;  // windows available to the typical user
    const std::int64_t wi = K - i + 1;  // windows available to the interferer
    c.denom = static_cast<std::uint64_t>(wk * wi);
    for (int t = c.t_min; t <= t_max; ++t) {
        std::int64_t n = 0;
        if (t == t_max) {
            // Full containment of the narrower window in the wider one.
            n = k <= i ? (i - k + 1) * wi : (k - i + 1) * wk;
        } else if (t == 0) {
            n = (K - k - i + 1) * (K - k - i + 2);
        } else if (K >= k + i - t) {
            n = 2 * (K + t - k - i + 1);
        }
        c.numer.push_back(static_cast<std::uint64_t>(n));
    }
    return c;
}

OverlapPmf overlap_pmf_random(int chunks, int k, int i) { return overlap_counts_random(chunks, k, i).to_pmf(); }

OverlapPmf overlap_pmf_contiguous(int chunks, int k, int i) {
    return overlap_counts_contiguous(chunks, k, i).to_pmf();
}

OverlapPmf overlap_pmf(AllocationMode mode, int chunks, int k, int i) {
    return mode == AllocationMode::Random ? overlap_pmf_random(chunks, k, i)
                                          : overlap_pmf_contiguous(chunks, k, i);
}

double mean_overlap(const OverlapPmf& pmf) {
    double m = 0.0;
    for (std::size_t j = 0; j < pmf.mass.size(); ++j) m += (pmf.t_min + static_cast<int>(j)) * pmf.mass[j];
    return m;
}

std::vector<double> overlap_mixture(const BandwidthConfig& ba, int k) {
    std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
    for (int i = 1; i <= ba.chunks; ++i) {
        const double p = ba.type_prob(i);
        if (p == 0.0) continue;
        const OverlapPmf pmf = overlap_pmf(ba.mode, ba.chunks, k, i);
        for (int t = pmf.t_min; t <= pmf.t_max(); ++t) w[static_cast<std::size_t>(t)] += p * pmf(t);
    }
    return w;
}

ChunkSet sample_chunk_set(const BandwidthConfig& ba, int k, Rng& rng) {
    const int K = ba.chunks;
    if (k < 1 || k > K) throw std::domain_error("sample_chunk_set: k=" + std::to_string(k) + " outside [1, K]");
    if (ba.mode == AllocationMode::Contiguous) {
        std::uniform_int_distribution<int> start(1, K - k + 1);
        return ChunkSet::window(start(rng), k);
    }
    // Floyd's algorithm: k distinct indices from {1..K}, uniform over subsets.
    std::uint64_t mask = 0;
    for (int j = K - k + 1; j <= K; ++j) {
        std::uniform_int_distribution<int> pick(1, j);
        const int c = pick(rng);
        const std::uint64_t bit = std::uint64_t{1} << (c - 1);
        mask |= (mask & bit) ? (std::uint64_t{1} << (j - 1)) : bit;
    }
    return ChunkSet(mask);
}

TypeSampler::TypeSampler(const BandwidthConfig& ba) {
    ba.validate();
    cumulative_.reserve(ba.type_probs.size());
    double acc = 0.0;
    for (int i = 1; i <= ba.chunks; ++i) {
        acc += ba.type_prob(i);
        cumulative_.push_back(acc);
        if (ba.type_prob(i) > 0.0) last_positive_ = i;
    }
}

int TypeSampler::operator()(Rng& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    // First index whose cumulative mass exceeds u; zero-mass types are never
    // selected because their cumulative value equals the previous one.
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const int type = static_cast<int>(it - cumulative_.begin()) + 1;
    return std::min(type, last_positive_);
}

int sample_type(const BandwidthConfig& ba, Rng& rng) { return TypeSampler(ba)(rng); }

}  // namespace adaptba
