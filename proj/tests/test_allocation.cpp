#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "adaptba/allocation.hpp"

using namespace adaptba;

namespace {

std::vector<std::uint64_t> all_subsets(int chunks, int size) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << chunks); ++m)
        if (std::popcount(m) == size) out.push_back(m);
    return out;
}

std::vector<std::uint64_t> all_windows(int chunks, int size) {
    std::vector<std::uint64_t> out;
    for (int first = 1; first + size - 1 <= chunks; ++first) out.push_back(ChunkSet::window(first, size).mask());
    return out;
}

// Histogram of overlaps over every pair (typical set, interferer set).
std::map<int, std::uint64_t> enumerate_overlaps(const std::vector<std::uint64_t>& a,
                                                const std::vector<std::uint64_t>& b) {
    std::map<int, std::uint64_t> hist;
    for (auto x : a)
        for (auto y : b) ++hist[std::popcount(x & y)];
    return hist;
}

// Compares the closed-form counts with the enumeration as exact fractions.
void check_exact(const OverlapCounts& c, const std::map<int, std::uint64_t>& hist, std::uint64_t pairs) {
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < c.numer.size(); ++j) {
        const int t = c.t_min + static_cast<int>(j);
        const auto it = hist.find(t);
        const std::uint64_t seen = it == hist.end() ? 0 : it->second;
        CHECK(static_cast<unsigned __int128>(c.numer[j]) * pairs == static_cast<unsigned __int128>(seen) * c.denom);
        total += seen;
    }
    // No enumerated overlap may fall outside the closed-form support.
    CHECK(total == pairs);
}

double chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
    double s = 0.0;
    for (std::size_t j = 0; j < observed.size(); ++j) {
        if (expected[j] == 0.0) continue;
        s += (observed[j] - expected[j]) * (observed[j] - expected[j]) / expected[j];
    }
    return s;
}

// Upper 1% points of chi-square for small degrees of freedom.
double chi2_crit(int dof) {
    static const double table[] = {0, 6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209};
    return table[dof];
}

}  // namespace

TEST_CASE("binomial is exact up to 64") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(64, 32) == 1832624140942590534ULL);
    CHECK(binomial(64, 1) == 64);
    CHECK(binomial(10, 11) == 0);
    CHECK_THROWS_AS(binomial(65, 3), std::domain_error);
}

TEST_CASE("random overlap pmf examples") {
    auto p = overlap_pmf_random(3, 3, 2);
    CHECK(p.t_min == 2);
    CHECK(p.mass.size() == 1);
    CHECK(p(2) == 1.0);

    p = overlap_pmf_random(3, 2, 2);
    CHECK(p.t_min == 1);
    CHECK(p(1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p(2) == doctest::Approx(1.0 / 3).epsilon(1e-15));

    p = overlap_pmf_random(4, 2, 2);
    CHECK(p(0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(p(1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p(2) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(p(3) == 0.0);
}

TEST_CASE("contiguous overlap pmf examples") {
    auto p = overlap_pmf_contiguous(3, 2, 2);
    CHECK(p.t_min == 1);
    CHECK(p(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(2) == doctest::Approx(0.5).epsilon(1e-15));

    p = overlap_pmf_contiguous(4, 2, 2);
    CHECK(p(0) == doctest::Approx(2.0 / 9).epsilon(1e-15));
    CHECK(p(1) == doctest::Approx(4.0 / 9).epsilon(1e-15));
    CHECK(p(2) == doctest::Approx(1.0 / 3).epsilon(1e-15));

    p = overlap_pmf_contiguous(5, 5, 3);
    CHECK(p.t_min == 3);
    CHECK(p.mass.size() == 1);
    CHECK(p(3) == 1.0);

    // Single chunks: they collide only when equal.
    p = overlap_pmf_contiguous(5, 1, 1);
    CHECK(p(0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(p(1) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("closed-form pmfs equal exhaustive enumeration for K <= 8") {
    for (int K = 1; K <= 8; ++K)
        for (int k = 1; k <= K; ++k)
            for (int i = 1; i <= K; ++i) {
                CAPTURE(K);
                CAPTURE(k);
                CAPTURE(i);
                const auto sk = all_subsets(K, k), si = all_subsets(K, i);
                check_exact(overlap_counts_random(K, k, i), enumerate_overlaps(sk, si), sk.size() * si.size());
                const auto wk = all_windows(K, k), wi = all_windows(K, i);
                check_exact(overlap_counts_contiguous(K, k, i), enumerate_overlaps(wk, wi), wk.size() * wi.size());

                for (auto mode : {AllocationMode::Random, AllocationMode::Contiguous}) {
                    const auto pmf = overlap_pmf(mode, K, k, i);
                    CHECK(pmf.t_min == std::max(0, i + k - K));
                    CHECK(pmf.t_max() == std::min(k, i));
                    double sum = 0.0;
                    for (double m : pmf.mass) {
                        CHECK(m >= 0.0);
                        sum += m;
                    }
                    CHECK(std::abs(sum - 1.0) < 1e-12);
                }
            }
}

TEST_CASE("random mean overlap is ik/K exactly") {
    for (int K = 1; K <= 8; ++K)
        for (int k = 1; k <= K; ++k)
            for (int i = 1; i <= K; ++i) {
                // Exact: sum_t t numer[t] * K == i k denom.
                const auto c = overlap_counts_random(K, k, i);
                std::uint64_t s = 0;
                for (std::size_t j = 0; j < c.numer.size(); ++j) s += (c.t_min + j) * c.numer[j];
                CHECK(s * static_cast<std::uint64_t>(K) == static_cast<std::uint64_t>(i * k) * c.denom);
                CHECK(mean_overlap(overlap_pmf_random(K, k, i)) == doctest::Approx(double(i) * k / K).epsilon(1e-14));
            }
    CHECK(mean_overlap(overlap_pmf_random(3, 2, 2)) == doctest::Approx(4.0 / 3));
    CHECK(mean_overlap(OverlapPmf{2, {1.0}}) == 2.0);
}

TEST_CASE("overlap pmfs are symmetric in k and i") {
    for (int K = 1; K <= 12; ++K)
        for (int k = 1; k <= K; ++k)
            for (int i = 1; i <= K; ++i)
                for (auto mode : {AllocationMode::Random, AllocationMode::Contiguous}) {
                    const auto a = overlap_pmf(mode, K, k, i), b = overlap_pmf(mode, K, i, k);
                    REQUIRE(a.t_min == b.t_min);
                    REQUIRE(a.mass.size() == b.mass.size());
                    for (std::size_t j = 0; j < a.mass.size(); ++j) CHECK(std::abs(a.mass[j] - b.mass[j]) < 1e-15);
                }
}

TEST_CASE("large K pmfs stay normalized") {
    for (int k : {1, 17, 32, 64})
        for (int i : {1, 20, 64}) {
            for (auto mode : {AllocationMode::Random, AllocationMode::Contiguous}) {
                const auto pmf = overlap_pmf(mode, 64, k, i);
                CHECK(std::abs(std::accumulate(pmf.mass.begin(), pmf.mass.end(), 0.0) - 1.0) < 1e-12);
            }
        }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(overlap_pmf_random(3, 0, 1), std::domain_error);
    CHECK_THROWS_AS(overlap_pmf_random(3, 1, 4), std::domain_error);
    CHECK_THROWS_AS(overlap_pmf_contiguous(3, 4, 1), std::domain_error);
    CHECK_THROWS_AS(overlap_pmf_contiguous(65, 1, 1), std::domain_error);
    Rng rng(1);
    const auto ba = BandwidthConfig::uniform(3);
    CHECK_THROWS_AS(sample_chunk_set(ba, 0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_chunk_set(ba, 4, rng), std::domain_error);
}

TEST_CASE("bandwidth config validation") {
    BandwidthConfig ba;
    CHECK_NOTHROW(ba.validate());
    CHECK(ba.mean_type() == doctest::Approx(2.0));
    ba.type_probs = {0.5, 0.5, 0.1};
    CHECK_THROWS_AS(ba.validate(), std::invalid_argument);
    ba.type_probs = {1.2, -0.2, 0.0};
    CHECK_THROWS_AS(ba.validate(), std::invalid_argument);
    ba = BandwidthConfig::uniform(3);
    ba.power_per_chunk = 0.0;
    CHECK_THROWS_AS(ba.validate(), std::invalid_argument);
    ba = BandwidthConfig::uniform(3);
    ba.type_probs.pop_back();
    CHECK_THROWS_AS(ba.validate(), std::invalid_argument);
    CHECK_THROWS_AS(BandwidthConfig::uniform(65).validate(), std::invalid_argument);
}

TEST_CASE("chunk sets") {
    const int idx[] = {1, 3, 4};
    const auto s = ChunkSet::from_indices(idx);
    CHECK(s.size() == 3);
    CHECK(s.indices() == std::vector<int>{1, 3, 4});
    CHECK_FALSE(s.is_contiguous());
    CHECK(ChunkSet::window(2, 3).is_contiguous());
    CHECK(ChunkSet::window(2, 3).indices() == std::vector<int>{2, 3, 4});
    CHECK(s.overlap(ChunkSet::window(2, 3)) == 2);
}

TEST_CASE("contiguous full-width window is forced") {
    BandwidthConfig ba = BandwidthConfig::uniform(3, AllocationMode::Contiguous);
    Rng rng(7);
    for (int n = 0; n < 100; ++n) CHECK(sample_chunk_set(ba, 3, rng).indices() == std::vector<int>{1, 2, 3});
}

TEST_CASE("random chunk sets are uniform over subsets") {
    const auto ba = BandwidthConfig::uniform(3);
    Rng rng(11);
    std::map<std::uint64_t, double> freq;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const auto s = sample_chunk_set(ba, 2, rng);
        REQUIRE(s.size() == 2);
        freq[s.mask()] += 1;
    }
    REQUIRE(freq.size() == 3);
    std::vector<double> obs, exp;
    for (auto& [m, c] : freq) {
        obs.push_back(c);
        exp.push_back(n / 3.0);
        CHECK(std::abs(c / n - 1.0 / 3) < 3 * std::sqrt((1.0 / 3) * (2.0 / 3) / n));
    }
    CHECK(chi_square(obs, exp) < chi2_crit(2));
}

TEST_CASE("contiguous windows are uniform") {
    const auto ba = BandwidthConfig::uniform(5, AllocationMode::Contiguous);
    Rng rng(12);
    std::map<std::uint64_t, double> freq;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const auto s = sample_chunk_set(ba, 2, rng);
        REQUIRE(s.is_contiguous());
        freq[s.mask()] += 1;
    }
    REQUIRE(freq.size() == 4);
    std::vector<double> obs, exp;
    for (auto& [m, c] : freq) {
        obs.push_back(c);
        exp.push_back(n / 4.0);
        CHECK(std::abs(c / n - 0.25) < 3 * std::sqrt(0.25 * 0.75 / n));
    }
    CHECK(chi_square(obs, exp) < chi2_crit(3));
}

TEST_CASE("type sampling") {
    Rng rng(3);
    BandwidthConfig ba;
    ba.type_probs = {1.0, 0.0, 0.0};
    for (int j = 0; j < 1000; ++j) CHECK(sample_type(ba, rng) == 1);

    ba.type_probs = {0.3, 0.0, 0.7};
    for (int j = 0; j < 10000; ++j) CHECK(sample_type(ba, rng) != 2);

    ba = BandwidthConfig::uniform(3);
    std::vector<double> obs(3, 0.0);
    const int n = 100000;
    const TypeSampler sampler(ba);
    for (int j = 0; j < n; ++j) obs[static_cast<std::size_t>(sampler(rng) - 1)] += 1;
    CHECK(chi_square(obs, {n / 3.0, n / 3.0, n / 3.0}) < chi2_crit(2));

    ba.type_probs = {0.0, 0.0, 1.0};
    for (int j = 0; j < 1000; ++j) CHECK(sample_type(ba, rng) == 3);
}

TEST_CASE("sampled overlaps follow the analytic pmf") {
    for (auto mode : {AllocationMode::Random, AllocationMode::Contiguous}) {
        const auto ba = BandwidthConfig::uniform(6, mode);
        Rng rng(mode == AllocationMode::Random ? 21 : 22);
        const int k = 3, i = 4, n = 100000;
        const auto pmf = overlap_pmf(mode, 6, k, i);
        std::vector<double> obs(static_cast<std::size_t>(pmf.t_max() + 1), 0.0);
        for (int j = 0; j < n; ++j) {
            const int t = sample_chunk_set(ba, k, rng).overlap(sample_chunk_set(ba, i, rng));
            REQUIRE(t >= pmf.t_min);
            REQUIRE(t <= pmf.t_max());
            obs[static_cast<std::size_t>(t)] += 1;
        }
        std::vector<double> exp(obs.size());
        for (std::size_t t = 0; t < exp.size(); ++t) exp[t] = n * pmf(static_cast<int>(t));
        CHECK(chi_square(obs, exp) < chi2_crit(pmf.t_max() - pmf.t_min));
    }
}

TEST_CASE("overlap mixture") {
    const auto ba = BandwidthConfig::uniform(3);
    for (int k = 1; k <= 3; ++k) {
        const auto w = overlap_mixture(ba, k);
        REQUIRE(w.size() == static_cast<std::size_t>(k + 1));
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        double mean = 0.0;
        for (std::size_t t = 0; t < w.size(); ++t) mean += t * w[t];
        CHECK(mean == doctest::Approx(k * ba.mean_type() / 3).epsilon(1e-14));
    }
}
