#include <doctest.h>

#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "ccresm/channel.hpp"
#include "ccresm/exhaustive.hpp"
#include "ccresm/ra_code.hpp"

using namespace ccresm;

namespace {

RaConfig identity_cfg(int N, int q) {
    RaConfig cfg{N, q, {}};
    cfg.pi.resize(static_cast<std::size_t>(N * q));
    std::iota(cfg.pi.begin(), cfg.pi.end(), 0);
    return cfg;
}

RaConfig random_cfg(int N, int q, std::uint64_t seed) {
    return {N, q, build_interleaver(N, q, seed)};
}

std::vector<BeliefPair> certainty_beliefs(const BitVector& coded) {
    std::vector<BeliefPair> b(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i)
        b[i] = coded[i] ? BeliefPair{0.0, 1.0} : BeliefPair{1.0, 0.0};
    return b;
}

}  // namespace

TEST_CASE("ra_encode: all-zero source maps to all-zero codeword") {
    const RaConfig cfg = random_cfg(4, 3, 99);
    const BitVector coded = ra_encode(BitVector(4, 0), cfg);
    for (auto b : coded) CHECK(b == 0);
}

TEST_CASE("ra_encode: hand-computed accumulator output") {
    // repeat [1,0] three times -> [1,1,1,0,0,0]; prefix XOR gives 101111
    const RaConfig cfg = identity_cfg(2, 3);
    const BitVector coded = ra_encode({1, 0}, cfg);
    CHECK(coded == BitVector{1, 0, 1, 1, 1, 1});
}

TEST_CASE("ra_encode rejects mismatched source length") {
    const RaConfig cfg = identity_cfg(2, 3);
    CHECK_THROWS_AS(ra_encode({1, 0, 1}, cfg), std::invalid_argument);
}

TEST_CASE("ra_encode is linear over GF(2)") {
    const RaConfig cfg = random_cfg(16, 3, 7);
    SplitRng rng(123);
    for (int t = 0; t < 100; ++t) {
        const BitVector a = random_bits(16, rng);
        const BitVector b = random_bits(16, rng);
        CHECK(ra_encode(xor_bits(a, b), cfg) == xor_bits(ra_encode(a, cfg), ra_encode(b, cfg)));
    }
}

TEST_CASE("build_interleaver: degenerate size, determinism, validity") {
    CHECK(build_interleaver(1, 1, 5) == std::vector<int>{0});
    const auto p1 = build_interleaver(8, 3, 42);
    const auto p2 = build_interleaver(8, 3, 42);
    CHECK(p1 == p2);
    const auto p3 = build_interleaver(8, 3, 43);
    CHECK(p1 != p3);
    const std::set<int> uniq(p1.begin(), p1.end());
    CHECK(uniq.size() == p1.size());
    CHECK(*uniq.begin() == 0);
    CHECK(*uniq.rbegin() == 23);
}

TEST_CASE("build_interleaver: first position is uniform (chi-squared, 1%)") {
    const int bins = 12;  // N=4, q=3
    std::vector<int> counts(bins, 0);
    const int draws = 10000;
    for (int seed = 0; seed < draws; ++seed)
        counts[static_cast<std::size_t>(build_interleaver(4, 3, static_cast<std::uint64_t>(seed))[0])]++;
    const double expected = static_cast<double>(draws) / bins;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 1% critical value for 11 degrees of freedom
    CHECK(chi2 < 24.725);
}

TEST_CASE("ra_decode: noiseless beliefs recover the source exactly") {
    SplitRng rng(5);
    for (int t = 0; t < 20; ++t) {
        const RaConfig cfg = random_cfg(32, 3, 1000 + static_cast<std::uint64_t>(t));
        const BitVector src = random_bits(32, rng);
        const BitVector coded = ra_encode(src, cfg);
        RaDecodeOptions opt;
        opt.max_iters = 50;
        opt.validate = true;
        const RaDecodeResult res = ra_decode(certainty_beliefs(coded), cfg, opt);
        CHECK(res.source_hat == src);
        // re-encoding the decode reproduces the transmitted codeword
        CHECK(ra_encode(res.source_hat, cfg) == coded);
    }
}

TEST_CASE("ra_decode: all-uniform beliefs terminate at the symmetric fixed point") {
    const RaConfig cfg = random_cfg(16, 3, 11);
    const std::vector<BeliefPair> uniform(static_cast<std::size_t>(cfg.n()), BeliefPair{0.5, 0.5});
    RaDecodeOptions opt;
    opt.max_iters = 30;
    opt.validate = true;
    const RaDecodeResult res = ra_decode(uniform, cfg, opt);
    CHECK(res.converged);
    CHECK(res.iterations_used <= 3);
    CHECK(res.source_hat == BitVector(16, 0));  // ties break to 0
    for (const auto& m : res.source_marginals) {
        CHECK(m.p0 == doctest::Approx(0.5));
    }
}

TEST_CASE("ra_decode matches exhaustive MAP on >= 95% of noisy words") {
    const int N = 4, q = 3;
    const double sigma2 = 0.25;
    int agree = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        SplitRng rng(777, static_cast<std::uint64_t>(t));
        const RaConfig cfg = random_cfg(N, q, rng.next_u64());
        const BitVector src = random_bits(N, rng);
        const auto r = awgn_sample(ra_encode(src, cfg), sigma2, rng);
        const BitVector bp = ra_decode_single(bit_evidence(r, sigma2), cfg, 50);
        agree += (bp == single_user_map_decode(r, sigma2, cfg));
    }
    CHECK(agree >= 950);
}

TEST_CASE("ra_decode: lowering the noise never breaks a correct decode (>= 99%)") {
    const int N = 4, q = 3;
    const int trials = 1000;
    int regressions = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng rng(4242, static_cast<std::uint64_t>(t));
        const RaConfig cfg = random_cfg(N, q, rng.next_u64());
        const BitVector src = random_bits(N, rng);
        const BitVector coded = ra_encode(src, cfg);
        std::vector<double> unit_noise(coded.size());
        for (auto& u : unit_noise) u = rng.next_gaussian();

        auto decode_at = [&](double sigma) {
            std::vector<double> r(coded.size());
            for (std::size_t j = 0; j < coded.size(); ++j)
                r[j] = bpsk(coded[j]) + sigma * unit_noise[j];
            return ra_decode_single(bit_evidence(r, sigma * sigma), cfg, 50);
        };
        const bool ok_noisy = decode_at(0.6) == src;
        const bool ok_cleaner = decode_at(0.5) == src;
        if (ok_noisy && !ok_cleaner) ++regressions;
    }
    CHECK(regressions <= trials / 100);
}
