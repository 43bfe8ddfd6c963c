#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccresm/exhaustive.hpp"
#include "ccresm/joint_decoder.hpp"
#include "oracles.hpp"

using namespace ccresm;

namespace {

RaConfig cfg_of(int N, int q, std::uint64_t seed) {
    return {N, q, build_interleaver(N, q, seed)};
}

struct Instance {
    RaConfig cfg_a, cfg_b;
    BitVector sa, sb;
    ChannelConfig chan;
    SampleFrame frame;
    std::vector<BeliefTriple> evidence;
    VirtualGraph graph;
};

Instance make_instance(int N, int q, double delta, double sigma2, std::uint64_t seed) {
    Instance in;
    SplitRng rng(seed);
    in.cfg_a = cfg_of(N, q, rng.next_u64());
    in.cfg_b = cfg_of(N, q, rng.next_u64());
    in.sa = random_bits(static_cast<std::size_t>(N), rng);
    in.sb = random_bits(static_cast<std::size_t>(N), rng);
    in.chan = ChannelConfig{delta, sigma2, N * q, false};
    in.frame = overlap_and_sample(ra_encode(in.sa, in.cfg_a), ra_encode(in.sb, in.cfg_b), in.chan,
                                  rng);
    in.evidence = compute_evidence(in.frame, in.chan);
    in.graph = build_virtual_graph(in.cfg_a, in.cfg_b);
    return in;
}

}  // namespace

TEST_CASE("noiseless collisions decode exactly for every misalignment") {
    int seed = 100;
    for (double delta : {0.1, 0.3, 0.5}) {
        for (int t = 0; t < 10; ++t) {
            const Instance in = make_instance(8, 3, delta, 0.0, static_cast<std::uint64_t>(seed++));
            DecodeOptions opt;
            opt.max_iters = 50;
            opt.validate = true;  // message + evidence invariants checked every phase
            const DecodeResult res = decode(in.evidence, in.graph, opt);
            CHECK(res.sa_hat == in.sa);
            CHECK(res.sb_hat == in.sb);
            CHECK(res.converged);
        }
    }
}

TEST_CASE("decoding is deterministic") {
    const Instance in = make_instance(12, 3, 0.3, 0.4, 2222);
    const DecodeResult r1 = decode(in.evidence, in.graph, 25);
    const DecodeResult r2 = decode(in.evidence, in.graph, 25);
    CHECK(r1.sa_hat == r2.sa_hat);
    CHECK(r1.sb_hat == r2.sb_hat);
    CHECK(r1.iterations_used == r2.iterations_used);
    CHECK(r1.converged == r2.converged);
    CHECK(r1.final_margin == r2.final_margin);
    for (int u = 0; u < 2; ++u)
        for (std::size_t i = 0; i < r1.source_marginals[u].size(); ++i)
            CHECK(r1.source_marginals[u][i] == r2.source_marginals[u][i]);
}

TEST_CASE("neutral evidence stays at the symmetric fixed point, ties to 0") {
    const VirtualGraph g = build_virtual_graph(cfg_of(6, 3, 3), cfg_of(6, 3, 4));
    std::vector<BeliefTriple> ev(static_cast<std::size_t>(2 * g.n), BeliefTriple{0.25, 0.5, 0.25});
    ev[0] = {0.5, 0.5, 0.0};
    DecodeOptions opt;
    opt.max_iters = 20;
    opt.validate = true;
    const DecodeResult res = decode(ev, g, opt);
    CHECK(res.converged);
    CHECK(res.iterations_used <= 3);
    CHECK(res.sa_hat == BitVector(6, 0));
    CHECK(res.sb_hat == BitVector(6, 0));
    CHECK(res.final_margin == doctest::Approx(0.0));
}

TEST_CASE("cycle-free instance: marginals equal the exact channel posterior") {
    for (std::uint64_t seed = 50; seed < 58; ++seed) {
        const Instance in = make_instance(1, 1, 0.4, 0.5, seed);
        const DecodeResult res = decode(in.evidence, in.graph, 10);
        const auto ref =
            oracles::source_enumeration_marginals(in.frame, in.chan, in.cfg_a, in.cfg_b);
        CHECK(res.converged);
        CHECK(res.iterations_used <= 4);
        CHECK(std::fabs(res.source_marginals[0][0].p0 - ref.a[0].p0) < 1e-12);
        CHECK(std::fabs(res.source_marginals[1][0].p0 - ref.b[0].p0) < 1e-12);
    }
}

TEST_CASE("joint decisions match exhaustive joint MAP in >= 95% of trials") {
    const int trials = 1000;
    int agree = 0;
    for (int t = 0; t < trials; ++t) {
        const Instance in = make_instance(4, 3, 0.5, 0.25, 9000 + static_cast<std::uint64_t>(t));
        const DecodeResult bp = decode(in.evidence, in.graph, 50);
        const JointMapResult map = joint_map_decode(in.frame, in.chan, in.cfg_a, in.cfg_b);
        agree += (bp.sa_hat == map.sa && bp.sb_hat == map.sb);
    }
    MESSAGE("joint MAP agreement: ", agree, "/", trials);
    CHECK(agree >= 950);
}

TEST_CASE("relabeling source bits through the interleaver permutes decisions") {
    const int N = 8, q = 3;
    SplitRng rng(606);
    const Instance in = make_instance(N, q, 0.3, 0.5, 707);

    // random permutation of user A's source positions
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.next_below(i))]);
    std::vector<int> perm_inv(N);
    for (int i = 0; i < N; ++i) perm_inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;

    // remap the interleaver so the relabeled source produces the same codeword
    RaConfig cfg2 = in.cfg_a;
    for (int j = 0; j < cfg2.n(); ++j) {
        const int src = in.cfg_a.pi[static_cast<std::size_t>(j)] / q;
        const int slot = in.cfg_a.pi[static_cast<std::size_t>(j)] % q;
        cfg2.pi[static_cast<std::size_t>(j)] = perm_inv[static_cast<std::size_t>(src)] * q + slot;
    }
    BitVector sa2(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
        sa2[static_cast<std::size_t>(i)] = in.sa[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    REQUIRE(ra_encode(sa2, cfg2) == ra_encode(in.sa, in.cfg_a));

    const DecodeResult r1 = decode(in.evidence, in.graph, 30);
    const VirtualGraph g2 = build_virtual_graph(cfg2, in.cfg_b);
    const DecodeResult r2 = decode(in.evidence, g2, 30);

    CHECK(r2.sb_hat == r1.sb_hat);
    for (int i = 0; i < N; ++i) {
        const std::size_t mapped = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
        CHECK(r2.sa_hat[static_cast<std::size_t>(i)] == r1.sa_hat[mapped]);
        CHECK(r2.source_marginals[0][static_cast<std::size_t>(i)].p0 ==
              doctest::Approx(r1.source_marginals[0][mapped].p0).epsilon(1e-12));
    }
}

TEST_CASE("swapping the users and mirroring delta leaves BER unchanged (z-test)") {
    const int N = 32, q = 3, trials = 500;
    const double delta = 0.3, sigma2 = 4.0;
    long long err_b_direct = 0, err_b_swapped = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng rng(3100 + static_cast<std::uint64_t>(t));
        const RaConfig ca = cfg_of(N, q, rng.next_u64());
        const RaConfig cb = cfg_of(N, q, rng.next_u64());
        const BitVector sa = random_bits(N, rng);
        const BitVector sb = random_bits(N, rng);
        const BitVector xa = ra_encode(sa, ca), xb = ra_encode(sb, cb);

        const ChannelConfig chan1{delta, sigma2, N * q, false};
        const SampleFrame f1 = overlap_and_sample(xa, xb, chan1, rng);
        const DecodeResult r1 =
            decode(compute_evidence(f1, chan1), build_virtual_graph(ca, cb), 30);
        err_b_direct += static_cast<long long>(hamming_distance(r1.sb_hat, sb));

        const ChannelConfig chan2{1.0 - delta, sigma2, N * q, false};
        const SampleFrame f2 = overlap_and_sample(xb, xa, chan2, rng);
        const DecodeResult r2 =
            decode(compute_evidence(f2, chan2), build_virtual_graph(cb, ca), 30);
        err_b_swapped += static_cast<long long>(hamming_distance(r2.sa_hat, sb));
    }
    const double bits = static_cast<double>(trials) * N;
    const double p1 = err_b_direct / bits, p2 = err_b_swapped / bits;
    const double pbar = (p1 + p2) / 2.0;
    const double se = std::sqrt(2.0 * pbar * (1.0 - pbar) / bits);
    MESSAGE("direct ", p1, " swapped ", p2, " se ", se);
    CHECK(pbar > 0.0);  // operating point must produce errors to be informative
    CHECK(std::fabs(p1 - p2) <= 2.576 * se + 1e-12);
}

TEST_CASE("evidence is rejected when malformed") {
    const Instance in = make_instance(2, 3, 0.5, 0.2, 42);
    auto bad_len = in.evidence;
    bad_len.pop_back();
    CHECK_THROWS_AS(decode(bad_len, in.graph, 10), std::invalid_argument);
    auto bad_first = in.evidence;
    bad_first[0] = {0.25, 0.5, 0.25};
    CHECK_THROWS_AS(decode(bad_first, in.graph, 10), std::invalid_argument);
    CHECK_THROWS_AS(decode(in.evidence, in.graph, 0), std::invalid_argument);
}
