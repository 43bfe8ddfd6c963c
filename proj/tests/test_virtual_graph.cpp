#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "ccresm/virtual_graph.hpp"

using namespace ccresm;

namespace {

RaConfig cfg_of(int N, int q, std::uint64_t seed) {
    return {N, q, build_interleaver(N, q, seed)};
}

}  // namespace

TEST_CASE("smallest graph: node counts from a single shared symbol") {
    const VirtualGraph g = build_virtual_graph(cfg_of(1, 1, 1), cfg_of(1, 1, 2));
    CHECK(g.n == 1);
    CHECK(g.num_source_nodes() == 2);
    CHECK(g.num_check_nodes() == 2);
    CHECK(g.num_code_nodes() == 2);
    CHECK(g.num_add_nodes() == 1);  // a[2] only
    CHECK(g.num_evidence_nodes() == 2);
}

TEST_CASE("N=2, q=3 graph has 11 add nodes (a[2..12])") {
    const VirtualGraph g = build_virtual_graph(cfg_of(2, 3, 5), cfg_of(2, 3, 6));
    CHECK(g.n == 6);
    CHECK(g.num_add_nodes() == 11);
    CHECK(g.num_evidence_nodes() == 12);
}

TEST_CASE("add nodes pair the symbols dictated by the sampling pattern") {
    const VirtualGraph g = build_virtual_graph(cfg_of(4, 3, 7), cfg_of(4, 3, 8));
    for (int i = 2; i <= 2 * g.n; ++i) {
        if (i % 2 == 0) {
            // a[2k] joins x_A[k] and x_B[k]
            CHECK(g.add_a_side(i) == i / 2);
            CHECK(g.add_b_side(i) == i / 2);
        } else {
            // a[2k-1] joins x_A[k] and x_B[k-1]
            CHECK(g.add_a_side(i) == (i + 1) / 2);
            CHECK(g.add_b_side(i) == g.add_a_side(i) - 1);
        }
        CHECK(g.add_a_side(i) >= 1);
        CHECK(g.add_a_side(i) <= g.n);
        CHECK(g.add_b_side(i) >= 1);
        CHECK(g.add_b_side(i) <= g.n);
    }
}

TEST_CASE("check adjacency follows the interleavers; source degree is q") {
    const RaConfig a = cfg_of(8, 3, 21), b = cfg_of(8, 3, 22);
    const VirtualGraph g = build_virtual_graph(a, b);
    for (int u = 0; u < 2; ++u) {
        const RaConfig& cfg = u == 0 ? a : b;
        const auto& m = g.src_of_check[static_cast<std::size_t>(u)];
        REQUIRE(m.size() == static_cast<std::size_t>(g.n));
        for (int j = 0; j < g.n; ++j) CHECK(m[static_cast<std::size_t>(j)] == cfg.source_of(j));
        int total = 0;
        for (const auto& checks : g.checks_of_src[static_cast<std::size_t>(u)]) {
            CHECK(checks.size() == static_cast<std::size_t>(g.q));
            total += static_cast<int>(checks.size());
        }
        CHECK(total == g.n);
    }
}

TEST_CASE("identical interleavers give the swap-and-shift symmetry") {
    const RaConfig shared = cfg_of(4, 3, 31);
    const VirtualGraph g = build_virtual_graph(shared, shared);
    CHECK(g.src_of_check[0] == g.src_of_check[1]);
    for (int k = 1; k <= g.n; ++k) {
        CHECK(g.add_a_side(2 * k) == g.add_b_side(2 * k));
        if (2 * k + 1 <= 2 * g.n)
            CHECK(g.add_a_side(2 * k + 1) == g.add_b_side(2 * k + 1) + 1);
    }
}

TEST_CASE("mismatched users are rejected") {
    CHECK_THROWS_AS(build_virtual_graph(cfg_of(4, 3, 1), cfg_of(5, 3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(build_virtual_graph(cfg_of(4, 3, 1), cfg_of(4, 2, 2)), std::invalid_argument);
    RaConfig broken = cfg_of(4, 3, 1);
    broken.pi[0] = broken.pi[1];
    CHECK_THROWS_AS(build_virtual_graph(broken, cfg_of(4, 3, 2)), std::invalid_argument);
}

TEST_CASE("tail flag only adds the extra evidence node") {
    const VirtualGraph g0 = build_virtual_graph(cfg_of(2, 3, 5), cfg_of(2, 3, 6), false);
    const VirtualGraph g1 = build_virtual_graph(cfg_of(2, 3, 5), cfg_of(2, 3, 6), true);
    CHECK(g0.num_evidence_nodes() + 1 == g1.num_evidence_nodes());
    CHECK(g0.num_add_nodes() == g1.num_add_nodes());
}
