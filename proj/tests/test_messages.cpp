#include <doctest.h>

#include <vector>

#include "ccresm/messages.hpp"
#include "ccresm/rng.hpp"

using namespace ccresm;

TEST_CASE("add_update: certainty cases pin the opposite bit") {
    // y = 0 and x = 0 force x' = 0
    BeliefPair r = add_update({1.0, 0.0, 0.0}, {1.0, 0.0});
    CHECK(r.p0 == doctest::Approx(1.0));
    // y = 1 and x = 0 force x' = 1
    r = add_update({0.0, 1.0, 0.0}, {1.0, 0.0});
    CHECK(r.p1 == doctest::Approx(1.0));
}

TEST_CASE("add_update: symmetric inputs renormalize from (0.375, 0.375)") {
    const BeliefTriple p{0.25, 0.5, 0.25};
    const BeliefPair m{0.5, 0.5};
    // raw components before normalization
    CHECK(p.p0 * m.p0 + p.p1 * m.p1 == doctest::Approx(0.375));
    CHECK(p.p1 * m.p0 + p.p2 * m.p1 == doctest::Approx(0.375));
    const BeliefPair r = add_update(p, m);
    CHECK(r.p0 == doctest::Approx(0.5));
    CHECK(r.p1 == doctest::Approx(0.5));
}

TEST_CASE("chk_update is the XOR convolution") {
    BeliefPair r = chk_update({1.0, 0.0}, {1.0, 0.0});
    CHECK(r.p0 == doctest::Approx(1.0));
    r = chk_update({1.0, 0.0}, {0.0, 1.0});
    CHECK(r.p1 == doctest::Approx(1.0));
    r = chk_update({0.8, 0.2}, {0.6, 0.4});
    CHECK(r.p0 == doctest::Approx(0.56));
    CHECK(r.p1 == doctest::Approx(0.44));
}

TEST_CASE("var_update: products, pass-through, symmetry") {
    const std::vector<BeliefPair> certain(3, BeliefPair{1.0, 0.0});
    BeliefPair r = var_update(certain);
    CHECK(r.p0 == doctest::Approx(1.0));

    const std::vector<BeliefPair> uniform(2, BeliefPair{0.5, 0.5});
    r = var_update(uniform);
    CHECK(r.p0 == doctest::Approx(0.5));

    const std::vector<BeliefPair> single{BeliefPair{0.3, 0.7}};
    r = var_update(single);
    CHECK(r.p0 == doctest::Approx(0.3));

    const std::vector<BeliefPair> mixed{{0.9, 0.1}, {0.8, 0.2}, {0.5, 0.5}};
    r = var_update(mixed);
    CHECK(r.p0 == doctest::Approx(0.36 / 0.37));
    CHECK(r.p1 == doctest::Approx(0.01 / 0.37));
}

TEST_CASE("var_update flags annihilating certainties and returns uniform") {
    const std::vector<BeliefPair> conflict{{1.0, 0.0}, {0.0, 1.0}};
    bool flagged = false;
    const BeliefPair r = var_update(conflict, &flagged);
    CHECK(flagged);
    CHECK(r.p0 == doctest::Approx(0.5));
    CHECK(r.p1 == doctest::Approx(0.5));
}

TEST_CASE("update rules keep random beliefs normalized and non-negative") {
    SplitRng rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const BeliefTriple p =
            normalize_triple(rng.next_unit(), rng.next_unit(), rng.next_unit());
        const BeliefPair m = normalize_pair(rng.next_unit(), rng.next_unit());
        const BeliefPair m2 = normalize_pair(rng.next_unit(), rng.next_unit());

        const BeliefPair a = add_update(p, m);
        CHECK(a.p0 >= 0.0);
        CHECK(a.p0 + a.p1 == doctest::Approx(1.0).epsilon(1e-9));

        const BeliefPair c = chk_update(m, m2);
        CHECK(c.p0 >= 0.0);
        CHECK(c.p0 + c.p1 == doctest::Approx(1.0).epsilon(1e-9));

        const std::vector<BeliefPair> in{m, m2, a};
        const BeliefPair v = var_update(in);
        CHECK(v.p0 >= 0.0);
        CHECK(v.p0 + v.p1 == doctest::Approx(1.0).epsilon(1e-9));
    }
}
