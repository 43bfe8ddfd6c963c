#pragma once

#include <span>

namespace ccresm {

// Probability mass over one code bit.
struct BeliefPair {
    double p0 = 0.5;
    double p1 = 0.5;

    bool operator==(const BeliefPair&) const = default;
};

// Probability mass over the three-level sample value y in {0, 1, 2}; y is
// the number of 1-bits among the two code bits superposed in one receiver
// sample (noiseless amplitude 2 - 2y).
struct BeliefTriple {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    bool operator==(const BeliefTriple&) const = default;
};

// Floor applied to stored (mutable) messages so iterated products cannot
// collapse to an exact contradiction.
inline constexpr double kBeliefFloor = 1e-12;

// Scales (a, b) to sum to one.  A non-positive sum means the components of
// a product annihilated each other (conflicting certainties); the caller
// gets the uninformative pair and, optionally, a conflict flag.
inline BeliefPair normalize_pair(double a, double b, bool* conflict = nullptr) {
    const double s = a + b;
    if (!(s > 0.0)) {
        if (conflict) *conflict = true;
        return {0.5, 0.5};
    }
    return {a / s, b / s};
}

inline BeliefTriple normalize_triple(double a, double b, double c, bool* conflict = nullptr) {
    const double s = a + b + c;
    if (!(s > 0.0)) {
        if (conflict) *conflict = true;
        return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    }
    return {a / s, b / s, c / s};
}

// Normalized pair kept away from exact 0/1.
inline BeliefPair clamp_pair(BeliefPair p) {
    if (p.p0 < kBeliefFloor) return {kBeliefFloor, 1.0 - kBeliefFloor};
    if (p.p1 < kBeliefFloor) return {1.0 - kBeliefFloor, kBeliefFloor};
    return p;
}

// Message leaving an add node y = x + x', given the (fixed) evidence triple
// on y and the message arriving from the opposite code bit:
//   out = (p0 m0 + p1 m1, p1 m0 + p2 m1), renormalized.
inline BeliefPair add_update(const BeliefTriple& p, const BeliefPair& m, bool* conflict = nullptr) {
    return normalize_pair(p.p0 * m.p0 + p.p1 * m.p1, p.p1 * m.p0 + p.p2 * m.p1, conflict);
}

// Message leaving a parity-check node s = x XOR x': the XOR convolution of
// the two incoming messages.  Already normalized when the inputs are.
inline BeliefPair chk_update(const BeliefPair& a, const BeliefPair& b) {
    return {a.p0 * b.p0 + a.p1 * b.p1, a.p0 * b.p1 + a.p1 * b.p0};
}

// Message leaving a variable (code or source) node: normalized componentwise
// product of the incoming messages on its other edges.  Zero inputs yield
// the uniform pair; an all-zero product signals numerically contradictory
// evidence and falls back to (1/2, 1/2) with the conflict flag set.
inline BeliefPair var_update(std::span<const BeliefPair> inputs, bool* conflict = nullptr) {
    double a = 1.0, b = 1.0;
    for (const auto& m : inputs) {
        a *= m.p0;
        b *= m.p1;
    }
    return normalize_pair(a, b, conflict);
}

}  // namespace ccresm
