#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccresm/bits.hpp"
#include "ccresm/messages.hpp"

namespace ccresm {

// Repeat-accumulate code parameters.  Encoding repeats each of the N source
// bits q times, permutes the qN repeated bits with pi, and runs the result
// through the 1/(1 XOR D) accumulator.  pi is a 0-based permutation of
// {0..qN-1}; coded position j accumulates repeated bit pi[j].
struct RaConfig {
    int N = 0;
    int q = 0;
    std::vector<int> pi;

    int n() const { return N * q; }
    // Source bit feeding coded position j (the check-node/source map).
    int source_of(int j) const { return pi[static_cast<std::size_t>(j)] / q; }
};

// Throws std::invalid_argument if pi is not a bijection on {0..qN-1} or the
// sizes are inconsistent.
void validate(const RaConfig& cfg);

// Uniformly random permutation of {0..qN-1}, deterministic given seed.
std::vector<int> build_interleaver(int N, int q, std::uint64_t seed);

// Source packet -> rate-1/q RA codeword of length qN.
BitVector ra_encode(const BitVector& source, const RaConfig& cfg);

struct RaDecodeOptions {
    int max_iters = 50;
    bool early_stop = true;
    // When set, every message is checked for normalization after each phase
    // and the evidence is checked for immutability after each iteration.
    bool validate = false;
};

struct RaDecodeResult {
    BitVector source_hat;
    std::vector<BeliefPair> source_marginals;   // product of all q incoming messages
    std::vector<BeliefPair> coded_posteriors;   // evidence x incoming check messages
    std::vector<BeliefPair> coded_extrinsic;    // incoming check messages only
    int iterations_used = 0;
    bool converged = false;
    int conflicts = 0;
};

// Sum-product decoding of a single RA codeword from per-coded-bit beliefs.
// Flooding schedule; all mutable messages start at (1/2, 1/2); the source
// decision is the argmax of the product of the q incoming messages, ties
// breaking to 0.
RaDecodeResult ra_decode(std::span<const BeliefPair> coded_beliefs, const RaConfig& cfg,
                         const RaDecodeOptions& opt);

// Hard-decision convenience wrapper.
BitVector ra_decode_single(std::span<const BeliefPair> coded_beliefs, const RaConfig& cfg,
                           int iters);

}  // namespace ccresm
