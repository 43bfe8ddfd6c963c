#pragma once

#include <array>
#include <span>
#include <vector>

#include "ccresm/bits.hpp"
#include "ccresm/messages.hpp"
#include "ccresm/virtual_graph.hpp"

namespace ccresm {

struct DecodeOptions {
    int max_iters = 50;
    bool early_stop = true;
    // Check every message for normalization after each phase and the
    // evidence for immutability after each iteration (throws on violation).
    bool validate = false;
};

struct DecodeResult {
    BitVector sa_hat;
    BitVector sb_hat;
    int iterations_used = 0;
    bool converged = false;
    // min over all source nodes of |log(p0/p1)| of the decision product.
    double final_margin = 0.0;
    std::array<std::vector<BeliefPair>, 2> source_marginals;
    int conflicts = 0;
};

// All directed messages of one decoding pass over the virtual graph.  The
// two directions of an edge are distinct slots; evidence entries are fixed
// at init() and never written again.
struct MessageStore {
    // Per user, indexed by check/code position j (0-based).  "cur" is the
    // edge between check j and code j, "prev" between check j and code j-1
    // (slots at j = 0 are unused for "prev").
    std::array<std::vector<BeliefPair>, 2> c2x_cur, x2c_cur, c2x_prev, x2c_prev;
    std::array<std::vector<BeliefPair>, 2> c2s, s2c;
    // Per add node a[i], i = idx + 2 for idx in [0, 2n-2].
    std::vector<BeliefPair> add2xa, add2xb, xa2add, xb2add;
    // Fixed evidence: triples for the add rows, direct pairs at the edges.
    std::vector<BeliefTriple> evidence;
    BeliefPair e1_pair;    // evidence on x_A[1]
    BeliefPair tail_pair;  // evidence on x_B[n] when the graph has a tail

    void init(const VirtualGraph& g, std::span<const BeliefTriple> ev);
    // True when every mutable message is a normalized belief within tol.
    bool messages_valid(double tol = 1e-9) const;
};

// Joint sum-product decoding of both packets.  Each iteration runs the six
// flooding phases -- add->code, code->check, check->source, then
// source->check, check->code, code->add -- every phase reading the other
// phases' latest values.  Decisions take the argmax of the product of the
// q messages entering each source node, ties breaking to 0.
DecodeResult decode(std::span<const BeliefTriple> evidence, const VirtualGraph& g,
                    const DecodeOptions& opt);
DecodeResult decode(std::span<const BeliefTriple> evidence, const VirtualGraph& g, int max_iters);

}  // namespace ccresm
