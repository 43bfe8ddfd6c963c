#pragma once

#include <span>
#include <vector>

#include "ccresm/channel.hpp"
#include "ccresm/joint_decoder.hpp"
#include "ccresm/ra_code.hpp"
#include "ccresm/virtual_graph.hpp"

namespace ccresm {

// What a Turbo-SIC branch feeds back for cancellation: the full code-bit
// posterior or the posterior with the branch's own channel input removed.
enum class Feedback { App, Extrinsic };

struct SicConfig {
    int m = 5;        // outer (cancellation) rounds
    int n_inner = 10; // RA decoding iterations per round
    Feedback feedback = Feedback::App;

    int total_iters() const { return m * n_inner; }
};

struct MudPosteriors {
    std::vector<BeliefPair> a;
    std::vector<BeliefPair> b;
};

// Per-coded-bit posteriors for both users from the evidence-add-code chain
// alone (all check/source edges removed).  That subgraph is a path, so
// forward-backward message passing is exact.  The evidence triples carry
// the two-fold multiplicity of the middle level; the chain factors divide
// it back out so the result matches plain likelihood marginalization.
MudPosteriors mud_front_end(std::span<const BeliefTriple> evidence, const VirtualGraph& g);

// Collision resolution followed by separate per-user RA decoding, with no
// feedback between the stages.
DecodeResult decode_independent(std::span<const BeliefTriple> evidence, const RaConfig& cfg_a,
                                const RaConfig& cfg_b, int iters);

// Optional warm start for the interference estimates (expected BPSK
// amplitudes per coded bit); empty vectors mean "erased" (all zero).
struct TurboInit {
    std::vector<double> soft_a;
    std::vector<double> soft_b;
};

// Packet-level iterative receiver: each round cancels the other user's
// current soft estimate from the oversampled frame, combines each symbol's
// two cleaned samples by inverse-variance weighting, and re-runs single-
// user RA decoding to refresh the soft coded-bit estimates.
DecodeResult decode_turbo_sic(const SampleFrame& frame, const ChannelConfig& chan,
                              const RaConfig& cfg_a, const RaConfig& cfg_b, const SicConfig& sic,
                              const TurboInit* init = nullptr);

}  // namespace ccresm
