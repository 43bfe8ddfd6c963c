#pragma once

#include <span>
#include <vector>

#include "ccresm/bits.hpp"
#include "ccresm/messages.hpp"
#include "ccresm/rng.hpp"

namespace ccresm {

// Two-user asynchronous BPSK/AWGN collision channel.  The receiver takes
// two samples per symbol period: the "odd" sample spans the leading delta
// fraction of user A's k-th symbol (overlapping user B's symbol k-1) and
// the "even" sample spans the remaining 1-delta fraction (overlapping B's
// symbol k).  Noise variances are delta*sigma2 and (1-delta)*sigma2.
struct ChannelConfig {
    double delta = 0.5;   // symbol misalignment, strictly inside (0, 1)
    double sigma2 = 0.0;  // noise power; SNR_dB = 10*log10(1/sigma2)
    int n = 0;            // coded packet length qN
    // When set, the receiver also samples the trailing delta-sliver of B's
    // last symbol, adding sample 2n+1 with no interference from A.
    bool include_tail_sample = false;

    int frame_len() const { return include_tail_sample ? 2 * n + 1 : 2 * n; }
};

// Throws on delta outside (0, 1), negative sigma2 or n < 1; warns (stderr)
// for delta within 0.01 of the boundary, where the model is ill-conditioned.
void validate(const ChannelConfig& cfg);

inline double bpsk(int bit) { return 1.0 - 2.0 * bit; }

// Oversampled receiver frame, r[0..2n-1] (plus tail when enabled).
struct SampleFrame {
    std::vector<double> r;
    double delta = 0.0;
};

// Superposes the two codewords with misalignment delta and samples the sum;
// sample 1 carries only user A (B's zeroth symbol does not exist).  Draws
// one standard normal per sample from rng, scaled by that sample's noise
// standard deviation, so sigma2 = 0 consumes the stream identically.
SampleFrame overlap_and_sample(const BitVector& xa, const BitVector& xb, const ChannelConfig& cfg,
                               SplitRng& rng);

// Per-sample posterior over the superposed level y in {0,1,2}, given the
// received value: proportional to (e^{-(r-2)^2/2v}, 2 e^{-r^2/2v},
// e^{-(r+2)^2/2v}) with v the sample's noise variance.  The first (and
// tail) sample carries a single user, so its triple is a two-point mass
// with p2 = 0 and means +-1.  sigma2 = 0 yields the indicator of the
// nearest constellation point.
std::vector<BeliefTriple> compute_evidence(const SampleFrame& frame, const ChannelConfig& cfg);

// Single-user helpers for the no-collision benchmark: one full-symbol
// sample per coded bit, r = bpsk(x) + N(0, sigma2).
std::vector<double> awgn_sample(const BitVector& x, double sigma2, SplitRng& rng);
std::vector<BeliefPair> bit_evidence(std::span<const double> r, double sigma2);

}  // namespace ccresm
