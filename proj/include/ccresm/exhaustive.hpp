#pragma once

#include <span>

#include "ccresm/channel.hpp"
#include "ccresm/ra_code.hpp"

namespace ccresm {

// Exhaustive-likelihood reference decoders for desk-scale checks.  They
// enumerate source words straight from the channel model and share nothing
// with the message-passing decoders.

struct JointMapResult {
    BitVector sa;
    BitVector sb;
    double log_likelihood = 0.0;
};

// argmax over all (2^N)^2 source pairs of the frame's Gaussian
// log-likelihood.  Requires sigma2 > 0 and a small N (the enumeration is
// O(4^N * n)).
JointMapResult joint_map_decode(const SampleFrame& frame, const ChannelConfig& chan,
                                const RaConfig& cfg_a, const RaConfig& cfg_b);

// argmax over all 2^N source words of the single-user AWGN log-likelihood.
BitVector single_user_map_decode(std::span<const double> r, double sigma2, const RaConfig& cfg);

}  // namespace ccresm
