#include "ccresm/exhaustive.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ccresm {

namespace {

BitVector word_bits(unsigned long long w, int len) {
    BitVector bits(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) bits[static_cast<std::size_t>(i)] = (w >> i) & 1u;
    return bits;
}

}  // namespace

JointMapResult joint_map_decode(const SampleFrame& frame, const ChannelConfig& chan,
                                const RaConfig& cfg_a, const RaConfig& cfg_b) {
    validate(chan);
    if (chan.sigma2 <= 0.0)
        throw std::invalid_argument("joint_map_decode: needs sigma2 > 0");
    if (cfg_a.N != cfg_b.N || cfg_a.q != cfg_b.q)
        throw std::invalid_argument("joint_map_decode: users must share N and q");
    if (cfg_a.N > 12)
        throw std::invalid_argument("joint_map_decode: N > 12 is not enumerable at desk scale");
    if (frame.r.size() != static_cast<std::size_t>(chan.frame_len()))
        throw std::invalid_argument("joint_map_decode: frame length mismatch");

    const int N = cfg_a.N;
    const std::size_t n = static_cast<std::size_t>(cfg_a.n());
    const unsigned long long words = 1ULL << N;

    std::vector<BitVector> coded_a(words), coded_b(words);
    for (unsigned long long w = 0; w < words; ++w) {
        coded_a[w] = ra_encode(word_bits(w, N), cfg_a);
        coded_b[w] = ra_encode(word_bits(w, N), cfg_b);
    }

    const double inv2_odd = 1.0 / (2.0 * chan.delta * chan.sigma2);
    const double inv2_even = 1.0 / (2.0 * (1.0 - chan.delta) * chan.sigma2);

    JointMapResult best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    unsigned long long best_a = 0, best_b = 0;

    for (unsigned long long wa = 0; wa < words; ++wa) {
        const BitVector& xa = coded_a[wa];
        for (unsigned long long wb = 0; wb < words; ++wb) {
            const BitVector& xb = coded_b[wb];
            double ll = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double a = bpsk(xa[k]);
                const double mean_odd = a + (k == 0 ? 0.0 : bpsk(xb[k - 1]));
                const double mean_even = a + bpsk(xb[k]);
                const double d_odd = frame.r[2 * k] - mean_odd;
                const double d_even = frame.r[2 * k + 1] - mean_even;
                ll -= d_odd * d_odd * inv2_odd + d_even * d_even * inv2_even;
            }
            if (chan.include_tail_sample) {
                const double d = frame.r[2 * n] - bpsk(xb[n - 1]);
                ll -= d * d * inv2_odd;
            }
            if (ll > best.log_likelihood) {
                best.log_likelihood = ll;
                best_a = wa;
                best_b = wb;
            }
        }
    }
    best.sa = word_bits(best_a, N);
    best.sb = word_bits(best_b, N);
    return best;
}

BitVector single_user_map_decode(std::span<const double> r, double sigma2, const RaConfig& cfg) {
    if (sigma2 <= 0.0)
        throw std::invalid_argument("single_user_map_decode: needs sigma2 > 0");
    if (cfg.N > 20)
        throw std::invalid_argument("single_user_map_decode: N too large to enumerate");
    if (r.size() != static_cast<std::size_t>(cfg.n()))
        throw std::invalid_argument("single_user_map_decode: sample length != qN");

    const unsigned long long words = 1ULL << cfg.N;
    double best_ll = -std::numeric_limits<double>::infinity();
    unsigned long long best_w = 0;
    for (unsigned long long w = 0; w < words; ++w) {
        const BitVector coded = ra_encode(word_bits(w, cfg.N), cfg);
        double ll = 0.0;
        for (std::size_t j = 0; j < coded.size(); ++j) {
            const double d = r[j] - bpsk(coded[j]);
            ll -= d * d;
        }
        if (ll > best_ll) {
            best_ll = ll;
            best_w = w;
        }
    }
    return word_bits(best_w, cfg.N);
}

}  // namespace ccresm
