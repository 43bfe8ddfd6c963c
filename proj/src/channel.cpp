#include "ccresm/channel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ccresm {

void validate(const ChannelConfig& cfg) {
    if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
        throw std::invalid_argument("ChannelConfig: delta must lie strictly in (0, 1), got " +
                                    std::to_string(cfg.delta));
    if (cfg.sigma2 < 0.0) throw std::invalid_argument("ChannelConfig: sigma2 must be >= 0");
    if (cfg.n < 1) throw std::invalid_argument("ChannelConfig: coded length n must be >= 1");
    if (cfg.delta < 0.01 || cfg.delta > 0.99)
        std::fprintf(stderr,
                     "ccresm: warning: delta = %g is nearly aligned; the sampling model is "
                     "ill-conditioned this close to the boundary\n",
                     cfg.delta);
}

SampleFrame overlap_and_sample(const BitVector& xa, const BitVector& xb, const ChannelConfig& cfg,
                               SplitRng& rng) {
    validate(cfg);
    const std::size_t un = static_cast<std::size_t>(cfg.n);
    if (xa.size() != un || xb.size() != un)
        throw std::invalid_argument("overlap_and_sample: codeword length != n");

    const double sd_odd = std::sqrt(cfg.delta * cfg.sigma2);
    const double sd_even = std::sqrt((1.0 - cfg.delta) * cfg.sigma2);

    SampleFrame frame;
    frame.delta = cfg.delta;
    frame.r.resize(static_cast<std::size_t>(cfg.frame_len()));
    for (std::size_t k = 0; k < un; ++k) {
        const double a = bpsk(xa[k]);
        const double b_prev = (k == 0) ? 0.0 : bpsk(xb[k - 1]);
        frame.r[2 * k] = a + b_prev + sd_odd * rng.next_gaussian();
        frame.r[2 * k + 1] = a + bpsk(xb[k]) + sd_even * rng.next_gaussian();
    }
    if (cfg.include_tail_sample)
        frame.r[2 * un] = bpsk(xb[un - 1]) + sd_odd * rng.next_gaussian();
    return frame;
}

namespace {

// Three-point posterior for a full two-user sample, stable for tiny v.
BeliefTriple level_triple(double r, double v) {
    if (v <= 0.0) {
        const double d0 = std::fabs(r - 2.0), d1 = std::fabs(r), d2 = std::fabs(r + 2.0);
        if (d0 <= d1 && d0 <= d2) return {1.0, 0.0, 0.0};
        if (d1 <= d2) return {0.0, 1.0, 0.0};
        return {0.0, 0.0, 1.0};
    }
    const double inv2v = 1.0 / (2.0 * v);
    double e0 = -(r - 2.0) * (r - 2.0) * inv2v;
    double e1 = -r * r * inv2v + 0.6931471805599453094;  // log 2: two bit-pairs give y = 1
    double e2 = -(r + 2.0) * (r + 2.0) * inv2v;
    const double m = std::max(e0, std::max(e1, e2));
    return normalize_triple(std::exp(e0 - m), std::exp(e1 - m), std::exp(e2 - m));
}

// Two-point posterior for a single-user sample (means +-1), kept as a
// triple with p2 = 0.
BeliefTriple edge_triple(double r, double v) {
    if (v <= 0.0) return (r >= 0.0) ? BeliefTriple{1.0, 0.0, 0.0} : BeliefTriple{0.0, 1.0, 0.0};
    const double inv2v = 1.0 / (2.0 * v);
    const double e0 = -(r - 1.0) * (r - 1.0) * inv2v;
    const double e1 = -(r + 1.0) * (r + 1.0) * inv2v;
    const double m = std::max(e0, e1);
    const BeliefPair p = normalize_pair(std::exp(e0 - m), std::exp(e1 - m));
    return {p.p0, p.p1, 0.0};
}

}  // namespace

std::vector<BeliefTriple> compute_evidence(const SampleFrame& frame, const ChannelConfig& cfg) {
    validate(cfg);
    if (frame.r.size() != static_cast<std::size_t>(cfg.frame_len()))
        throw std::invalid_argument("compute_evidence: frame length " +
                                    std::to_string(frame.r.size()) + " != expected " +
                                    std::to_string(cfg.frame_len()));
    const double v_odd = cfg.delta * cfg.sigma2;
    const double v_even = (1.0 - cfg.delta) * cfg.sigma2;

    std::vector<BeliefTriple> out(frame.r.size());
    out[0] = edge_triple(frame.r[0], v_odd);  // only user A in the first sample
    const std::size_t two_n = 2 * static_cast<std::size_t>(cfg.n);
    for (std::size_t i = 1; i < two_n; ++i)
        out[i] = level_triple(frame.r[i], (i % 2 == 0) ? v_odd : v_even);
    if (cfg.include_tail_sample) out[two_n] = edge_triple(frame.r[two_n], v_odd);
    return out;
}

std::vector<double> awgn_sample(const BitVector& x, double sigma2, SplitRng& rng) {
    if (sigma2 < 0.0) throw std::invalid_argument("awgn_sample: sigma2 must be >= 0");
    const double sd = std::sqrt(sigma2);
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = bpsk(x[i]) + sd * rng.next_gaussian();
    return r;
}

std::vector<BeliefPair> bit_evidence(std::span<const double> r, double sigma2) {
    std::vector<BeliefPair> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const BeliefTriple t = edge_triple(r[i], sigma2);
        out[i] = {t.p0, t.p1};
    }
    return out;
}

}  // namespace ccresm
