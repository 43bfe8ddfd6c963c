#include "ccresm/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ccresm {

namespace {

// Evidence triple reduced to the plain Gaussian likelihoods of the three
// levels (the posterior's middle component carries the multiplicity 2).
BeliefTriple likelihood_triple(const BeliefTriple& p) {
    return normalize_triple(p.p0, 0.5 * p.p1, p.p2);
}

DecodeResult combine_users(const RaDecodeResult& ra, const RaDecodeResult& rb, int iterations) {
    DecodeResult res;
    res.sa_hat = ra.source_hat;
    res.sb_hat = rb.source_hat;
    res.iterations_used = iterations;
    res.converged = ra.converged && rb.converged;
    res.conflicts = ra.conflicts + rb.conflicts;
    res.source_marginals[0] = ra.source_marginals;
    res.source_marginals[1] = rb.source_marginals;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto* side : {&ra.source_marginals, &rb.source_marginals})
        for (const auto& m : *side) {
            const BeliefPair c = clamp_pair(m);
            margin = std::min(margin, std::fabs(std::log(c.p0 / c.p1)));
        }
    res.final_margin = margin;
    return res;
}

}  // namespace

MudPosteriors mud_front_end(std::span<const BeliefTriple> evidence, const VirtualGraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const std::size_t expect = g.tail ? 2 * n + 1 : 2 * n;
    if (evidence.size() != expect)
        throw std::invalid_argument("mud_front_end: evidence length " +
                                    std::to_string(evidence.size()) + " != expected " +
                                    std::to_string(expect));

    // Chain variable order: x_A[1], x_B[1], x_A[2], x_B[2], ..., x_B[n];
    // consecutive variables t-1, t share add node a[t+1] (evidence[t]).
    const std::size_t len = 2 * n;
    std::vector<BeliefPair> local(len, BeliefPair{0.5, 0.5});
    local[0] = normalize_pair(evidence[0].p0, evidence[0].p1);
    if (g.tail) local[len - 1] = normalize_pair(evidence[2 * n].p0, evidence[2 * n].p1);

    std::vector<BeliefTriple> factor(len);  // factor[t] couples t-1 and t
    for (std::size_t t = 1; t < len; ++t) factor[t] = likelihood_triple(evidence[t]);

    std::vector<BeliefPair> fwd(len), bwd(len);
    fwd[0] = local[0];
    for (std::size_t t = 1; t < len; ++t) {
        const BeliefPair in = add_update(factor[t], fwd[t - 1]);
        fwd[t] = normalize_pair(local[t].p0 * in.p0, local[t].p1 * in.p1);
    }
    bwd[len - 1] = {0.5, 0.5};
    for (std::size_t t = len - 1; t > 0; --t) {
        const BeliefPair carry = normalize_pair(local[t].p0 * bwd[t].p0, local[t].p1 * bwd[t].p1);
        bwd[t - 1] = add_update(factor[t], carry);
    }

    MudPosteriors out;
    out.a.resize(n);
    out.b.resize(n);
    for (std::size_t t = 0; t < len; ++t) {
        const BeliefPair post = normalize_pair(fwd[t].p0 * bwd[t].p0, fwd[t].p1 * bwd[t].p1);
        if (t % 2 == 0)
            out.a[t / 2] = post;
        else
            out.b[t / 2] = post;
    }
    return out;
}

DecodeResult decode_independent(std::span<const BeliefTriple> evidence, const RaConfig& cfg_a,
                                const RaConfig& cfg_b, int iters) {
    const bool tail = evidence.size() == static_cast<std::size_t>(2 * cfg_a.n() + 1);
    const VirtualGraph g = build_virtual_graph(cfg_a, cfg_b, tail);
    const MudPosteriors post = mud_front_end(evidence, g);

    RaDecodeOptions opt;
    opt.max_iters = iters;
    const RaDecodeResult ra = ra_decode(post.a, cfg_a, opt);
    const RaDecodeResult rb = ra_decode(post.b, cfg_b, opt);
    return combine_users(ra, rb, std::max(ra.iterations_used, rb.iterations_used));
}

namespace {

BeliefPair gaussian_bit_belief(double z, double v_eff) {
    const double llr = 2.0 * z / v_eff;  // log p(bit 0) / p(bit 1)
    const double p0 = 1.0 / (1.0 + std::exp(-llr));
    return {p0, 1.0 - p0};
}

// Residual power of a cancelled BPSK interferer with soft mean `soft`.
double residual_var(double soft) { return std::max(0.0, 1.0 - soft * soft); }

}  // namespace

DecodeResult decode_turbo_sic(const SampleFrame& frame, const ChannelConfig& chan,
                              const RaConfig& cfg_a, const RaConfig& cfg_b, const SicConfig& sic,
                              const TurboInit* init) {
    validate(chan);
    const std::size_t n = static_cast<std::size_t>(chan.n);
    if (cfg_a.n() != chan.n || cfg_b.n() != chan.n)
        throw std::invalid_argument("decode_turbo_sic: code length != channel n");
    if (frame.r.size() != static_cast<std::size_t>(chan.frame_len()))
        throw std::invalid_argument("decode_turbo_sic: frame length mismatch");
    if (sic.m < 1 || sic.n_inner < 1)
        throw std::invalid_argument("decode_turbo_sic: iteration counts must be >= 1");

    const double v_odd = chan.delta * chan.sigma2;
    const double v_even = (1.0 - chan.delta) * chan.sigma2;
    // Each cleaned sample sees thermal noise plus the residual power of the
    // partially cancelled interferer; both the combining weights and the
    // bit LLR use that total.  The floor keeps the zero-noise genie case
    // finite.
    const auto sample_var = [](double thermal, double resid) {
        return std::max(thermal + resid, 1e-12);
    };

    std::vector<double> soft_a(n, 0.0), soft_b(n, 0.0);
    if (init) {
        if (!init->soft_a.empty()) {
            if (init->soft_a.size() != n)
                throw std::invalid_argument("decode_turbo_sic: init soft_a length mismatch");
            soft_a = init->soft_a;
        }
        if (!init->soft_b.empty()) {
            if (init->soft_b.size() != n)
                throw std::invalid_argument("decode_turbo_sic: init soft_b length mismatch");
            soft_b = init->soft_b;
        }
    }

    RaDecodeOptions opt;
    opt.max_iters = sic.n_inner;

    std::vector<BeliefPair> beliefs_a(n), beliefs_b(n);
    RaDecodeResult ra, rb;
    int iterations = 0;
    int conflicts = 0;

    for (int round = 0; round < sic.m; ++round) {
        // Both branches cancel using the other branch's estimate from the
        // previous round; the branches do not interact within a round.
        for (std::size_t j = 0; j < n; ++j) {
            const double co = frame.r[2 * j] - (j == 0 ? 0.0 : soft_b[j - 1]);
            const double ce = frame.r[2 * j + 1] - soft_b[j];
            const double wo = 1.0 / sample_var(v_odd, j == 0 ? 0.0 : residual_var(soft_b[j - 1]));
            const double we = 1.0 / sample_var(v_even, residual_var(soft_b[j]));
            beliefs_a[j] = gaussian_bit_belief((wo * co + we * ce) / (wo + we), 1.0 / (wo + we));
        }
        for (std::size_t j = 0; j < n; ++j) {
            double wsum = 1.0 / sample_var(v_even, residual_var(soft_a[j]));
            double acc = wsum * (frame.r[2 * j + 1] - soft_a[j]);
            if (j + 1 < n) {
                const double wo = 1.0 / sample_var(v_odd, residual_var(soft_a[j + 1]));
                acc += wo * (frame.r[2 * j + 2] - soft_a[j + 1]);
                wsum += wo;
            } else if (chan.include_tail_sample) {
                const double wo = 1.0 / sample_var(v_odd, 0.0);
                acc += wo * frame.r[2 * n];
                wsum += wo;
            }
            beliefs_b[j] = gaussian_bit_belief(acc / wsum, 1.0 / wsum);
        }

        ra = ra_decode(beliefs_a, cfg_a, opt);
        rb = ra_decode(beliefs_b, cfg_b, opt);
        iterations += std::max(ra.iterations_used, rb.iterations_used);
        conflicts += ra.conflicts + rb.conflicts;

        const auto& fa = sic.feedback == Feedback::App ? ra.coded_posteriors : ra.coded_extrinsic;
        const auto& fb = sic.feedback == Feedback::App ? rb.coded_posteriors : rb.coded_extrinsic;
        for (std::size_t j = 0; j < n; ++j) {
            soft_a[j] = fa[j].p0 - fa[j].p1;
            soft_b[j] = fb[j].p0 - fb[j].p1;
        }
    }

    DecodeResult res = combine_users(ra, rb, iterations);
    res.conflicts = conflicts;
    return res;
}

}  // namespace ccresm
