#include "ccresm/ra_code.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccresm {

void validate(const RaConfig& cfg) {
    if (cfg.N < 1 || cfg.q < 1)
        throw std::invalid_argument("RaConfig: N and q must be at least 1");
    const std::size_t n = static_cast<std::size_t>(cfg.n());
    if (cfg.pi.size() != n)
        throw std::invalid_argument("RaConfig: interleaver size " + std::to_string(cfg.pi.size()) +
                                    " != qN = " + std::to_string(n));
    std::vector<char> seen(n, 0);
    for (int v : cfg.pi) {
        if (v < 0 || v >= static_cast<int>(n) || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("RaConfig: interleaver is not a permutation of {0..qN-1}");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

std::vector<int> build_interleaver(int N, int q, std::uint64_t seed) {
    if (N < 1 || q < 1) throw std::invalid_argument("build_interleaver: N and q must be >= 1");
    std::vector<int> pi(static_cast<std::size_t>(N) * static_cast<std::size_t>(q));
    std::iota(pi.begin(), pi.end(), 0);
    SplitRng rng(seed, 0x696e746c76ULL);  // dedicated stream for interleaver draws
    for (std::size_t i = pi.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(pi[i - 1], pi[j]);
    }
    return pi;
}

BitVector ra_encode(const BitVector& source, const RaConfig& cfg) {
    validate(cfg);
    if (source.size() != static_cast<std::size_t>(cfg.N))
        throw std::invalid_argument("ra_encode: source length " + std::to_string(source.size()) +
                                    " != N = " + std::to_string(cfg.N));
    const int n = cfg.n();
    BitVector coded(static_cast<std::size_t>(n));
    std::uint8_t acc = 0;
    for (int j = 0; j < n; ++j) {
        acc ^= source[static_cast<std::size_t>(cfg.source_of(j))];
        coded[static_cast<std::size_t>(j)] = acc;
    }
    return coded;
}

namespace {

void check_valid_pairs(std::span<const BeliefPair> msgs, const char* where) {
    for (const auto& m : msgs) {
        const bool ok = m.p0 >= 0.0 && m.p1 >= 0.0 && std::fabs(m.p0 + m.p1 - 1.0) <= 1e-9;
        if (!ok) throw std::logic_error(std::string("ra_decode: invalid message after ") + where);
    }
}

}  // namespace

RaDecodeResult ra_decode(std::span<const BeliefPair> coded_beliefs, const RaConfig& cfg,
                         const RaDecodeOptions& opt) {
    validate(cfg);
    const int n = cfg.n();
    if (coded_beliefs.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("ra_decode: belief count " +
                                    std::to_string(coded_beliefs.size()) +
                                    " != qN = " + std::to_string(n));
    if (opt.max_iters < 1) throw std::invalid_argument("ra_decode: max_iters must be >= 1");

    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<BeliefPair> evidence(coded_beliefs.begin(), coded_beliefs.end());
    for (auto& e : evidence) e = normalize_pair(e.p0, e.p1);
    const std::vector<BeliefPair> evidence0 = evidence;  // immutability reference

    // Check node j joins source source_of(j), code bit j-1 (j >= 1) and code
    // bit j.  Messages are stored per directed edge; "cur" is the edge to
    // code bit j, "prev" the edge to code bit j-1.
    std::vector<BeliefPair> c2x_cur(un), x2c_cur(un), c2x_prev(un), x2c_prev(un);
    std::vector<BeliefPair> c2s(un), s2c(un);

    std::vector<std::vector<int>> checks_of_src(static_cast<std::size_t>(cfg.N));
    for (auto& v : checks_of_src) v.reserve(static_cast<std::size_t>(cfg.q));
    for (int j = 0; j < n; ++j)
        checks_of_src[static_cast<std::size_t>(cfg.source_of(j))].push_back(j);

    int conflicts = 0;
    double max_delta = 0.0;
    auto store = [&](BeliefPair& slot, double a, double b) {
        bool conflict = false;
        const BeliefPair v = clamp_pair(normalize_pair(a, b, &conflict));
        conflicts += conflict;
        const double d = std::fabs(v.p0 - slot.p0);
        if (d > max_delta) max_delta = d;
        slot = v;
    };

    BitVector decision(static_cast<std::size_t>(cfg.N), 0);
    int iters = 0;
    bool converged = false;

    for (int it = 0; it < opt.max_iters; ++it) {
        max_delta = 0.0;

        // code -> check
        for (int j = 0; j < n; ++j) {
            const std::size_t uj = static_cast<std::size_t>(j);
            const BeliefPair& ev = evidence[uj];
            // to check j: other inputs are the evidence and check j+1's reply
            if (j + 1 < n) {
                const BeliefPair& up = c2x_prev[uj + 1];
                store(x2c_cur[uj], ev.p0 * up.p0, ev.p1 * up.p1);
            } else {
                store(x2c_cur[uj], ev.p0, ev.p1);
            }
            // to check j+1 (edge "prev" of check j+1)
            if (j + 1 < n) {
                const BeliefPair& down = c2x_cur[uj];
                store(x2c_prev[uj + 1], ev.p0 * down.p0, ev.p1 * down.p1);
            }
        }
        if (opt.validate) {
            check_valid_pairs(x2c_cur, "code->check");
            check_valid_pairs(std::span(x2c_prev).subspan(1), "code->check");
        }

        // check -> source
        for (int j = 0; j < n; ++j) {
            const std::size_t uj = static_cast<std::size_t>(j);
            const BeliefPair m =
                (j == 0) ? x2c_cur[0] : chk_update(x2c_prev[uj], x2c_cur[uj]);
            store(c2s[uj], m.p0, m.p1);
        }
        if (opt.validate) check_valid_pairs(c2s, "check->source");

        // source -> check
        for (int i = 0; i < cfg.N; ++i) {
            const auto& checks = checks_of_src[static_cast<std::size_t>(i)];
            for (int j : checks) {
                double a = 1.0, b = 1.0;
                for (int other : checks) {
                    if (other == j) continue;
                    a *= c2s[static_cast<std::size_t>(other)].p0;
                    b *= c2s[static_cast<std::size_t>(other)].p1;
                }
                store(s2c[static_cast<std::size_t>(j)], a, b);
            }
        }
        if (opt.validate) check_valid_pairs(s2c, "source->check");

        // check -> code
        for (int j = 0; j < n; ++j) {
            const std::size_t uj = static_cast<std::size_t>(j);
            if (j == 0) {
                store(c2x_cur[0], s2c[0].p0, s2c[0].p1);
            } else {
                const BeliefPair cur = chk_update(s2c[uj], x2c_prev[uj]);
                store(c2x_cur[uj], cur.p0, cur.p1);
                const BeliefPair prev = chk_update(s2c[uj], x2c_cur[uj]);
                store(c2x_prev[uj], prev.p0, prev.p1);
            }
        }
        if (opt.validate) {
            check_valid_pairs(c2x_cur, "check->code");
            check_valid_pairs(std::span(c2x_prev).subspan(1), "check->code");
            for (std::size_t j = 0; j < un; ++j)
                if (!(evidence[j] == evidence0[j]))
                    throw std::logic_error("ra_decode: evidence changed during iteration");
        }

        iters = it + 1;

        // Stop only on message convergence.  A hard-decision fixed point is
        // not reliable: decisions can sit stable-but-wrong for a few
        // iterations while the messages are still moving.
        if (opt.early_stop && max_delta < 1e-6) {
            converged = true;
            break;
        }
    }

    // hard decisions from the product of all incoming source messages
    for (int i = 0; i < cfg.N; ++i) {
        double a = 1.0, b = 1.0;
        for (int j : checks_of_src[static_cast<std::size_t>(i)]) {
            a *= c2s[static_cast<std::size_t>(j)].p0;
            b *= c2s[static_cast<std::size_t>(j)].p1;
        }
        decision[static_cast<std::size_t>(i)] = b > a ? 1 : 0;
    }

    RaDecodeResult res;
    res.source_hat = decision;
    res.iterations_used = iters;
    res.converged = converged || max_delta < 1e-6;
    res.conflicts = conflicts;

    res.source_marginals.resize(static_cast<std::size_t>(cfg.N));
    for (int i = 0; i < cfg.N; ++i) {
        double a = 1.0, b = 1.0;
        for (int j : checks_of_src[static_cast<std::size_t>(i)]) {
            a *= c2s[static_cast<std::size_t>(j)].p0;
            b *= c2s[static_cast<std::size_t>(j)].p1;
        }
        res.source_marginals[static_cast<std::size_t>(i)] = normalize_pair(a, b);
    }

    res.coded_posteriors.resize(un);
    res.coded_extrinsic.resize(un);
    for (int j = 0; j < n; ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        double a = c2x_cur[uj].p0, b = c2x_cur[uj].p1;
        if (j + 1 < n) {
            a *= c2x_prev[uj + 1].p0;
            b *= c2x_prev[uj + 1].p1;
        }
        res.coded_extrinsic[uj] = normalize_pair(a, b);
        res.coded_posteriors[uj] = normalize_pair(a * evidence[uj].p0, b * evidence[uj].p1);
    }
    return res;
}

BitVector ra_decode_single(std::span<const BeliefPair> coded_beliefs, const RaConfig& cfg,
                           int iters) {
    RaDecodeOptions opt;
    opt.max_iters = iters;
    return ra_decode(coded_beliefs, cfg, opt).source_hat;
}

}  // namespace ccresm
