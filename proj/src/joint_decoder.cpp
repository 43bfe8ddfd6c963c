#include "ccresm/joint_decoder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ccresm {

namespace {

bool pair_valid(const BeliefPair& m, double tol) {
    return m.p0 >= 0.0 && m.p1 >= 0.0 && std::fabs(m.p0 + m.p1 - 1.0) <= tol;
}

}  // namespace

void MessageStore::init(const VirtualGraph& g, std::span<const BeliefTriple> ev) {
    const std::size_t un = static_cast<std::size_t>(g.n);
    if (ev.size() != static_cast<std::size_t>(g.tail ? 2 * g.n + 1 : 2 * g.n))
        throw std::invalid_argument("decode: evidence length " + std::to_string(ev.size()) +
                                    " does not match the graph");
    if (ev[0].p2 > 1e-9)
        throw std::invalid_argument("decode: first sample carries only user A, needs p2 = 0");

    for (int u = 0; u < 2; ++u) {
        const std::size_t su = static_cast<std::size_t>(u);
        c2x_cur[su].assign(un, {});
        x2c_cur[su].assign(un, {});
        c2x_prev[su].assign(un, {});
        x2c_prev[su].assign(un, {});
        c2s[su].assign(un, {});
        s2c[su].assign(un, {});
    }
    const std::size_t adds = 2 * un - 1;
    add2xa.assign(adds, {});
    add2xb.assign(adds, {});
    xa2add.assign(adds, {});
    xb2add.assign(adds, {});

    // The per-sample triples arrive as posteriors over the level y, whose
    // middle component carries the multiplicity of the two bit pairs giving
    // y = 1.  The add-node factor must be the plain per-level likelihood --
    // the pair multiplicity re-enters through the sum over (x, x')
    // combinations -- so the multiplicity is divided back out here.  The
    // first (and tail) entries are single-user bit posteriors and stay as
    // they are.
    evidence.assign(ev.begin(), ev.end());
    for (std::size_t i = 1; i < 2 * un; ++i)
        evidence[i] = normalize_triple(evidence[i].p0, 0.5 * evidence[i].p1, evidence[i].p2);
    e1_pair = normalize_pair(evidence[0].p0, evidence[0].p1);
    if (g.tail) {
        if (evidence[2 * un].p2 > 1e-9)
            throw std::invalid_argument("decode: tail sample carries only user B, needs p2 = 0");
        tail_pair = normalize_pair(evidence[2 * un].p0, evidence[2 * un].p1);
    } else {
        tail_pair = {0.5, 0.5};
    }
}

bool MessageStore::messages_valid(double tol) const {
    const std::size_t n = c2x_cur[0].size();
    for (int u = 0; u < 2; ++u) {
        const std::size_t su = static_cast<std::size_t>(u);
        for (std::size_t j = 0; j < n; ++j) {
            if (!pair_valid(c2x_cur[su][j], tol) || !pair_valid(x2c_cur[su][j], tol) ||
                !pair_valid(c2s[su][j], tol) || !pair_valid(s2c[su][j], tol))
                return false;
            if (j >= 1 && (!pair_valid(c2x_prev[su][j], tol) || !pair_valid(x2c_prev[su][j], tol)))
                return false;
        }
    }
    for (std::size_t i = 0; i < add2xa.size(); ++i)
        if (!pair_valid(add2xa[i], tol) || !pair_valid(add2xb[i], tol) ||
            !pair_valid(xa2add[i], tol) || !pair_valid(xb2add[i], tol))
            return false;
    return true;
}

namespace {

struct Worker {
    const VirtualGraph& g;
    MessageStore& s;
    const DecodeOptions& opt;
    int conflicts = 0;
    double max_delta = 0.0;
    std::vector<BeliefTriple> evidence0;

    Worker(const VirtualGraph& graph, MessageStore& store, const DecodeOptions& options)
        : g(graph), s(store), opt(options) {
        if (opt.validate) evidence0 = store.evidence;
    }

    void put(BeliefPair& slot, double a, double b) {
        bool conflict = false;
        const BeliefPair v = clamp_pair(normalize_pair(a, b, &conflict));
        conflicts += conflict;
        const double d = std::fabs(v.p0 - slot.p0);
        if (d > max_delta) max_delta = d;
        slot = v;
    }

    void require_valid(const char* phase) const {
        if (!s.messages_valid())
            throw std::logic_error(std::string("decode: invalid message after phase ") + phase);
    }

    // Evidence triple feeding add node idx (a[idx + 2]).
    const BeliefTriple& add_evidence(std::size_t idx) const { return s.evidence[idx + 1]; }

    void phase_add_to_code() {
        for (std::size_t i = 0; i < s.add2xa.size(); ++i) {
            const BeliefTriple& p = add_evidence(i);
            bool ca = false, cb = false;
            BeliefPair to_b = add_update(p, s.xa2add[i], &cb);
            BeliefPair to_a = add_update(p, s.xb2add[i], &ca);
            conflicts += ca + cb;
            put(s.add2xb[i], to_b.p0, to_b.p1);
            put(s.add2xa[i], to_a.p0, to_a.p1);
        }
    }

    // Product of the add-row inputs of code node (u, j): the adjacent add
    // messages, or the direct evidence pair at the boundary nodes.
    void add_row_product(int u, std::size_t j, double& a, double& b) const {
        const std::size_t n = static_cast<std::size_t>(g.n);
        if (u == 0) {
            const BeliefPair& odd = (j == 0) ? s.e1_pair : s.add2xa[2 * j - 1];
            const BeliefPair& even = s.add2xa[2 * j];
            a = odd.p0 * even.p0;
            b = odd.p1 * even.p1;
        } else {
            const BeliefPair& even = s.add2xb[2 * j];
            a = even.p0;
            b = even.p1;
            if (j + 1 < n) {
                a *= s.add2xb[2 * j + 1].p0;
                b *= s.add2xb[2 * j + 1].p1;
            } else if (g.tail) {
                a *= s.tail_pair.p0;
                b *= s.tail_pair.p1;
            }
        }
    }

    void phase_code_to_check() {
        const std::size_t n = static_cast<std::size_t>(g.n);
        for (int u = 0; u < 2; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            for (std::size_t j = 0; j < n; ++j) {
                double a, b;
                add_row_product(u, j, a, b);
                if (j + 1 < n) {
                    const BeliefPair& from_next = s.c2x_prev[su][j + 1];
                    put(s.x2c_cur[su][j], a * from_next.p0, b * from_next.p1);
                    const BeliefPair& from_own = s.c2x_cur[su][j];
                    put(s.x2c_prev[su][j + 1], a * from_own.p0, b * from_own.p1);
                } else {
                    put(s.x2c_cur[su][j], a, b);
                }
            }
        }
    }

    void phase_check_to_source() {
        const std::size_t n = static_cast<std::size_t>(g.n);
        for (int u = 0; u < 2; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            put(s.c2s[su][0], s.x2c_cur[su][0].p0, s.x2c_cur[su][0].p1);
            for (std::size_t j = 1; j < n; ++j) {
                const BeliefPair m = chk_update(s.x2c_prev[su][j], s.x2c_cur[su][j]);
                put(s.c2s[su][j], m.p0, m.p1);
            }
        }
    }

    void phase_source_to_check() {
        for (int u = 0; u < 2; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            for (const auto& checks : g.checks_of_src[su]) {
                for (int j : checks) {
                    double a = 1.0, b = 1.0;
                    for (int other : checks) {
                        if (other == j) continue;
                        a *= s.c2s[su][static_cast<std::size_t>(other)].p0;
                        b *= s.c2s[su][static_cast<std::size_t>(other)].p1;
                    }
                    put(s.s2c[su][static_cast<std::size_t>(j)], a, b);
                }
            }
        }
    }

    void phase_check_to_code() {
        const std::size_t n = static_cast<std::size_t>(g.n);
        for (int u = 0; u < 2; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            put(s.c2x_cur[su][0], s.s2c[su][0].p0, s.s2c[su][0].p1);
            for (std::size_t j = 1; j < n; ++j) {
                const BeliefPair cur = chk_update(s.s2c[su][j], s.x2c_prev[su][j]);
                put(s.c2x_cur[su][j], cur.p0, cur.p1);
                const BeliefPair prev = chk_update(s.s2c[su][j], s.x2c_cur[su][j]);
                put(s.c2x_prev[su][j], prev.p0, prev.p1);
            }
        }
    }

    // Product of the check-row inputs of code node (u, j).
    void check_row_product(int u, std::size_t j, double& a, double& b) const {
        const std::size_t su = static_cast<std::size_t>(u);
        const std::size_t n = static_cast<std::size_t>(g.n);
        a = s.c2x_cur[su][j].p0;
        b = s.c2x_cur[su][j].p1;
        if (j + 1 < n) {
            a *= s.c2x_prev[su][j + 1].p0;
            b *= s.c2x_prev[su][j + 1].p1;
        }
    }

    void phase_code_to_add() {
        const std::size_t n = static_cast<std::size_t>(g.n);
        for (std::size_t i = 0; i < s.xa2add.size(); ++i) {
            const bool odd = (i % 2 != 0);
            // A-side code index
            const std::size_t ja = odd ? (i + 1) / 2 : i / 2;
            double a, b;
            check_row_product(0, ja, a, b);
            if (odd) {  // other add input of x_A[ja] is its even add
                a *= s.add2xa[2 * ja].p0;
                b *= s.add2xa[2 * ja].p1;
            } else if (ja == 0) {
                a *= s.e1_pair.p0;
                b *= s.e1_pair.p1;
            } else {
                a *= s.add2xa[2 * ja - 1].p0;
                b *= s.add2xa[2 * ja - 1].p1;
            }
            put(s.xa2add[i], a, b);

            // B-side code index
            const std::size_t jb = odd ? (i - 1) / 2 : i / 2;
            check_row_product(1, jb, a, b);
            if (odd) {  // other add input of x_B[jb] is its even add
                a *= s.add2xb[2 * jb].p0;
                b *= s.add2xb[2 * jb].p1;
            } else if (jb + 1 < n) {
                a *= s.add2xb[2 * jb + 1].p0;
                b *= s.add2xb[2 * jb + 1].p1;
            } else if (g.tail) {
                a *= s.tail_pair.p0;
                b *= s.tail_pair.p1;
            }
            put(s.xb2add[i], a, b);
        }
    }

    void decisions(std::array<std::vector<BeliefPair>, 2>& marg, BitVector& da,
                   BitVector& db) const {
        for (int u = 0; u < 2; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            BitVector& d = (u == 0) ? da : db;
            for (std::size_t i = 0; i < g.checks_of_src[su].size(); ++i) {
                double a = 1.0, b = 1.0;
                for (int j : g.checks_of_src[su][i]) {
                    a *= s.c2s[su][static_cast<std::size_t>(j)].p0;
                    b *= s.c2s[su][static_cast<std::size_t>(j)].p1;
                }
                marg[su][i] = normalize_pair(a, b);
                d[i] = b > a ? 1 : 0;
            }
        }
    }

    void check_evidence_unchanged() const {
        for (std::size_t i = 0; i < s.evidence.size(); ++i)
            if (!(s.evidence[i] == evidence0[i]))
                throw std::logic_error("decode: evidence changed during iteration");
    }
};

}  // namespace

DecodeResult decode(std::span<const BeliefTriple> evidence, const VirtualGraph& g,
                    const DecodeOptions& opt) {
    if (g.n < 1) throw std::invalid_argument("decode: empty graph");
    if (opt.max_iters < 1) throw std::invalid_argument("decode: max_iters must be >= 1");

    MessageStore store;
    store.init(g, evidence);
    Worker w(g, store, opt);

    DecodeResult res;
    res.sa_hat.assign(static_cast<std::size_t>(g.N), 0);
    res.sb_hat.assign(static_cast<std::size_t>(g.N), 0);
    res.source_marginals[0].resize(static_cast<std::size_t>(g.N));
    res.source_marginals[1].resize(static_cast<std::size_t>(g.N));

    for (int it = 0; it < opt.max_iters; ++it) {
        w.max_delta = 0.0;

        w.phase_add_to_code();
        if (opt.validate) w.require_valid("add->code");
        w.phase_code_to_check();
        if (opt.validate) w.require_valid("code->check");
        w.phase_check_to_source();
        if (opt.validate) w.require_valid("check->source");
        w.phase_source_to_check();
        if (opt.validate) w.require_valid("source->check");
        w.phase_check_to_code();
        if (opt.validate) w.require_valid("check->code");
        w.phase_code_to_add();
        if (opt.validate) {
            w.require_valid("code->add");
            w.check_evidence_unchanged();
        }

        res.iterations_used = it + 1;

        // Stop only on message convergence; a hard-decision fixed point can
        // be stable-but-wrong while the messages are still moving.
        if (opt.early_stop && w.max_delta < 1e-6) {
            res.converged = true;
            break;
        }
    }
    if (w.max_delta < 1e-6) res.converged = true;
    w.decisions(res.source_marginals, res.sa_hat, res.sb_hat);

    res.conflicts = w.conflicts;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& side : res.source_marginals)
        for (const auto& m : side) {
            const BeliefPair c = clamp_pair(m);
            margin = std::min(margin, std::fabs(std::log(c.p0 / c.p1)));
        }
    res.final_margin = margin;
    return res;
}

DecodeResult decode(std::span<const BeliefTriple> evidence, const VirtualGraph& g, int max_iters) {
    DecodeOptions opt;
    opt.max_iters = max_iters;
    return decode(evidence, g, opt);
}

}  // namespace ccresm
