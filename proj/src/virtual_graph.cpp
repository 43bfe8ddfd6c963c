#include "ccresm/virtual_graph.hpp"

#include <stdexcept>

namespace ccresm {

VirtualGraph build_virtual_graph(const RaConfig& cfg_a, const RaConfig& cfg_b, bool include_tail) {
    validate(cfg_a);
    validate(cfg_b);
    if (cfg_a.N != cfg_b.N || cfg_a.q != cfg_b.q)
        throw std::invalid_argument("build_virtual_graph: users must share N and q");

    VirtualGraph g;
    g.N = cfg_a.N;
    g.q = cfg_a.q;
    g.n = cfg_a.n();
    g.tail = include_tail;

    const RaConfig* cfgs[2] = {&cfg_a, &cfg_b};
    for (int u = 0; u < 2; ++u) {
        auto& m = g.src_of_check[static_cast<std::size_t>(u)];
        m.resize(static_cast<std::size_t>(g.n));
        auto& back = g.checks_of_src[static_cast<std::size_t>(u)];
        back.assign(static_cast<std::size_t>(g.N), {});
        for (auto& v : back) v.reserve(static_cast<std::size_t>(g.q));
        for (int j = 0; j < g.n; ++j) {
            const int s = cfgs[u]->source_of(j);
            m[static_cast<std::size_t>(j)] = s;
            back[static_cast<std::size_t>(s)].push_back(j);
        }
    }
    return g;
}

}  // namespace ccresm
