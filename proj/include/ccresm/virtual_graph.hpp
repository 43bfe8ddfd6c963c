#pragma once

#include <array>
#include <vector>

#include "ccresm/ra_code.hpp"

namespace ccresm {

// Joint Tanner graph for two interleaved RA codewords superposed with
// symbol misalignment.  Per user u: source nodes s_u[1..N], check nodes
// c_u[1..n], code nodes x_u[1..n].  Shared: add nodes a[2..2n] modelling
// the amplitude sum in each receiver sample, and evidence nodes e[1..2n].
//
//   a[2k-1] (k >= 2) joins x_A[k] and x_B[k-1];  a[2k] joins x_A[k], x_B[k].
//   e[j] feeds a[j] for j >= 2; e[1] feeds x_A[1] directly (no add node in
//   the top row).  c_u[j] joins s_u[m_u(j)], x_u[j-1], x_u[j]; c_u[1] has
//   degree 2.
struct VirtualGraph {
    int N = 0;
    int q = 0;
    int n = 0;
    bool tail = false;  // extra evidence node e[2n+1] on x_B[n]

    // Source index feeding check j (0-based), per user: m_u(j).
    std::array<std::vector<int>, 2> src_of_check;
    // Checks incident to each source node, per user (each has size q).
    std::array<std::vector<std::vector<int>>, 2> checks_of_src;

    int num_source_nodes() const { return 2 * N; }
    int num_check_nodes() const { return 2 * n; }
    int num_code_nodes() const { return 2 * n; }
    int num_add_nodes() const { return 2 * n - 1; }
    int num_evidence_nodes() const { return tail ? 2 * n + 1 : 2 * n; }

    // Code symbols (1-based) joined by add node a[i], i in [2, 2n].
    int add_a_side(int i) const { return (i % 2 != 0) ? (i + 1) / 2 : i / 2; }
    int add_b_side(int i) const { return (i % 2 != 0) ? (i - 1) / 2 : i / 2; }
};

// Throws if the two configurations disagree on N or q or are invalid.
VirtualGraph build_virtual_graph(const RaConfig& cfg_a, const RaConfig& cfg_b,
                                 bool include_tail = false);

}  // namespace ccresm
