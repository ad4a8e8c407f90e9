#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

// Internal irreducibility and period analysis on a sparsity pattern.
// The period of a strongly connected digraph is the gcd of
// depth(u) + 1 - depth(v) over all edges (u, v), with BFS depths from any
// root.
namespace mutwalk::detail {

struct ChainStructure {
    bool irreducible = false;
    int period = 0;

    bool primitive() const { return irreducible && period == 1; }
};

// edge(u, v) must return true exactly when P(u, v) > 0.
template <class EdgeFn>
ChainStructure analyze_chain(int n, EdgeFn&& edge) {
    std::vector<int> depth(static_cast<size_t>(n), -1);
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    depth[0] = 0;
    order.push_back(0);
    int period = 0;
    for (size_t head = 0; head < order.size(); ++head) {
        const int u = order[head];
        for (int v = 0; v < n; ++v) {
            if (!edge(u, v)) continue;
            if (depth[static_cast<size_t>(v)] < 0) {
                depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
                order.push_back(v);
            }
            period = std::gcd(period, depth[static_cast<size_t>(u)] + 1 -
                                          depth[static_cast<size_t>(v)]);
        }
    }
    if (static_cast<int>(order.size()) != n) return {};

    // strong connectivity also needs every state to reach the root
    std::vector<char> reaches(static_cast<size_t>(n), 0);
    reaches[0] = 1;
    std::vector<int> back{0};
    for (size_t head = 0; head < back.size(); ++head) {
        const int v = back[head];
        for (int u = 0; u < n; ++u) {
            if (!reaches[static_cast<size_t>(u)] && edge(u, v)) {
                reaches[static_cast<size_t>(u)] = 1;
                back.push_back(u);
            }
        }
    }
    for (char r : reaches)
        if (!r) return {};
    return {true, period};
}

}  // namespace mutwalk::detail
