// Deterministic max flow on the type-set / type transportation network.
// Sinks are drained in increasing type order first (low-weight types are the
// scarce resource), then a global Edmonds-Karp sweep guarantees maximality.
// With S = Rational every quantity is exact.
#pragma once

#include "grsse/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

namespace grsse {

template <class S>
struct TransportResult {
    // flow[i][j]: flow from source i along its j-th listed edge
    std::vector<std::vector<S>> flow;
    S total;
};

// source_cap[i]: capacity src -> source i
// sink_cap[j]:   capacity sink j -> des
// edges[i]:      sink indices reachable from source i (sorted ascending)
// A source->sink edge itself is unconstrained (capped here at the source
// capacity, which is equivalent since total flow through it is bounded).
template <class S>
TransportResult<S> max_transport(const std::vector<S>& source_cap, const std::vector<S>& sink_cap,
                                 const std::vector<std::vector<uint32_t>>& edges) {
    using traits = scalar_traits<S>;
    const size_t a = source_cap.size(), b = sink_cap.size();
    const uint32_t kSrc = 0;
    const uint32_t kDes = static_cast<uint32_t>(1 + a + b);
    auto source_node = [&](size_t i) { return static_cast<uint32_t>(1 + i); };
    auto sink_node = [&](size_t j) { return static_cast<uint32_t>(1 + a + j); };
    const size_t num_nodes = 2 + a + b;

    struct Edge {
        uint32_t to;
        S cap;
        S flow;
    };
    std::vector<Edge> es;
    std::vector<std::vector<uint32_t>> adj(num_nodes);
    auto add_edge = [&](uint32_t u, uint32_t v, const S& cap) {
        adj[u].push_back(static_cast<uint32_t>(es.size()));
        es.push_back({v, cap, traits::zero()});
        adj[v].push_back(static_cast<uint32_t>(es.size()));
        es.push_back({u, traits::zero(), traits::zero()});
        return static_cast<uint32_t>(es.size() - 2);
    };

    for (size_t i = 0; i < a; ++i) add_edge(kSrc, source_node(i), source_cap[i]);
    std::vector<std::vector<uint32_t>> mid_edge(a);
    for (size_t i = 0; i < a; ++i)
        for (uint32_t j : edges[i])
            mid_edge[i].push_back(add_edge(source_node(i), sink_node(j), source_cap[i]));
    std::vector<uint32_t> sink_edge(b);
    for (size_t j = 0; j < b; ++j) sink_edge[j] = add_edge(sink_node(j), kDes, sink_cap[j]);

    const S eps = traits::flow_eps();
    auto residual = [&](uint32_t e) { return es[e].cap - es[e].flow; };

    constexpr uint32_t kAnyDesEdge = UINT32_MAX;
    std::vector<int32_t> pred(num_nodes);
    // Shortest augmenting path src -> des; when allowed_des_edge is set, only
    // that edge may enter des. Neighbor order is fixed, so paths (and hence
    // the resulting flow split) are deterministic.
    auto bfs = [&](uint32_t allowed_des_edge) -> bool {
        std::fill(pred.begin(), pred.end(), -1);
        pred[kSrc] = -2;
        std::queue<uint32_t> q;
        q.push(kSrc);
        while (!q.empty()) {
            uint32_t u = q.front();
            q.pop();
            for (uint32_t e : adj[u]) {
                uint32_t v = es[e].to;
                if (v == kDes && allowed_des_edge != kAnyDesEdge && e != allowed_des_edge) continue;
                if (pred[v] == -1 && residual(e) > eps) {
                    pred[v] = static_cast<int32_t>(e);
                    if (v == kDes) return true;
                    q.push(v);
                }
            }
        }
        return false;
    };
    auto augment = [&]() {
        S bottleneck = traits::zero();
        bool first = true;
        for (uint32_t v = kDes; v != kSrc;) {
            uint32_t e = static_cast<uint32_t>(pred[v]);
            S r = residual(e);
            if (first || r < bottleneck) bottleneck = r;
            first = false;
            v = es[e ^ 1].to;
        }
        for (uint32_t v = kDes; v != kSrc;) {
            uint32_t e = static_cast<uint32_t>(pred[v]);
            es[e].flow = es[e].flow + bottleneck;
            es[e ^ 1].flow = es[e ^ 1].flow - bottleneck;
            v = es[e ^ 1].to;
        }
        return bottleneck;
    };

    S total = traits::zero();
    for (size_t j = 0; j < b; ++j)
        while (residual(sink_edge[j]) > eps && bfs(sink_edge[j])) total = total + augment();
    while (bfs(kAnyDesEdge)) total = total + augment();

    TransportResult<S> out;
    out.total = total;
    out.flow.resize(a);
    for (size_t i = 0; i < a; ++i) {
        out.flow[i].reserve(mid_edge[i].size());
        for (uint32_t e : mid_edge[i]) out.flow[i].push_back(es[e].flow);
    }
    return out;
}

}  // namespace grsse
