#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/reduction.hpp"
#include "fairdiv/surd.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace fairdiv {

/// Strict-envy digraph over current bundles: edge i -> j iff v_i(A_i) < v_i(A_j).
struct EnvyGraph {
    std::vector<std::vector<bool>> edge;

    static EnvyGraph build(const Instance& inst, const std::vector<std::uint64_t>& masks) {
        const int n = inst.n();
        EnvyGraph g;
        g.edge.assign(static_cast<std::size_t>(n),
                      std::vector<bool>(static_cast<std::size_t>(n), false));
        std::vector<Rational> own(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            own[static_cast<std::size_t>(i)] =
                bundle_value(inst, i, masks[static_cast<std::size_t>(i)]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    g.edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        own[static_cast<std::size_t>(i)] <
                        bundle_value(inst, i, masks[static_cast<std::size_t>(j)]);
        return g;
    }

    bool envied(int j) const {
        for (std::size_t i = 0; i < edge.size(); ++i)
            if (edge[i][static_cast<std::size_t>(j)]) return true;
        return false;
    }

    /// Smallest-index agent with no incoming envy edge, or -1.
    int unenvied_agent() const {
        for (std::size_t j = 0; j < edge.size(); ++j)
            if (!envied(static_cast<int>(j))) return static_cast<int>(j);
        return -1;
    }
};

/// One envy-cycle rotation. Precondition: every agent is envied. Prefers a
/// cycle of most-envied pointers (ties by smallest index); when the restricted
/// pointer graph is acyclic, falls back to any strict envy cycle, which must
/// exist. Every rotated agent strictly gains.
inline std::vector<std::uint64_t> envy_cycle_rotate(const Instance& inst,
                                                    const std::vector<std::uint64_t>& masks) {
    const int n = inst.n();
    EnvyGraph g = EnvyGraph::build(inst, masks);
    for (int j = 0; j < n; ++j)
        if (!g.envied(j))
            throw std::invalid_argument(
                "envy_cycle_rotate: agent " + std::to_string(j) +
                " is not envied; rotation requires every agent to be envied");

    // Most-envied pointer per envious agent (argmax rival bundle value).
    std::vector<int> top(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int best = -1;
        Rational best_v;
        for (int j = 0; j < n; ++j) {
            if (i == j || !g.edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                continue;
            Rational v = bundle_value(inst, i, masks[static_cast<std::size_t>(j)]);
            if (best < 0 || v > best_v) {
                best = j;
                best_v = v;
            }
        }
        top[static_cast<std::size_t>(i)] = best;
    }

    std::vector<int> cycle;
    std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 on path, 2 done
    for (int start = 0; start < n && cycle.empty(); ++start) {
        if (top[static_cast<std::size_t>(start)] < 0 || state[static_cast<std::size_t>(start)])
            continue;
        std::vector<int> path;
        int cur = start;
        while (cur >= 0 && state[static_cast<std::size_t>(cur)] == 0) {
            state[static_cast<std::size_t>(cur)] = 1;
            path.push_back(cur);
            cur = top[static_cast<std::size_t>(cur)];
        }
        if (cur >= 0 && state[static_cast<std::size_t>(cur)] == 1) {
            auto it = std::find(path.begin(), path.end(), cur);
            cycle.assign(it, path.end());
        }
        for (int v : path) state[static_cast<std::size_t>(v)] = 2;
    }
    if (cycle.empty()) {
        // Reverse walk along "is envied by" always closes a strict cycle.
        std::vector<int> order(static_cast<std::size_t>(n), -1);
        std::vector<int> chain;
        int cur = 0, step = 0;
        while (order[static_cast<std::size_t>(cur)] < 0) {
            order[static_cast<std::size_t>(cur)] = step++;
            chain.push_back(cur);
            int prev = -1;
            for (int i = 0; i < n; ++i)
                if (g.edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(cur)]) {
                    prev = i;
                    break;
                }
            cur = prev;
        }
        auto it = std::find(chain.begin(), chain.end(), cur);
        cycle.assign(it, chain.end());
        std::reverse(cycle.begin(), cycle.end());  // forward envy direction
        std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
    }

    // Each agent on the cycle takes the bundle of the agent she envies.
    std::vector<std::uint64_t> out = masks;
    for (std::size_t u = 0; u < cycle.size(); ++u) {
        int from = cycle[(u + 1) % cycle.size()];
        out[static_cast<std::size_t>(cycle[u])] = masks[static_cast<std::size_t>(from)];
    }
    return out;
}

/// Phase-1 bookkeeping of the preprocessing rounds, kept for the property
/// tests on the partial allocation.
struct PreprocessTrace {
    std::vector<bool> locked;            // membership in L
    std::vector<int> order_label;        // l_i
    std::vector<int> entry_time;         // t_i
    std::vector<std::uint64_t> phase1_bundles;
    int locked_count = 0;                // final r - 1
};

struct GoodsResult {
    Allocation allocation;
    PreprocessTrace trace;
};

/// Envy-cycle elimination with preprocessing, for equal-weight goods on an
/// ordered instance. Phase 1 hands out single items, letting an agent grab a
/// held item worth more than phi times her best available one (the grabber
/// locks, the victim re-queues). Phase 2 gives unlocked agents a second item
/// in decreasing entry time; phase 3 is plain envy-cycle elimination.
inline GoodsResult ece_preprocess_mmax(const OrderedLift& lift) {
    const Instance& inst = lift.ordered;
    if (inst.flavor() != Flavor::Goods)
        throw std::invalid_argument("ece_preprocess_mmax: goods instance required");
    if (!inst.equal_weights())
        throw std::invalid_argument("ece_preprocess_mmax: equal weights required");
    if (!is_ordered(inst))
        throw std::invalid_argument("ece_preprocess_mmax: ordered instance required");
    const int n = inst.n();
    const int m = inst.m();
    const SurdThreshold phi = SurdThreshold::golden_ratio();
    std::uint64_t avail = m == 0 ? 0 : (~std::uint64_t(0) >> (64 - m));
    std::vector<int> held(static_cast<std::size_t>(n), -1);  // single item in phases 1-2
    std::set<int> active;                                     // N'
    std::vector<bool> locked(static_cast<std::size_t>(n), false);
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::vector<int> entry(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) active.insert(i);
    int r = 1, s = 1;

    auto best_available = [&](int agent) {
        int best = -1;
        for (int e = 0; e < m; ++e) {
            if (!(avail >> e & 1)) continue;
            if (best < 0 || inst.value(agent, e) > inst.value(agent, best)) best = e;
        }
        return best;
    };

    while (!active.empty() && avail != 0) {
        int i = *active.begin();
        int e_i = best_available(i);
        entry[static_cast<std::size_t>(i)] = m - std::popcount(avail) + 1;
        // R = agents that already took an item and are not locked, plus i.
        int grab_from = i;
        Rational grab_value = inst.value(i, e_i);
        for (int k = 0; k < n; ++k) {
            if (k == i || active.count(k) || locked[static_cast<std::size_t>(k)]) continue;
            if (held[static_cast<std::size_t>(k)] < 0) continue;
            Rational v = inst.value(i, held[static_cast<std::size_t>(k)]);
            if (v > grab_value) {
                grab_value = v;
                grab_from = k;
            }
        }
        bool grab = grab_from != i &&
                    surd_compare(grab_value, inst.value(i, e_i), phi) == Ordering::Greater;
        if (grab) {
            held[static_cast<std::size_t>(i)] = held[static_cast<std::size_t>(grab_from)];
            held[static_cast<std::size_t>(grab_from)] = -1;
            locked[static_cast<std::size_t>(i)] = true;
            label[static_cast<std::size_t>(i)] = r++;
            active.erase(i);
            active.insert(grab_from);
        } else {
            active.erase(i);
            avail &= ~(std::uint64_t(1) << e_i);
            held[static_cast<std::size_t>(i)] = e_i;
        }
    }

    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        if (held[static_cast<std::size_t>(i)] >= 0)
            masks[static_cast<std::size_t>(i)] = std::uint64_t(1)
                                                 << held[static_cast<std::size_t>(i)];
    PreprocessTrace trace;
    trace.locked = locked;
    trace.entry_time = entry;
    trace.phase1_bundles = masks;
    trace.locked_count = r - 1;

    // Phase 2: unlocked agents, most recent entry first (ties by index).
    std::vector<int> second;
    for (int i = 0; i < n; ++i)
        if (!locked[static_cast<std::size_t>(i)]) second.push_back(i);
    std::stable_sort(second.begin(), second.end(), [&](int a, int b) {
        return entry[static_cast<std::size_t>(a)] > entry[static_cast<std::size_t>(b)];
    });
    for (int i : second) {
        label[static_cast<std::size_t>(i)] = n - s + 1;
        ++s;
        if (avail == 0) continue;
        int e = best_available(i);
        avail &= ~(std::uint64_t(1) << e);
        masks[static_cast<std::size_t>(i)] |= std::uint64_t(1) << e;
    }
    trace.order_label = label;

    // Phase 3: envy-cycle elimination over whatever is left, largest first.
    for (int e = 0; e < m; ++e) {
        if (!(avail >> e & 1)) continue;
        EnvyGraph g = EnvyGraph::build(inst, masks);
        int receiver = g.unenvied_agent();
        while (receiver < 0) {
            masks = envy_cycle_rotate(inst, masks);
            receiver = EnvyGraph::build(inst, masks).unenvied_agent();
        }
        masks[static_cast<std::size_t>(receiver)] |= std::uint64_t(1) << e;
    }

    GoodsResult result;
    result.allocation = Allocation::from_masks(masks, m);
    result.trace = std::move(trace);
    return result;
}

}  // namespace fairdiv
