#pragma once

#include "fairdiv/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fairdiv {

/// Ordered-instance construction: every agent's row sorted non-increasing,
/// with the per-agent permutations kept for lifting allocations back.
struct OrderedLift {
    Instance ordered;
    // rank_to_original[i][r] = original index of agent i's r-th largest item
    std::vector<std::vector<int>> rank_to_original;
    // original_to_rank[i][f] = rank position of original item f for agent i
    std::vector<std::vector<int>> original_to_rank;
};

inline bool is_ordered(const Instance& inst) {
    for (int i = 0; i < inst.n(); ++i)
        for (int j = 1; j < inst.m(); ++j)
            if (inst.value(i, j - 1) < inst.value(i, j)) return false;
    return true;
}

/// Sorts each agent's row non-increasing; ties keep the original index order.
inline OrderedLift to_ordered(const Instance& inst) {
    const int n = inst.n();
    const int m = inst.m();
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> rank_to_original(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> original_to_rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return inst.value(i, a) > inst.value(i, b);
        });
        auto& row = rows[static_cast<std::size_t>(i)];
        auto& o2r = original_to_rank[static_cast<std::size_t>(i)];
        o2r.resize(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) {
            row.push_back(inst.value(i, order[static_cast<std::size_t>(r)]));
            o2r[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
        }
        rank_to_original[static_cast<std::size_t>(i)] = std::move(order);
    }
    Instance ordered(inst.flavor(), inst.weights(), std::move(rows), inst.item_labels());
    return OrderedLift{std::move(ordered), std::move(rank_to_original),
                       std::move(original_to_rank)};
}

struct LiftOutcome {
    Allocation allocation;
    // For each original item, the ordered-item position whose consideration
    // caused it to be picked (provenance of the lift).
    std::vector<int> picked_for_rank;
};

/// Allocation lift: walks ordered items smallest-first (chores) or
/// largest-first (goods); the holder of the ordered item picks her best
/// remaining original item (min cost / max value, ties by smallest index).
inline LiftOutcome lift_allocation(const OrderedLift& lift, const Instance& original,
                                   const Allocation& ordered_allocation) {
    const int n = original.n();
    const int m = original.m();
    if (lift.ordered.n() != n || lift.ordered.m() != m)
        throw std::invalid_argument("lift_allocation: instance mismatch");
    ordered_allocation.validate(m);
    if (static_cast<int>(ordered_allocation.bundles.size()) != n)
        throw std::invalid_argument("lift_allocation: bundle count mismatch");
    std::vector<int> holder(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < n; ++i)
        for (int item : ordered_allocation.bundles[static_cast<std::size_t>(i)])
            holder[static_cast<std::size_t>(item)] = i;

    const bool chores = original.flavor() == Flavor::Chores;
    std::vector<bool> taken(static_cast<std::size_t>(m), false);
    LiftOutcome out;
    out.allocation.bundles.resize(static_cast<std::size_t>(n));
    out.picked_for_rank.assign(static_cast<std::size_t>(m), -1);
    for (int step = 0; step < m; ++step) {
        int j = chores ? m - 1 - step : step;
        int agent = holder[static_cast<std::size_t>(j)];
        int pick = -1;
        for (int f = 0; f < m; ++f) {
            if (taken[static_cast<std::size_t>(f)]) continue;
            if (pick < 0) {
                pick = f;
                continue;
            }
            const Rational& v = original.value(agent, f);
            const Rational& b = original.value(agent, pick);
            if (chores ? v < b : v > b) pick = f;
        }
        taken[static_cast<std::size_t>(pick)] = true;
        out.allocation.bundles[static_cast<std::size_t>(agent)].push_back(pick);
        out.picked_for_rank[static_cast<std::size_t>(pick)] = j;
    }
    for (auto& bundle : out.allocation.bundles) std::sort(bundle.begin(), bundle.end());
    return out;
}

}  // namespace fairdiv
