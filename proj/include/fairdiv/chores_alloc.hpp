#pragma once

#include "fairdiv/checkers.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/reduction.hpp"
#include "fairdiv/surd.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fairdiv {

enum class ProducerPath { Heuristic, Exhaustive };

struct ProducerResult {
    Allocation allocation;
    ProducerPath path = ProducerPath::Heuristic;
};

namespace detail {

inline void require_chores(const Instance& inst, const char* who) {
    if (inst.flavor() != Flavor::Chores)
        throw std::invalid_argument(std::string(who) + ": chores instance required");
}

/// Items in decreasing order of the largest cost any agent assigns them.
inline std::vector<int> items_by_decreasing_cost(const Instance& inst) {
    std::vector<int> order(static_cast<std::size_t>(inst.m()));
    for (int j = 0; j < inst.m(); ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        Rational ma = inst.value(0, a), mb = inst.value(0, b);
        for (int i = 1; i < inst.n(); ++i) {
            ma = fairdiv::max(ma, inst.value(i, a));
            mb = fairdiv::max(mb, inst.value(i, b));
        }
        return ma > mb;
    });
    return order;
}

inline int argmin_item(const Instance& inst, int agent, std::uint64_t mask) {
    return extreme_item(inst, agent, mask, false);
}
inline int argmax_item(const Instance& inst, int agent, std::uint64_t mask) {
    return extreme_item(inst, agent, mask, true);
}

/// Exhaustive fallback: first allocation (sweep order) satisfying the notion
/// at factor 1. Existence is the cited theorem; exhausting the space without a
/// witness is a soundness bug, not an input error.
inline Allocation exhaustive_witness(const Instance& inst, FairnessNotion notion) {
    NonexistenceResult r = verify_nonexistence(inst, notion);
    if (!r.satisfiable)
        throw std::logic_error("producer: exhaustive search found no " + to_string(notion) +
                               " allocation, contradicting its existence theorem");
    return *r.witness;
}

}  // namespace detail

/// PROPX producer: greedy largest-first with slack-aware placement, verified
/// by the checker, with a pruned exhaustive fallback.
inline ProducerResult propx_allocate(const Instance& inst) {
    detail::require_chores(inst, "propx_allocate");
    const int n = inst.n();
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
    std::vector<Rational> load(static_cast<std::size_t>(n));  // c_i(X_i)
    std::vector<Rational> bound;                              // w_i * c_i(M)
    for (int i = 0; i < n; ++i) bound.push_back(inst.weight(i) * inst.row_total(i));

    auto propx_ok_after = [&](int agent, int item) {
        std::uint64_t next = masks[static_cast<std::size_t>(agent)] |
                             (std::uint64_t(1) << item);
        int mn = detail::argmin_item(inst, agent, next);
        Rational kept = load[static_cast<std::size_t>(agent)] + inst.value(agent, item) -
                        inst.value(agent, mn);
        return kept <= bound[static_cast<std::size_t>(agent)];
    };

    for (int item : detail::items_by_decreasing_cost(inst)) {
        int pick = -1;
        bool pick_feasible = false;
        Rational pick_ratio;
        for (int i = 0; i < n; ++i) {
            Rational ratio = (load[static_cast<std::size_t>(i)] + inst.value(i, item)) /
                             inst.weight(i);
            bool feasible = propx_ok_after(i, item);
            bool better;
            if (pick < 0)
                better = true;
            else if (feasible != pick_feasible)
                better = feasible;
            else
                better = ratio < pick_ratio;
            if (better) {
                pick = i;
                pick_feasible = feasible;
                pick_ratio = ratio;
            }
        }
        masks[static_cast<std::size_t>(pick)] |= std::uint64_t(1) << item;
        load[static_cast<std::size_t>(pick)] += inst.value(pick, item);
    }
    Allocation alloc = Allocation::from_masks(masks, inst.m());
    if (factor(inst, alloc, FairnessNotion::PROPX).satisfied_at_one())
        return {std::move(alloc), ProducerPath::Heuristic};

    // Backtracking over item placements; a bundle whose cost minus its
    // cheapest item exceeds the share can never recover, so prune there.
    std::vector<int> order = detail::items_by_decreasing_cost(inst);
    std::fill(masks.begin(), masks.end(), 0);
    std::fill(load.begin(), load.end(), Rational(0));
    std::optional<Allocation> found;
    auto dfs = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == order.size()) {
            found = Allocation::from_masks(masks, inst.m());
            return true;
        }
        int item = order[idx];
        for (int i = 0; i < n; ++i) {
            if (!propx_ok_after(i, item)) continue;
            masks[static_cast<std::size_t>(i)] |= std::uint64_t(1) << item;
            load[static_cast<std::size_t>(i)] += inst.value(i, item);
            if (self(self, idx + 1)) return true;
            masks[static_cast<std::size_t>(i)] &= ~(std::uint64_t(1) << item);
            load[static_cast<std::size_t>(i)] -= inst.value(i, item);
        }
        return false;
    };
    if (!dfs(dfs, 0))
        throw std::logic_error(
            "propx_allocate: search exhausted without a PROPX allocation; "
            "this contradicts the Bid-and-Take existence theorem");
    return {std::move(*found), ProducerPath::Exhaustive};
}

/// Weighted EF1 producer: picking sequence with largest-remainder scheduling
/// (agent frequency proportional to weight), verified, exhaustive fallback.
inline ProducerResult ef1_allocate(const Instance& inst) {
    detail::require_chores(inst, "ef1_allocate");
    const int n = inst.n();
    const int m = inst.m();
    std::uint64_t remaining = m == 0 ? 0 : (~std::uint64_t(0) >> (64 - m));
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
    std::vector<long long> count(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < m; ++t) {
        int turn = 0;
        Rational best_deficit = inst.weight(0) * Rational(t + 1) - Rational(count[0]);
        for (int i = 1; i < n; ++i) {
            Rational deficit =
                inst.weight(i) * Rational(t + 1) - Rational(count[static_cast<std::size_t>(i)]);
            if (deficit > best_deficit) {
                best_deficit = deficit;
                turn = i;
            }
        }
        int item = detail::argmin_item(inst, turn, remaining);
        masks[static_cast<std::size_t>(turn)] |= std::uint64_t(1) << item;
        remaining &= ~(std::uint64_t(1) << item);
        ++count[static_cast<std::size_t>(turn)];
    }
    Allocation alloc = Allocation::from_masks(masks, m);
    if (factor(inst, alloc, FairnessNotion::EF1).satisfied_at_one())
        return {std::move(alloc), ProducerPath::Heuristic};
    return {detail::exhaustive_witness(inst, FairnessNotion::EF1), ProducerPath::Exhaustive};
}

/// EFX producer for equal weights on ordered instances: each chore goes to an
/// agent that envies no one; when everyone envies, bundles rotate along a
/// top-trading cycle (every agent points at her cheapest bundle).
inline ProducerResult efx_allocate_equal_weights(const OrderedLift& lift) {
    const Instance& inst = lift.ordered;
    detail::require_chores(inst, "efx_allocate_equal_weights");
    if (!inst.equal_weights())
        throw std::invalid_argument("efx_allocate_equal_weights: equal weights required");
    if (!is_ordered(inst))
        throw std::invalid_argument("efx_allocate_equal_weights: ordered instance required");
    const int n = inst.n();
    const int m = inst.m();
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
    std::vector<Rational> own(static_cast<std::size_t>(n));

    auto envies_no_one = [&](int a) {
        for (int b = 0; b < n; ++b)
            if (b != a &&
                own[static_cast<std::size_t>(a)] >
                    bundle_value(inst, a, masks[static_cast<std::size_t>(b)]))
                return false;
        return true;
    };
    auto rotate_top_cycle = [&]() {
        std::vector<int> top(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            int best = -1;
            Rational best_cost;
            for (int b = 0; b < n; ++b) {
                Rational c = bundle_value(inst, a, masks[static_cast<std::size_t>(b)]);
                if (best < 0 || c < best_cost) {
                    best = b;
                    best_cost = c;
                }
            }
            top[static_cast<std::size_t>(a)] = best;
        }
        // Functional graph: walk until a node repeats, then rotate the cycle.
        std::vector<int> seen(static_cast<std::size_t>(n), -1);
        int cur = 0, step = 0;
        while (seen[static_cast<std::size_t>(cur)] < 0) {
            seen[static_cast<std::size_t>(cur)] = step++;
            cur = top[static_cast<std::size_t>(cur)];
        }
        std::vector<int> cycle;
        int node = cur;
        do {
            cycle.push_back(node);
            node = top[static_cast<std::size_t>(node)];
        } while (node != cur);
        std::vector<std::uint64_t> old = masks;
        for (std::size_t u = 0; u < cycle.size(); ++u) {
            int a = cycle[u];
            int src = top[static_cast<std::size_t>(a)];
            masks[static_cast<std::size_t>(a)] = old[static_cast<std::size_t>(src)];
            own[static_cast<std::size_t>(a)] =
                bundle_value(inst, a, masks[static_cast<std::size_t>(a)]);
        }
    };

    for (int item = 0; item < m; ++item) {
        int receiver = -1;
        while (receiver < 0) {
            for (int a = 0; a < n && receiver < 0; ++a)
                if (envies_no_one(a)) receiver = a;
            if (receiver < 0) rotate_top_cycle();
        }
        masks[static_cast<std::size_t>(receiver)] |= std::uint64_t(1) << item;
        own[static_cast<std::size_t>(receiver)] += inst.value(receiver, item);
    }
    Allocation alloc = Allocation::from_masks(masks, m);
    if (factor(inst, alloc, FairnessNotion::EFX).satisfied_at_one())
        return {std::move(alloc), ProducerPath::Heuristic};
    return {detail::exhaustive_witness(inst, FairnessNotion::EFX), ProducerPath::Exhaustive};
}

// ---- Swap algorithm ----

struct SwapDecision {
    enum class Kind { NoSwap, TwoAgentSwap, ThreeWaySwap };
    Kind kind = Kind::NoSwap;
    int agent = -1;
    int f_min = -1;
    int f_max = -1;       // ThreeWaySwap only
    int donee_min = -1;   // receives {f_min}
    int donee_max = -1;   // receives {f_max}
};

struct SwapTrace {
    Allocation input;
    std::vector<SwapDecision> decisions;
    Allocation output;
};

/// Turns a PROPX allocation into a (1+lambda(n))-MMAX one: any agent holding
/// at least two items whose cheapest one still outweighs lambda times the
/// rest of the instance trades it (and for n >= 3 her dearest one) against
/// the smallest rival bundles. Conditions are evaluated against the evolving
/// allocation; donated-to agents hold singletons and are never revisited.
inline std::pair<Allocation, SwapTrace> swap_mmax(const Instance& inst, const Allocation& propx,
                                                  MmsCache* cache = nullptr) {
    detail::require_chores(inst, "swap_mmax");
    if (inst.n() < 2) throw std::invalid_argument("swap_mmax: requires n >= 2");
    if (!factor(inst, propx, FairnessNotion::PROPX, cache).satisfied_at_one())
        throw std::invalid_argument("swap_mmax: input allocation is not PROPX");
    const int n = inst.n();
    const int m = inst.m();
    const std::uint64_t full = m == 0 ? 0 : (~std::uint64_t(0) >> (64 - m));
    SurdThreshold lambda = lambda_threshold(n);
    std::vector<std::uint64_t> masks = propx.masks();
    SwapTrace trace;
    trace.input = propx;

    for (int i = 0; i < n; ++i) {
        SwapDecision decision;
        decision.agent = i;
        std::uint64_t own = masks[static_cast<std::size_t>(i)];
        if (std::popcount(own) >= 2) {
            int f_min = detail::argmin_item(inst, i, own);
            Rational min_cost = inst.value(i, f_min);
            Rational rest = bundle_value(inst, i, full ^ own);
            if (surd_compare(min_cost, rest, lambda) == Ordering::Greater) {
                if (n == 2) {
                    int other = 1 - i;
                    masks[static_cast<std::size_t>(i)] = full ^ (std::uint64_t(1) << f_min);
                    masks[static_cast<std::size_t>(other)] = std::uint64_t(1) << f_min;
                    decision.kind = SwapDecision::Kind::TwoAgentSwap;
                    decision.f_min = f_min;
                    decision.donee_min = other;
                } else {
                    int f_max = detail::argmax_item(inst, i, own ^ (std::uint64_t(1) << f_min));
                    // Two smallest rival bundles by agent i's costs, ties by index.
                    int j = -1, k = -1;
                    Rational cj, ck;
                    for (int b = 0; b < n; ++b) {
                        if (b == i) continue;
                        Rational c = bundle_value(inst, i, masks[static_cast<std::size_t>(b)]);
                        if (j < 0 || c < cj) {
                            k = j;
                            ck = cj;
                            j = b;
                            cj = c;
                        } else if (k < 0 || c < ck) {
                            k = b;
                            ck = c;
                        }
                    }
                    masks[static_cast<std::size_t>(i)] =
                        (own | masks[static_cast<std::size_t>(j)] |
                         masks[static_cast<std::size_t>(k)]) &
                        ~(std::uint64_t(1) << f_min) & ~(std::uint64_t(1) << f_max);
                    masks[static_cast<std::size_t>(j)] = std::uint64_t(1) << f_min;
                    masks[static_cast<std::size_t>(k)] = std::uint64_t(1) << f_max;
                    decision.kind = SwapDecision::Kind::ThreeWaySwap;
                    decision.f_min = f_min;
                    decision.f_max = f_max;
                    decision.donee_min = j;
                    decision.donee_max = k;
                }
            }
        }
        trace.decisions.push_back(decision);
    }
    trace.output = Allocation::from_masks(masks, m);
    return {trace.output, trace};
}

// ---- Improved two-agent algorithm ----

enum class FitRule {
    FitsAfterAdd,   // allocate f to agent i only if c_i(X_i) + c_i(f) <= w_i
    LiteralPreAdd,  // pseudocode-literal: test c_i(X_i) <= w_i before adding
};

struct TwoAgentTrace {
    std::vector<int> prefix_to_agent;  // greedy assignments before the break
    int break_item = -1;               // -1 when the loop completed
    int break_case = 0;                // 1, 2 or 3
    int cheaper_agent = -1;            // i at the break
    Rational lambda = Rational(191, 100);
    Rational mu = Rational(263, 100);
    Rational prefix_cost;              // c_i(X_i) at the break
};

/// 1.91-MMAX allocation for two agents on a normalized ordered instance:
/// greedy lower-cost assignment while shares fit, then one of three closing
/// moves decided by exact rational comparisons against mu and lambda.
inline std::pair<Allocation, TwoAgentTrace> two_agent_mmax(const OrderedLift& lift,
                                                           FitRule rule = FitRule::FitsAfterAdd) {
    const Instance& inst = lift.ordered;
    detail::require_chores(inst, "two_agent_mmax");
    if (inst.n() != 2) throw std::invalid_argument("two_agent_mmax: requires exactly 2 agents");
    if (!is_ordered(inst))
        throw std::invalid_argument("two_agent_mmax: ordered instance required");
    for (int i = 0; i < 2; ++i)
        if (inst.row_total(i) != Rational(1))
            throw std::invalid_argument(
                "two_agent_mmax: rows must be normalized to total cost 1");
    const int m = inst.m();
    const std::uint64_t full = m == 0 ? 0 : (~std::uint64_t(0) >> (64 - m));
    TwoAgentTrace trace;
    std::vector<std::uint64_t> masks(2, 0);
    std::vector<Rational> load(2);

    auto fits = [&](int agent, int item) {
        if (rule == FitRule::LiteralPreAdd)
            return load[static_cast<std::size_t>(agent)] <= inst.weight(agent);
        return load[static_cast<std::size_t>(agent)] + inst.value(agent, item) <=
               inst.weight(agent);
    };

    for (int j = 0; j < m; ++j) {
        const Rational& c0 = inst.value(0, j);
        const Rational& c1 = inst.value(1, j);
        if (c0 <= c1 && fits(0, j)) {
            masks[0] |= std::uint64_t(1) << j;
            load[0] += c0;
            trace.prefix_to_agent.push_back(0);
            continue;
        }
        if (c0 >= c1 && fits(1, j)) {
            masks[1] |= std::uint64_t(1) << j;
            load[1] += c1;
            trace.prefix_to_agent.push_back(1);
            continue;
        }
        const int i = c0 <= c1 ? 0 : 1;
        const int l = 1 - i;
        const std::uint64_t rest = full >> (j + 1) << (j + 1);  // items after j
        trace.break_item = j;
        trace.cheaper_agent = i;
        trace.prefix_cost = load[static_cast<std::size_t>(i)];
        const Rational ci_f = inst.value(i, j);
        const Rational ci_tail =
            bundle_value(inst, i, masks[static_cast<std::size_t>(l)] | rest);
        if (masks[static_cast<std::size_t>(i)] != 0 && ci_f > trace.mu * ci_tail) {
            trace.break_case = 1;
            masks[static_cast<std::size_t>(i)] = full ^ (std::uint64_t(1) << j);
            masks[static_cast<std::size_t>(l)] = std::uint64_t(1) << j;
        } else {
            Rational lhs = inst.weight(i) *
                           bundle_value(inst, l, full ^ masks[static_cast<std::size_t>(i)]);
            Rational rhs = trace.lambda * inst.weight(l) *
                           bundle_value(inst, l, masks[static_cast<std::size_t>(i)]);
            if (lhs <= rhs) {
                trace.break_case = 2;
                masks[static_cast<std::size_t>(l)] = full ^ masks[static_cast<std::size_t>(i)];
            } else {
                trace.break_case = 3;
                masks[static_cast<std::size_t>(i)] |= std::uint64_t(1) << j;
                masks[static_cast<std::size_t>(l)] |= rest;
            }
        }
        break;
    }
    Allocation alloc = Allocation::from_masks(masks, m);
    return {std::move(alloc), std::move(trace)};
}

}  // namespace fairdiv
