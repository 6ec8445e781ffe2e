#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/mms.hpp"
#include "fairdiv/surd.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairdiv {

/// Binding comparison behind the worst agent's factor: measured value against
/// the benchmark it is compared to (MMS share, proportional share, or a rival
/// bundle). Indices are -1 where not applicable.
struct Witness {
    int agent = -1;
    int removed_item = -1;
    int rival_agent = -1;
    Rational measured;
    Rational benchmark;
};

struct FactorResult {
    FairnessNotion notion = FairnessNotion::EF;
    Flavor flavor = Flavor::Chores;
    std::vector<FactorBound> per_agent;
    FactorBound overall = FactorBound::exact(Rational(1));
    Witness witness;

    /// Exact satisfaction test: overall <= alpha for chores, >= alpha for goods.
    bool satisfied(const FactorBound& alpha) const {
        Ordering o = fairdiv::compare(overall, alpha);
        return flavor == Flavor::Chores ? o != Ordering::Greater : o != Ordering::Less;
    }
    bool satisfied_at_one() const { return satisfied(FactorBound::exact(Rational(1))); }
};

namespace detail {

/// Minimal alpha in [1, inf) with measured <= alpha * benchmark.
/// Policy: 0/0 and 0/positive give 1; positive/0 gives infinity.
inline FactorBound chores_factor(const Rational& measured, const Rational& benchmark) {
    if (measured.is_zero()) return FactorBound::exact(Rational(1));
    if (benchmark.is_zero()) return FactorBound::infinite();
    Rational r = measured / benchmark;
    return FactorBound::exact(r < Rational(1) ? Rational(1) : r);
}

/// Maximal alpha in [0, 1] with measured >= alpha * benchmark; positive/0 is
/// infinitely satisfied.
inline FactorBound goods_factor(const Rational& measured, const Rational& benchmark) {
    if (benchmark.is_zero())
        return measured.is_zero() ? FactorBound::exact(Rational(1)) : FactorBound::infinite();
    Rational r = measured / benchmark;
    return FactorBound::exact(r > Rational(1) ? Rational(1) : r);
}

inline int extreme_item(const Instance& inst, int agent, std::uint64_t mask, bool want_max) {
    int best = -1;
    for (int item = 0; item < inst.m(); ++item) {
        if (!(mask >> item & 1)) continue;
        if (best < 0) {
            best = item;
            continue;
        }
        const Rational& v = inst.value(agent, item);
        const Rational& b = inst.value(agent, best);
        if (want_max ? v > b : v < b) best = item;
    }
    return best;
}

}  // namespace detail

/// Exact per-agent approximation factor of `alloc` under `notion`.
/// Chores factors live in [1, inf], goods factors in [0, 1] (or infinitely
/// satisfied against a zero benchmark); overall is the worst agent's bound.
inline FactorResult factor(const Instance& inst, const Allocation& alloc, FairnessNotion notion,
                           MmsCache* cache = nullptr, const MmsLimits& limits = {}) {
    alloc.validate(inst.m());
    if (static_cast<int>(alloc.bundles.size()) != inst.n())
        throw std::invalid_argument("allocation: bundle count differs from agent count");
    const bool chores = inst.flavor() == Flavor::Chores;
    const int n = inst.n();
    const int m = inst.m();
    const std::uint64_t full = m == 0 ? 0 : (~std::uint64_t(0) >> (64 - m));
    std::vector<std::uint64_t> masks = alloc.masks();

    FactorResult result;
    result.notion = notion;
    result.flavor = inst.flavor();

    MmsCache local_cache;
    if (!cache) cache = &local_cache;

    auto ratio = [&](const Rational& measured, const Rational& benchmark) {
        return chores ? detail::chores_factor(measured, benchmark)
                      : detail::goods_factor(measured, benchmark);
    };

    for (int i = 0; i < n; ++i) {
        const std::uint64_t own = masks[static_cast<std::size_t>(i)];
        const std::uint64_t others = full ^ own;
        const Rational own_value = bundle_value(inst, i, own);
        FactorBound agent_bound = FactorBound::exact(Rational(1));
        Witness agent_witness;
        agent_witness.agent = i;

        auto set_simple = [&](const Rational& measured, const Rational& benchmark,
                              int removed_item) {
            agent_bound = ratio(measured, benchmark);
            agent_witness.measured = measured;
            agent_witness.benchmark = benchmark;
            agent_witness.removed_item = removed_item;
        };

        switch (notion) {
            case FairnessNotion::EF:
            case FairnessNotion::EF1:
            case FairnessNotion::EFX: {
                int removed = -1;
                Rational measured = own_value;
                if (notion != FairnessNotion::EF) {
                    if (chores) {
                        // Removal from the agent's own bundle; vacuous when empty.
                        if (own == 0) break;
                        removed = detail::extreme_item(inst, i, own,
                                                       notion == FairnessNotion::EF1);
                        measured = own_value - inst.value(i, removed);
                    }
                }
                std::optional<FactorBound> worst;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    Rational rival = bundle_value(inst, i, masks[static_cast<std::size_t>(j)]);
                    int removed_j = removed;
                    Rational measured_j = measured;
                    Rational rival_j = rival;
                    if (!chores && notion != FairnessNotion::EF) {
                        // Goods: the removal weakens the rival bundle.
                        std::uint64_t jm = masks[static_cast<std::size_t>(j)];
                        if (jm != 0) {
                            removed_j = detail::extreme_item(inst, i, jm,
                                                             notion == FairnessNotion::EF1);
                            rival_j = rival - inst.value(i, removed_j);
                        }
                    }
                    FactorBound fb = ratio(measured_j * inst.weight(j), rival_j * inst.weight(i));
                    bool worse = !worst || (chores
                                                ? fairdiv::compare(fb, *worst) == Ordering::Greater
                                                : fairdiv::compare(fb, *worst) == Ordering::Less);
                    if (worse) {
                        worst = fb;
                        agent_witness.rival_agent = j;
                        agent_witness.removed_item = removed_j;
                        agent_witness.measured = measured_j / inst.weight(i);
                        agent_witness.benchmark = rival_j / inst.weight(j);
                    }
                }
                if (worst) agent_bound = *worst;
                break;
            }
            case FairnessNotion::PROP: {
                set_simple(own_value, inst.weight(i) * inst.row_total(i), -1);
                break;
            }
            case FairnessNotion::PROP1:
            case FairnessNotion::PROPX: {
                bool up_to_one = notion == FairnessNotion::PROP1;
                if (chores) {
                    if (own == 0) break;
                    int removed = detail::extreme_item(inst, i, own, up_to_one);
                    set_simple(own_value - inst.value(i, removed),
                               inst.weight(i) * inst.row_total(i), removed);
                } else {
                    // Goods mirror: one item vanishes from the others' pool,
                    // shrinking the proportional benchmark.
                    Rational bench = inst.weight(i) * inst.row_total(i);
                    int removed = -1;
                    if (others != 0) {
                        removed = detail::extreme_item(inst, i, others, up_to_one);
                        bench = inst.weight(i) * (inst.row_total(i) - inst.value(i, removed));
                    }
                    set_simple(own_value, bench, removed);
                }
                break;
            }
            case FairnessNotion::MMS: {
                std::vector<int> everyone;
                for (int j = 0; j < n; ++j) everyone.push_back(j);
                Rational share = mms(mms_query_for_agent(inst, i, full, everyone), cache, limits);
                set_simple(own_value, share, -1);
                break;
            }
            case FairnessNotion::MMA:
            case FairnessNotion::MMA1:
            case FairnessNotion::MMAX: {
                if (n == 1) break;  // no other agents; vacuously satisfied
                std::vector<int> rivals;
                for (int j = 0; j < n; ++j)
                    if (j != i) rivals.push_back(j);
                Rational measured = own_value;
                std::uint64_t pool = others;
                int removed = -1;
                if (notion != FairnessNotion::MMA) {
                    if (chores) {
                        if (own == 0) break;
                        removed = detail::extreme_item(inst, i, own,
                                                       notion == FairnessNotion::MMA1);
                        measured = own_value - inst.value(i, removed);
                    } else if (others != 0) {
                        // Goods: removal from the others' pool; max-value item
                        // minimizes the share (MMA1), min-value maximizes (MMAX).
                        removed = detail::extreme_item(inst, i, others,
                                                       notion == FairnessNotion::MMA1);
                        pool = others ^ (std::uint64_t(1) << removed);
                    }
                }
                Rational share = mms(mms_query_for_agent(inst, i, pool, rivals), cache, limits);
                set_simple(measured, share, removed);
                break;
            }
        }

        result.per_agent.push_back(agent_bound);
        bool worse = result.per_agent.size() == 1 ||
                     (chores ? fairdiv::compare(agent_bound, result.overall) == Ordering::Greater
                             : fairdiv::compare(agent_bound, result.overall) == Ordering::Less);
        if (worse) {
            result.overall = agent_bound;
            result.witness = agent_witness;
        }
    }
    if (result.per_agent.empty()) result.overall = FactorBound::exact(Rational(1));
    return result;
}

/// Exact threshold decision; surd thresholds are decided through surd_compare.
inline bool satisfies(const Instance& inst, const Allocation& alloc, FairnessNotion notion,
                      const FactorBound& threshold, MmsCache* cache = nullptr,
                      const MmsLimits& limits = {}) {
    return factor(inst, alloc, notion, cache, limits).satisfied(threshold);
}

namespace detail {

/// Goods MMA1/MMAX benchmark by scanning every removable item; test-only
/// reference for the single-item shortcuts above.
inline Rational goods_mma_benchmark_full_scan(const Instance& inst, int agent,
                                              std::uint64_t others, bool up_to_one,
                                              MmsCache* cache, const MmsLimits& limits = {}) {
    std::vector<int> rivals;
    for (int j = 0; j < inst.n(); ++j)
        if (j != agent) rivals.push_back(j);
    std::optional<Rational> best;
    for (int item = 0; item < inst.m(); ++item) {
        if (!(others >> item & 1)) continue;
        std::uint64_t pool = others ^ (std::uint64_t(1) << item);
        Rational share = mms(mms_query_for_agent(inst, agent, pool, rivals), cache, limits);
        if (!best || (up_to_one ? share < *best : share > *best)) best = share;
    }
    if (!best) return Rational(0);
    return *best;
}

}  // namespace detail

}  // namespace fairdiv
