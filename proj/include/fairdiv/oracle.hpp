#pragma once

#include "fairdiv/checkers.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/mms.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace fairdiv {

struct OracleOptions {
    std::uint64_t budget = 50'000'000;  // max allocation evaluations per sweep
    int jobs = 1;
    MmsLimits limits;
};

struct SearchResult {
    Allocation allocation;
    FactorBound factor = FactorBound::exact(Rational(1));
    std::uint64_t examined = 0;
};

struct NonexistenceResult {
    bool satisfiable = false;             // false == NoAllocationSatisfies
    std::optional<Allocation> witness;    // first satisfying allocation in sweep order
    std::uint64_t examined = 0;
};

namespace detail {

/// Shared per-(instance, notion) state for whole-space sweeps: dense bundle
/// value tables, extreme-item tables and lazily filled inner-MMS slots, all
/// mirroring the exact semantics of checkers::factor.
class SweepEvaluator {
public:
    SweepEvaluator(const Instance& inst, FairnessNotion notion, MmsCache& cache,
                   const MmsLimits& limits)
        : inst_(inst), notion_(notion), cache_(cache), limits_(limits) {
        n_ = inst.n();
        m_ = inst.m();
        chores_ = inst.flavor() == Flavor::Chores;
        full_ = m_ == 0 ? 0 : (~std::uint64_t(0) >> (64 - m_));
        std::uint64_t table = std::uint64_t(1) << m_;
        if (table * static_cast<std::uint64_t>(n_) > (std::uint64_t(1) << 24))
            throw SizeLimitError("oracle: instance too large for sweep tables");
        needs_mms_ = notion == FairnessNotion::MMS || notion == FairnessNotion::MMA ||
                     notion == FairnessNotion::MMA1 || notion == FairnessNotion::MMAX;
        val_.resize(static_cast<std::size_t>(n_));
        emax_.resize(static_cast<std::size_t>(n_));
        emin_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            auto& v = val_[static_cast<std::size_t>(i)];
            auto& mx = emax_[static_cast<std::size_t>(i)];
            auto& mn = emin_[static_cast<std::size_t>(i)];
            v.resize(table);
            mx.assign(table, -1);
            mn.assign(table, -1);
            for (std::uint64_t mask = 1; mask < table; ++mask) {
                int low = std::countr_zero(mask);
                std::uint64_t rest = mask ^ (std::uint64_t(1) << low);
                v[mask] = v[rest] + inst.value(i, low);
                int bx = mx[rest], bn = mn[rest];
                mx[mask] = (bx < 0 || inst.value(i, low) > inst.value(i, bx)) ? low : bx;
                mn[mask] = (bn < 0 || inst.value(i, low) < inst.value(i, bn)) ? low : bn;
                // countr_zero gives the smallest index, which wins ties
                if (bx >= 0 && inst.value(i, low) == inst.value(i, bx)) mx[mask] = low;
                if (bn >= 0 && inst.value(i, low) == inst.value(i, bn)) mn[mask] = low;
            }
            row_total_.push_back(inst.row_total(i));
            row_id_.push_back(cache.intern_row(inst.row(i)));
            std::vector<Rational> rec;
            for (int j = 0; j < n_; ++j)
                if (j != i) rec.push_back(inst.weight(j));
            recipients_.push_back(std::move(rec));
        }
        if (needs_mms_) {
            slots_.resize(static_cast<std::size_t>(n_));
            for (auto& s : slots_) s = std::make_unique<SlotTable>(table);
            if (notion == FairnessNotion::MMS) {
                std::vector<Rational> everyone = inst.weights();
                for (int i = 0; i < n_; ++i) {
                    MmsQuery q{inst.row(i), full_, everyone, inst.weight(i), inst.flavor()};
                    mms_whole_.push_back(mms(q, &cache, limits));
                }
            }
        }
    }

    /// Overall capped factor of the allocation, identical to
    /// checkers::factor(...).overall.
    FactorBound overall(const std::vector<std::uint64_t>& masks) const {
        std::optional<FactorBound> worst;
        for (int i = 0; i < n_; ++i) {
            FactorBound f = agent_factor(i, masks);
            bool worse = !worst || (chores_ ? compare(f, *worst) == Ordering::Greater
                                            : compare(f, *worst) == Ordering::Less);
            if (worse) worst = std::move(f);
        }
        return worst ? *worst : FactorBound::exact(Rational(1));
    }

    /// Fast exact test of the notion at alpha = 1 (no divisions on the
    /// share-based path).
    bool satisfied_at_one(const std::vector<std::uint64_t>& masks) const {
        const bool ef_family = notion_ == FairnessNotion::EF || notion_ == FairnessNotion::EF1 ||
                               notion_ == FairnessNotion::EFX;
        const FactorBound one = FactorBound::exact(Rational(1));
        for (int i = 0; i < n_; ++i) {
            if (ef_family) {
                Ordering o = compare(ef_family_factor(i, masks), one);
                if (chores_ ? o == Ordering::Greater : o == Ordering::Less) return false;
                continue;
            }
            auto [measured, benchmark] = agent_comparison(i, masks);
            if (!measured) continue;  // vacuous
            Ordering o = compare_rationals(*measured, *benchmark);
            if (chores_ ? o == Ordering::Greater : o == Ordering::Less) return false;
        }
        return true;
    }

    FactorBound agent_factor(int i, const std::vector<std::uint64_t>& masks) const {
        if (notion_ == FairnessNotion::EF || notion_ == FairnessNotion::EF1 ||
            notion_ == FairnessNotion::EFX)
            return ef_family_factor(i, masks);
        auto [measured, benchmark] = agent_comparison(i, masks);
        if (!measured) return FactorBound::exact(Rational(1));
        return chores_ ? chores_factor(*measured, *benchmark)
                       : goods_factor(*measured, *benchmark);
    }

private:
    struct SlotTable {
        explicit SlotTable(std::uint64_t size) : ptr(size) {}
        std::vector<std::atomic<const Rational*>> ptr;
        std::mutex arena_mu;
        std::vector<std::unique_ptr<Rational>> arena;
    };

    /// Inner MMS optimum (no owner multiplier) of `pool` split among agent i's
    /// rivals, memoized in a lock-free slot table backed by the shared cache.
    const Rational& inner_share(int i, std::uint64_t pool) const {
        SlotTable& t = *slots_[static_cast<std::size_t>(i)];
        const Rational* hit = t.ptr[pool].load(std::memory_order_acquire);
        if (hit) return *hit;
        const auto& rec = recipients_[static_cast<std::size_t>(i)];
        Rational value;
        if (pool == 0) {
            value = Rational(0);
        } else if (auto cached = cache_.find(row_id_[static_cast<std::size_t>(i)], pool, rec,
                                             inst_.flavor())) {
            value = *cached;
        } else {
            if (std::popcount(pool) > limits_.max_items)
                throw SizeLimitError("oracle: MMS subquery exceeds item limit");
            value = mms_inner(inst_.row(i), pool, rec, inst_.flavor());
            value = cache_.store(row_id_[static_cast<std::size_t>(i)], pool, rec, inst_.flavor(),
                                 std::move(value));
        }
        auto owned = std::make_unique<Rational>(std::move(value));
        const Rational* expected = nullptr;
        const Rational* raw = owned.get();
        if (t.ptr[pool].compare_exchange_strong(expected, raw, std::memory_order_release,
                                                std::memory_order_acquire)) {
            std::lock_guard<std::mutex> lock(t.arena_mu);
            t.arena.push_back(std::move(owned));
            return *raw;
        }
        return *expected;  // another worker published the same value first
    }

    /// The binding (measured, benchmark) pair for share-based notions;
    /// nullopt measured means the condition is vacuous for this agent.
    std::pair<std::optional<Rational>, std::optional<Rational>> agent_comparison(
        int i, const std::vector<std::uint64_t>& masks) const {
        const std::uint64_t own = masks[static_cast<std::size_t>(i)];
        const std::uint64_t others = full_ ^ own;
        const auto& val = val_[static_cast<std::size_t>(i)];
        switch (notion_) {
            case FairnessNotion::PROP:
                return {val[own], inst_.weight(i) * row_total_[static_cast<std::size_t>(i)]};
            case FairnessNotion::PROP1:
            case FairnessNotion::PROPX: {
                bool up_to_one = notion_ == FairnessNotion::PROP1;
                if (chores_) {
                    if (own == 0) return {std::nullopt, std::nullopt};
                    int rm = up_to_one ? emax_[static_cast<std::size_t>(i)][own]
                                       : emin_[static_cast<std::size_t>(i)][own];
                    return {val[own] - inst_.value(i, rm),
                            inst_.weight(i) * row_total_[static_cast<std::size_t>(i)]};
                }
                Rational bench = row_total_[static_cast<std::size_t>(i)];
                if (others != 0) {
                    int rm = up_to_one ? emax_[static_cast<std::size_t>(i)][others]
                                       : emin_[static_cast<std::size_t>(i)][others];
                    bench -= inst_.value(i, rm);
                }
                return {val[own], inst_.weight(i) * bench};
            }
            case FairnessNotion::MMS:
                return {val[own], mms_whole_[static_cast<std::size_t>(i)]};
            case FairnessNotion::MMA:
            case FairnessNotion::MMA1:
            case FairnessNotion::MMAX: {
                if (n_ == 1) return {std::nullopt, std::nullopt};
                Rational measured = val[own];
                std::uint64_t pool = others;
                if (notion_ != FairnessNotion::MMA) {
                    bool up_to_one = notion_ == FairnessNotion::MMA1;
                    if (chores_) {
                        if (own == 0) return {std::nullopt, std::nullopt};
                        int rm = up_to_one ? emax_[static_cast<std::size_t>(i)][own]
                                           : emin_[static_cast<std::size_t>(i)][own];
                        measured -= inst_.value(i, rm);
                    } else if (others != 0) {
                        int rm = up_to_one ? emax_[static_cast<std::size_t>(i)][others]
                                           : emin_[static_cast<std::size_t>(i)][others];
                        pool = others ^ (std::uint64_t(1) << rm);
                    }
                }
                return {measured, inst_.weight(i) * inner_share(i, pool)};
            }
            default:
                throw std::logic_error("agent_comparison: EF family handled elsewhere");
        }
    }

    FactorBound ef_family_factor(int i, const std::vector<std::uint64_t>& masks) const {
        const std::uint64_t own = masks[static_cast<std::size_t>(i)];
        const auto& val = val_[static_cast<std::size_t>(i)];
        Rational measured = val[own];
        int removed = -1;
        if (notion_ != FairnessNotion::EF && chores_) {
            if (own == 0) return FactorBound::exact(Rational(1));
            removed = notion_ == FairnessNotion::EF1 ? emax_[static_cast<std::size_t>(i)][own]
                                                     : emin_[static_cast<std::size_t>(i)][own];
            measured -= inst_.value(i, removed);
        }
        std::optional<FactorBound> worst;
        for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            std::uint64_t jm = masks[static_cast<std::size_t>(j)];
            Rational rival = val[jm];
            if (notion_ != FairnessNotion::EF && !chores_ && jm != 0) {
                int rm = notion_ == FairnessNotion::EF1 ? emax_[static_cast<std::size_t>(i)][jm]
                                                        : emin_[static_cast<std::size_t>(i)][jm];
                rival -= inst_.value(i, rm);
            }
            FactorBound f = chores_ ? chores_factor(measured * inst_.weight(j),
                                                    rival * inst_.weight(i))
                                    : goods_factor(measured * inst_.weight(j),
                                                   rival * inst_.weight(i));
            bool worse = !worst || (chores_ ? compare(f, *worst) == Ordering::Greater
                                            : compare(f, *worst) == Ordering::Less);
            if (worse) worst = std::move(f);
        }
        return worst ? *worst : FactorBound::exact(Rational(1));
    }

    const Instance& inst_;
    FairnessNotion notion_;
    MmsCache& cache_;
    MmsLimits limits_;
    int n_ = 0, m_ = 0;
    bool chores_ = true, needs_mms_ = false;
    std::uint64_t full_ = 0;
    std::vector<std::vector<Rational>> val_;
    std::vector<std::vector<int>> emax_, emin_;
    std::vector<Rational> row_total_, mms_whole_;
    std::vector<std::vector<Rational>> recipients_;
    std::vector<int> row_id_;
    mutable std::vector<std::unique_ptr<SlotTable>> slots_;
};

/// Mixed-radix walk over all n^m item->agent assignments of [begin, end),
/// lexicographic in the digit string (item 0 most significant).
template <typename Visit>
void sweep_range(int n, int m, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
    std::vector<int> digit(static_cast<std::size_t>(m), 0);
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
    std::uint64_t idx = begin;
    for (int item = m - 1; item >= 0; --item) {
        digit[static_cast<std::size_t>(item)] = static_cast<int>(idx % n);
        idx /= n;
    }
    for (int item = 0; item < m; ++item)
        masks[static_cast<std::size_t>(digit[static_cast<std::size_t>(item)])] |=
            std::uint64_t(1) << item;
    for (std::uint64_t index = begin; index < end; ++index) {
        if (!visit(index, masks)) return;
        // increment with item m-1 as the fastest digit
        for (int item = m - 1; item >= 0; --item) {
            auto& d = digit[static_cast<std::size_t>(item)];
            masks[static_cast<std::size_t>(d)] &= ~(std::uint64_t(1) << item);
            d = (d + 1) % n;
            masks[static_cast<std::size_t>(d)] |= std::uint64_t(1) << item;
            if (d != 0) break;
        }
    }
}

inline std::uint64_t allocation_space(const Instance& inst, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (int j = 0; j < inst.m(); ++j) {
        if (total > budget / static_cast<std::uint64_t>(inst.n()) + 1)
            throw SizeLimitError("oracle: n^m exceeds the enumeration budget (" +
                                 std::to_string(budget) + "); raise FAIRDIV_BUDGET to override");
        total *= static_cast<std::uint64_t>(inst.n());
    }
    if (total > budget)
        throw SizeLimitError("oracle: n^m exceeds the enumeration budget (" +
                             std::to_string(budget) + "); raise FAIRDIV_BUDGET to override");
    return total;
}

}  // namespace detail

/// Enumerates every allocation and returns one optimizing the checker's factor
/// (minimal for chores, maximal for goods), first-in-sweep-order among ties.
inline SearchResult best_factor_search(const Instance& inst, FairnessNotion notion,
                                       MmsCache* cache = nullptr, OracleOptions options = {}) {
    MmsCache local;
    if (!cache) cache = &local;
    std::uint64_t total = detail::allocation_space(inst, options.budget);
    detail::SweepEvaluator eval(inst, notion, *cache, options.limits);
    const bool chores = inst.flavor() == Flavor::Chores;

    struct Best {
        FactorBound factor = FactorBound::exact(Rational(1));
        std::uint64_t index = 0;
        std::vector<std::uint64_t> masks;
    };
    int jobs = std::max(1, options.jobs);
    std::vector<std::optional<Best>> bests(static_cast<std::size_t>(jobs));
    auto run_chunk = [&](int worker, std::uint64_t begin, std::uint64_t end) {
        auto& best = bests[static_cast<std::size_t>(worker)];
        detail::sweep_range(inst.n(), inst.m(), begin, end,
                            [&](std::uint64_t index, const std::vector<std::uint64_t>& masks) {
                                FactorBound f = eval.overall(masks);
                                bool better =
                                    !best || (chores ? compare(f, best->factor) == Ordering::Less
                                                     : compare(f, best->factor) == Ordering::Greater);
                                if (better) best = Best{std::move(f), index, masks};
                                return true;
                            });
    };
    if (jobs == 1 || total < 1024) {
        run_chunk(0, 0, total);
    } else {
        std::vector<std::thread> workers;
        std::uint64_t chunk = (total + static_cast<std::uint64_t>(jobs) - 1) /
                              static_cast<std::uint64_t>(jobs);
        for (int w = 0; w < jobs; ++w) {
            std::uint64_t b = chunk * static_cast<std::uint64_t>(w);
            std::uint64_t e = std::min(total, b + chunk);
            if (b >= e) break;
            workers.emplace_back(run_chunk, w, b, e);
        }
        for (auto& t : workers) t.join();
    }
    std::optional<Best> final_best;
    for (auto& b : bests) {
        if (!b) continue;
        bool better = !final_best ||
                      (chores ? compare(b->factor, final_best->factor) == Ordering::Less
                              : compare(b->factor, final_best->factor) == Ordering::Greater) ||
                      (compare(b->factor, final_best->factor) == Ordering::Equal &&
                       b->index < final_best->index);
        if (better) final_best = std::move(b);
    }
    SearchResult result;
    result.examined = total;
    result.allocation = Allocation::from_masks(final_best->masks, inst.m());
    result.factor = final_best->factor;
    return result;
}

/// Full sweep deciding whether any allocation satisfies `notion` at factor 1
/// (chores: <= 1; goods: >= 1). Returns the first witness in sweep order, or
/// NoAllocationSatisfies. The MMS memo is always engaged.
inline NonexistenceResult verify_nonexistence(const Instance& inst, FairnessNotion notion,
                                              MmsCache* cache = nullptr,
                                              OracleOptions options = {}) {
    MmsCache local;
    if (!cache) cache = &local;
    std::uint64_t total = detail::allocation_space(inst, options.budget);
    detail::SweepEvaluator eval(inst, notion, *cache, options.limits);

    std::atomic<std::uint64_t> first_witness{total};
    std::mutex witness_mu;
    auto run_chunk = [&](int /*worker*/, std::uint64_t begin, std::uint64_t end) {
        detail::sweep_range(inst.n(), inst.m(), begin, end,
                            [&](std::uint64_t index, const std::vector<std::uint64_t>& masks) {
                                if (index >= first_witness.load(std::memory_order_relaxed))
                                    return false;
                                if (eval.satisfied_at_one(masks)) {
                                    std::lock_guard<std::mutex> lock(witness_mu);
                                    std::uint64_t cur = first_witness.load();
                                    if (index < cur) first_witness.store(index);
                                    return false;
                                }
                                return true;
                            });
    };
    int jobs = std::max(1, options.jobs);
    if (jobs == 1 || total < 1024) {
        run_chunk(0, 0, total);
    } else {
        std::vector<std::thread> workers;
        std::uint64_t chunk = (total + static_cast<std::uint64_t>(jobs) - 1) /
                              static_cast<std::uint64_t>(jobs);
        for (int w = 0; w < jobs; ++w) {
            std::uint64_t b = chunk * static_cast<std::uint64_t>(w);
            std::uint64_t e = std::min(total, b + chunk);
            if (b >= e) break;
            workers.emplace_back(run_chunk, w, b, e);
        }
        for (auto& t : workers) t.join();
    }
    NonexistenceResult result;
    result.examined = total;
    std::uint64_t idx = first_witness.load();
    if (idx < total) {
        result.satisfiable = true;
        // Recover the witness masks from the recorded index (workers may have
        // recorded several; the atomic holds the smallest).
        std::vector<int> digit(static_cast<std::size_t>(inst.m()), 0);
        std::uint64_t v = idx;
        for (int item = inst.m() - 1; item >= 0; --item) {
            digit[static_cast<std::size_t>(item)] = static_cast<int>(v % inst.n());
            v /= static_cast<std::uint64_t>(inst.n());
        }
        std::vector<std::uint64_t> masks(static_cast<std::size_t>(inst.n()), 0);
        for (int item = 0; item < inst.m(); ++item)
            masks[static_cast<std::size_t>(digit[static_cast<std::size_t>(item)])] |=
                std::uint64_t(1) << item;
        result.witness = Allocation::from_masks(masks, inst.m());
    }
    return result;
}

}  // namespace fairdiv
