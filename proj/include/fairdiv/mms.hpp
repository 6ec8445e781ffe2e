#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

/// Thrown when an exhaustive computation would exceed its configured limit.
/// There is deliberately no approximate fallback.
struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MmsLimits {
    int max_items = 14;
    int max_recipients = 5;
};

/// Weighted maximin-share query: owner_weight * optimum over all labeled
/// assignments of `items` to the recipient slots, where the objective is
/// min-max of c(Z_j)/w_j for chores and max-min of v(B_j)/w_j for goods.
struct MmsQuery {
    std::vector<Rational> row;         // valuation row the share is computed with
    std::uint64_t items = 0;           // subset S as a bitmask over the row
    std::vector<Rational> recipients;  // weights of the k recipients
    Rational owner_weight = Rational(1);
    Flavor flavor = Flavor::Chores;
};

namespace detail {

struct MmsEnumState {
    std::vector<Rational> item_values;          // values of the queried items, sorted desc
    std::vector<int> item_ids;                  // original item index per position
    std::vector<Rational> weights;              // recipient weights
    std::vector<std::vector<Rational>> contrib; // contrib[j][idx] = value[idx]/w[j]
    std::vector<std::vector<Rational>> tail;    // tail[j][idx] = (sum of values from idx)/w[j]
    bool goods = false;
    bool canonical = false;                     // equal weights: restricted-growth pruning
    std::vector<Rational> ratio;                // per-slot accumulated value/weight
    std::optional<Rational> best;
    std::vector<int> assign, best_assign;
    bool want_assign = false;
};

inline void mms_enum(MmsEnumState& st, std::size_t idx, int max_used) {
    const std::size_t k = st.weights.size();
    if (idx == st.item_values.size()) {
        Rational obj = st.ratio[0];
        for (std::size_t j = 1; j < k; ++j)
            if (st.goods ? st.ratio[j] < obj : st.ratio[j] > obj) obj = st.ratio[j];
        bool better = !st.best || (st.goods ? obj > *st.best : obj < *st.best);
        if (better) {
            st.best = obj;
            if (st.want_assign) st.best_assign = st.assign;
        }
        return;
    }
    if (st.best) {
        if (st.goods) {
            // Upper bound: every slot can receive at most all remaining items.
            Rational ub = st.ratio[0] + st.tail[0][idx];
            for (std::size_t j = 1; j < k; ++j) {
                Rational r = st.ratio[j] + st.tail[j][idx];
                if (r < ub) ub = r;
            }
            if (ub <= *st.best) return;
        }
    }
    std::size_t slots = st.canonical ? std::min(k, static_cast<std::size_t>(max_used) + 2) : k;
    for (std::size_t j = 0; j < slots; ++j) {
        Rational next = st.ratio[j] + st.contrib[j][idx];
        if (!st.goods && st.best && next >= *st.best) continue;  // max can only grow
        Rational saved = st.ratio[j];
        st.ratio[j] = std::move(next);
        if (st.want_assign) st.assign[idx] = static_cast<int>(j);
        mms_enum(st, idx + 1,
                 st.canonical ? std::max(max_used, static_cast<int>(j)) : max_used);
        st.ratio[j] = std::move(saved);
    }
}

/// Optimum of the inner min-max / max-min (without the owner multiplier).
/// When `slot_masks` is non-null, it receives a witness partition (bitmask per
/// recipient), the first optimal one in deterministic enumeration order.
inline Rational mms_inner(std::span<const Rational> row, std::uint64_t items,
                          std::span<const Rational> recipients, Flavor flavor,
                          std::vector<std::uint64_t>* slot_masks = nullptr) {
    MmsEnumState st;
    st.goods = flavor == Flavor::Goods;
    st.weights.assign(recipients.begin(), recipients.end());
    for (std::size_t i = 0; i < row.size(); ++i)
        if (items >> i & 1) {
            st.item_values.push_back(row[i]);
            st.item_ids.push_back(static_cast<int>(i));
        }
    // Big items first: tightens both pruning bounds early.
    std::vector<std::size_t> order(st.item_values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return st.item_values[a] > st.item_values[b];
    });
    {
        std::vector<Rational> vals;
        std::vector<int> ids;
        for (std::size_t i : order) {
            vals.push_back(st.item_values[i]);
            ids.push_back(st.item_ids[i]);
        }
        st.item_values = std::move(vals);
        st.item_ids = std::move(ids);
    }
    st.canonical = true;
    for (const Rational& w : st.weights)
        if (w != st.weights[0]) st.canonical = false;
    const std::size_t k = st.weights.size();
    const std::size_t cnt = st.item_values.size();
    st.contrib.assign(k, {});
    st.tail.assign(k, {});
    std::vector<Rational> suffix(cnt + 1);
    for (std::size_t i = cnt; i-- > 0;) suffix[i] = suffix[i + 1] + st.item_values[i];
    for (std::size_t j = 0; j < k; ++j) {
        st.contrib[j].resize(cnt);
        st.tail[j].resize(cnt + 1);
        for (std::size_t i = 0; i < cnt; ++i) st.contrib[j][i] = st.item_values[i] / st.weights[j];
        for (std::size_t i = 0; i <= cnt; ++i) st.tail[j][i] = suffix[i] / st.weights[j];
    }
    st.ratio.assign(k, Rational(0));
    st.want_assign = slot_masks != nullptr;
    st.assign.assign(cnt, 0);
    mms_enum(st, 0, -1);
    if (slot_masks) {
        slot_masks->assign(k, 0);
        for (std::size_t i = 0; i < cnt; ++i)
            (*slot_masks)[static_cast<std::size_t>(st.best_assign[i])] |=
                std::uint64_t(1) << st.item_ids[i];
    }
    return *st.best;
}

/// Labeled enumeration without symmetry breaking; reference path for the
/// labeled-vs-canonical equivalence tests.
inline Rational mms_inner_labeled(std::span<const Rational> row, std::uint64_t items,
                                  std::span<const Rational> recipients, Flavor flavor) {
    const std::size_t k = recipients.size();
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < row.size(); ++i)
        if (items >> i & 1) vals.push_back(row[i]);
    std::vector<std::size_t> digit(vals.size(), 0);
    std::optional<Rational> best;
    bool goods = flavor == Flavor::Goods;
    while (true) {
        std::vector<Rational> sums(k);
        for (std::size_t i = 0; i < vals.size(); ++i) sums[digit[i]] += vals[i];
        Rational obj = sums[0] / recipients[0];
        for (std::size_t j = 1; j < k; ++j) {
            Rational r = sums[j] / recipients[j];
            if (goods ? r < obj : r > obj) obj = r;
        }
        if (!best || (goods ? obj > *best : obj < *best)) best = obj;
        std::size_t pos = 0;
        while (pos < digit.size() && digit[pos] + 1 == k) digit[pos++] = 0;
        if (pos == digit.size()) break;
        ++digit[pos];
    }
    return best ? *best : Rational(0);
}

}  // namespace detail

/// Memo of inner MMS optima keyed on the valuation row's content (not the
/// agent index), the item bitmask, the recipient weight multiset and flavor.
/// Behaves as a pure function; safe for concurrent use.
class MmsCache {
public:
    int intern_row(const std::vector<Rational>& row) {
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = row_ids_.try_emplace(row, static_cast<int>(row_ids_.size()));
        return it->second;
    }

    std::optional<Rational> find(int row_id, std::uint64_t mask,
                                 const std::vector<Rational>& recipients, Flavor flavor) const {
        Key key = make_key(row_id, mask, recipients, flavor);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it == memo_.end()) return std::nullopt;
        return it->second;
    }

    Rational store(int row_id, std::uint64_t mask, const std::vector<Rational>& recipients,
                   Flavor flavor, Rational value) {
        Key key = make_key(row_id, mask, recipients, flavor);
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = memo_.try_emplace(std::move(key), std::move(value));
        return it->second;  // first insertion wins; duplicates computed the same value
    }

    void clear() {
        std::lock_guard<std::mutex> lock(mu_);
        memo_.clear();
        row_ids_.clear();
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.size();
    }

private:
    struct Key {
        int row_id;
        std::uint64_t mask;
        std::string recipients;
        Flavor flavor;
        bool operator<(const Key& o) const {
            if (row_id != o.row_id) return row_id < o.row_id;
            if (mask != o.mask) return mask < o.mask;
            if (flavor != o.flavor) return flavor < o.flavor;
            return recipients < o.recipients;
        }
    };

    static Key make_key(int row_id, std::uint64_t mask, const std::vector<Rational>& recipients,
                        Flavor flavor) {
        std::vector<Rational> sorted = recipients;
        std::sort(sorted.begin(), sorted.end());
        std::string rk;
        for (const Rational& w : sorted) {
            rk += w.str();
            rk += ',';
        }
        return Key{row_id, mask, std::move(rk), flavor};
    }

    mutable std::mutex mu_;
    std::map<std::vector<Rational>, int> row_ids_;
    std::map<Key, Rational> memo_;
};

/// Exact weighted maximin share by exhaustive search over labeled partitions
/// (empty bundles allowed). Errors out above the configured limits.
inline Rational mms(const MmsQuery& q, MmsCache* cache = nullptr, const MmsLimits& limits = {}) {
    int item_count = std::popcount(q.items);
    if (item_count > limits.max_items)
        throw SizeLimitError("mms: " + std::to_string(item_count) + " items exceed limit " +
                             std::to_string(limits.max_items));
    if (q.recipients.empty()) throw std::invalid_argument("mms: need at least one recipient");
    if (static_cast<int>(q.recipients.size()) > limits.max_recipients)
        throw SizeLimitError("mms: " + std::to_string(q.recipients.size()) +
                             " recipients exceed limit " + std::to_string(limits.max_recipients));
    for (const Rational& w : q.recipients)
        if (!w.is_positive()) throw std::invalid_argument("mms: recipient weights must be positive");
    if (q.items == 0) return Rational(0);
    if (cache) {
        int row_id = cache->intern_row(q.row);
        if (auto hit = cache->find(row_id, q.items, q.recipients, q.flavor))
            return q.owner_weight * *hit;
        Rational inner = detail::mms_inner(q.row, q.items, q.recipients, q.flavor);
        return q.owner_weight * cache->store(row_id, q.items, q.recipients, q.flavor, inner);
    }
    return q.owner_weight * detail::mms_inner(q.row, q.items, q.recipients, q.flavor);
}

/// As mms(), but also returns the witness partition (bitmask per recipient).
inline std::pair<Rational, std::vector<std::uint64_t>> mms_with_partition(
    const MmsQuery& q, const MmsLimits& limits = {}) {
    if (q.items == 0) return {Rational(0), std::vector<std::uint64_t>(q.recipients.size(), 0)};
    int item_count = std::popcount(q.items);
    if (item_count > limits.max_items) throw SizeLimitError("mms: items exceed limit");
    std::vector<std::uint64_t> masks;
    Rational inner = detail::mms_inner(q.row, q.items, q.recipients, q.flavor, &masks);
    return {q.owner_weight * inner, std::move(masks)};
}

/// MMS_i(S, recipients) built from an instance: the recipients are the other
/// agents' actual weights, the owner multiplier is w_i.
inline MmsQuery mms_query_for_agent(const Instance& inst, int agent, std::uint64_t items,
                                    const std::vector<int>& recipient_agents) {
    MmsQuery q;
    q.row = inst.row(agent);
    q.items = items;
    for (int j : recipient_agents) q.recipients.push_back(inst.weight(j));
    q.owner_weight = inst.weight(agent);
    q.flavor = inst.flavor();
    return q;
}

}  // namespace fairdiv
