#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/surd.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

/// Checkable claim attached to a fixture; the test suite re-derives each one
/// through the checkers/oracle rather than trusting it.
struct ExpectedOutcome {
    FairnessNotion notion;
    std::optional<bool> satisfied_at_one;
    std::optional<Rational> overall_factor;
};

struct Fixture {
    std::string name;
    Instance instance;
    std::optional<Allocation> pinned;
    Rational eps;
    std::vector<ExpectedOutcome> expected;
};

/// Weighted goods family admitting no MMA1 or MMAX allocation: n agents (the
/// first n-1 tiny with weight eps, the last with weight 1-(n-1)eps) and 3n-1
/// goods. Requires 1-(n-1)eps >= 2*phi*n*eps, checked exactly.
inline Instance goods_nonexistence_instance(int n, const Rational& eps) {
    if (n < 4) throw std::invalid_argument("goods_nonexistence_instance: requires n >= 4");
    if (!eps.is_positive() || eps >= Rational(1))
        throw std::invalid_argument("goods_nonexistence_instance: eps must be in (0,1)");
    Rational big = Rational(1) - Rational(n - 1) * eps;
    if (!big.is_positive())
        throw std::invalid_argument("goods_nonexistence_instance: weights must stay positive");
    // 1-(n-1)eps >= 2*phi*n*eps  <=>  big/(2n*eps) >= phi
    if (surd_compare(big, Rational(2 * n) * eps, SurdThreshold::golden_ratio()) ==
        Ordering::Less)
        throw std::invalid_argument(
            "goods_nonexistence_instance: eps too large, needs 1-(n-1)eps >= 2*phi*n*eps");
    const int m = 3 * n - 1;
    std::vector<Rational> small_row(static_cast<std::size_t>(m), Rational(0));
    for (int j = 0; j < 2 * n - 2; ++j) small_row[static_cast<std::size_t>(j)] = eps / Rational(2);
    small_row[static_cast<std::size_t>(2 * n - 2)] = big / Rational(2);
    small_row[static_cast<std::size_t>(2 * n - 1)] = big / Rational(2);
    std::vector<Rational> last_row(static_cast<std::size_t>(m), eps);
    for (int j = 0; j < 2 * n; ++j) last_row[static_cast<std::size_t>(j)] = big / Rational(2 * n);
    std::vector<Rational> weights(static_cast<std::size_t>(n - 1), eps);
    weights.push_back(big);
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(n - 1), small_row);
    rows.push_back(std::move(last_row));
    return Instance(Flavor::Goods, std::move(weights), std::move(rows));
}

namespace detail {

inline void require_eps_range(const Rational& eps, const Rational& hi, const std::string& name) {
    if (!eps.is_positive() || eps >= hi)
        throw std::invalid_argument("named_fixture(" + name + "): eps must be in (0, " +
                                    hi.str() + ")");
}

inline std::vector<std::vector<Rational>> identical_rows(int n, std::vector<Rational> row) {
    return std::vector<std::vector<Rational>>(static_cast<std::size_t>(n), std::move(row));
}

}  // namespace detail

/// Catalog of named worked-example and counterexample instances, with their
/// pinned allocations and claimed checker outcomes (exact, eps-parameterized
/// where applicable).
inline Fixture named_fixture(const std::string& name,
                             std::optional<Rational> eps_opt = std::nullopt) {
    using N = FairnessNotion;
    const Rational half(1, 2), third(1, 3), quarter(1, 4);
    auto sat = [](N n, bool ok) { return ExpectedOutcome{n, ok, std::nullopt}; };
    auto fac = [](N n, Rational f) {
        return ExpectedOutcome{n, f <= Rational(1), std::move(f)};
    };

    if (name == "table1") {
        std::vector<Rational> row = {Rational(19, 72), Rational(17, 72), Rational(2, 9),
                                     Rational(11, 72), Rational(1, 8)};
        Instance inst(Flavor::Chores, {half, third, Rational(1, 6)},
                      detail::identical_rows(3, row));
        return Fixture{"table1", std::move(inst), Allocation{{{2}, {0, 1}, {3, 4}}}, Rational(0),
                       {sat(N::MMA, false), sat(N::MMA1, true), sat(N::MMAX, false),
                        fac(N::MMAX, Rational(19, 18))}};
    }
    if (name == "propx-not-mma" || name == "mms-not-mma-weighted" || name == "swap-motivation") {
        Rational eps = eps_opt.value_or(Rational(1, 10));
        detail::require_eps_range(eps, Rational(1, 6), name);
        std::vector<Rational> row = {half - eps, half - eps, eps, eps};
        Rational bad = (half - eps) / (Rational(2) * eps);
        if (name == "propx-not-mma") {
            Instance inst(Flavor::Chores, {half, half}, detail::identical_rows(2, row));
            return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2, 3}}}, eps,
                           {sat(N::PROPX, true), fac(N::MMA1, bad), fac(N::MMAX, bad)}};
        }
        Instance inst(Flavor::Chores, {half, quarter, quarter}, detail::identical_rows(3, row));
        std::vector<ExpectedOutcome> expected;
        if (name == "mms-not-mma-weighted")
            expected = {sat(N::MMS, true), fac(N::MMA1, bad), fac(N::MMAX, bad)};
        else
            expected = {sat(N::PROPX, true)};
        return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2}, {3}}}, eps,
                       std::move(expected)};
    }
    if (name == "mmax-not-prop1") {
        std::vector<Rational> row = {third, third, third, Rational(0), Rational(0)};
        Instance inst(Flavor::Chores, std::vector<Rational>(4, quarter),
                      detail::identical_rows(4, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2}, {3}, {4}}}, Rational(0),
                       {fac(N::MMAX, Rational(1)), fac(N::PROP1, Rational(4, 3)),
                        sat(N::PROPX, false)}};
    }
    if (name == "approx-mms-not-mma1") {
        Rational eps = eps_opt.value_or(Rational(1, 10));
        detail::require_eps_range(eps, Rational(1), name);
        Rational den = Rational(3) + eps;
        std::vector<Rational> row = {Rational(2) / den, Rational(1) / den, eps / den};
        Instance inst(Flavor::Chores, {half, half}, detail::identical_rows(2, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2}}}, eps,
                       {fac(N::MMS, Rational(3, 2)), fac(N::MMA1, Rational(1) / eps)}};
    }
    if (name == "mms-not-mmax") {
        Rational eps = eps_opt.value_or(Rational(1, 10));
        detail::require_eps_range(eps, Rational(1), name);
        Rational den = Rational(1) + eps;
        std::vector<Rational> row = {Rational(1) / den, eps / den, Rational(0)};
        Instance inst(Flavor::Chores, {half, half}, detail::identical_rows(2, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 2}, {1}}}, eps,
                       {fac(N::MMS, Rational(1)), sat(N::MMA1, true),
                        fac(N::MMAX, Rational(1) / eps)}};
    }
    if (name == "mma-not-mms") {
        std::vector<Rational> row;
        for (int v : {6, 15, 22, 26, 10, 7, 12, 19, 12}) row.push_back(Rational(v, 129));
        Instance inst(Flavor::Chores, std::vector<Rational>(3, third),
                      detail::identical_rows(3, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}},
                       Rational(0),
                       {fac(N::MMA, Rational(1)), fac(N::MMS, Rational(44, 43))}};
    }
    if (name == "mmax-preferred") {
        Rational eps = eps_opt.value_or(Rational(1, 100));
        detail::require_eps_range(eps, Rational(1, 4), name);
        Rational den = Rational(4) + Rational(9) * eps;
        Rational tiny = Rational(3) * eps / den;
        std::vector<Rational> row = {Rational(3) / den, Rational(1) / den, tiny, tiny, tiny};
        Instance inst(Flavor::Chores, {half, quarter, quarter}, detail::identical_rows(3, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2, 3}, {4}}}, eps,
                       {fac(N::MMS, Rational(4, 3)),
                        fac(N::MMAX, Rational(1) / (Rational(4) * eps))}};
    }
    if (name == "two-agent-motivation") {
        // Rational stand-in for the irrational-weight instance: weights about
        // (3-sqrt5)/2 and (sqrt5-1)/2, costs tied to w_1 so PROPX is tight.
        std::vector<Rational> row = {Rational(38, 100), Rational(38, 100), Rational(24, 100),
                                     Rational(0)};
        Instance inst(Flavor::Chores, {Rational(38, 100), Rational(62, 100)},
                      detail::identical_rows(2, row));
        return Fixture{name, std::move(inst), Allocation{{{0, 1}, {2, 3}}}, Rational(0),
                       {sat(N::PROPX, true)}};
    }
    if (name == "goods-nonexistence") {
        Rational eps = eps_opt.value_or(Rational(1, 100));
        return Fixture{name, goods_nonexistence_instance(4, eps), std::nullopt, eps, {}};
    }
    throw std::invalid_argument("named_fixture: unknown fixture \"" + name + "\"");
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "table1",           "propx-not-mma",       "mmax-not-prop1",
        "mms-not-mma-weighted", "approx-mms-not-mma1", "mms-not-mmax",
        "mma-not-mms",      "mmax-preferred",      "swap-motivation",
        "two-agent-motivation", "goods-nonexistence"};
    return names;
}

// ---- Seeded random instance generation ----

enum class WeightMode { Equal, RandomRational };
enum class CostMode { UniformRational, IdenticalAgents, Ordered };

/// Deterministic for a fixed seed: rows are normalized to sum 1 (nonzero draws
/// enforced) and weights are exact rationals summing to 1.
inline Instance gen_random(int n, int m, WeightMode weight_mode, CostMode cost_mode,
                           std::uint64_t seed, Flavor flavor = Flavor::Chores) {
    if (n < 1) throw std::invalid_argument("gen_random: n >= 1 required");
    if (m < 0) throw std::invalid_argument("gen_random: m >= 0 required");
    std::mt19937_64 rng(seed);
    auto draw = [&](std::uint64_t bound) { return static_cast<long long>(rng() % bound); };

    std::vector<Rational> weights;
    if (weight_mode == WeightMode::Equal || n == 1) {
        weights.assign(static_cast<std::size_t>(n), Rational(1, n));
    } else {
        std::vector<long long> raw;
        long long total = 0;
        for (int i = 0; i < n; ++i) {
            raw.push_back(draw(48) + 1);
            total += raw.back();
        }
        for (long long v : raw) weights.push_back(Rational(v, total));
    }

    auto draw_row = [&]() {
        std::vector<Rational> row(static_cast<std::size_t>(m));
        if (m == 0) return row;
        long long total = 0;
        std::vector<long long> raw(static_cast<std::size_t>(m));
        while (total == 0) {
            total = 0;
            for (int j = 0; j < m; ++j) {
                raw[static_cast<std::size_t>(j)] = draw(41);
                total += raw[static_cast<std::size_t>(j)];
            }
        }
        for (int j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] =
            Rational(raw[static_cast<std::size_t>(j)], total);
        return row;
    };

    std::vector<std::vector<Rational>> rows;
    if (cost_mode == CostMode::IdenticalAgents) {
        rows = detail::identical_rows(n, draw_row());
    } else {
        for (int i = 0; i < n; ++i) rows.push_back(draw_row());
    }
    if (cost_mode == CostMode::Ordered)
        for (auto& row : rows) std::sort(row.begin(), row.end(), std::greater<Rational>());
    return Instance(flavor, std::move(weights), std::move(rows));
}

}  // namespace fairdiv
