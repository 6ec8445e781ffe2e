#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/checkers.hpp"
#include "fairdiv/fixtures.hpp"

#include <random>

using namespace fairdiv;

TEST_CASE("every fixture's expected outcomes are re-derived by the checkers") {
    for (const std::string& name : fixture_names()) {
        CAPTURE(name);
        Fixture f = named_fixture(name);
        for (int i = 0; i < f.instance.n(); ++i) {
            if (f.instance.flavor() == Flavor::Chores || name != "goods-nonexistence")
                CHECK(f.instance.row_total(i) == Rational(1));
        }
        if (!f.pinned) continue;
        MmsCache cache;
        for (const ExpectedOutcome& e : f.expected) {
            CAPTURE(to_string(e.notion));
            FactorResult r = factor(f.instance, *f.pinned, e.notion, &cache);
            if (e.satisfied_at_one) CHECK(r.satisfied_at_one() == *e.satisfied_at_one);
            if (e.overall_factor)
                CHECK(compare(*e.overall_factor, r.overall) == Ordering::Equal);
        }
    }
}

TEST_CASE("epsilon-parameterized factor formulas hold at three sample values") {
    const std::vector<Rational> small_eps = {Rational(1, 10), Rational(1, 20), Rational(1, 100)};
    for (const Rational& eps : small_eps) {
        CAPTURE(eps.str());
        Rational bad = Rational(1) / (Rational(4) * eps) - Rational(1, 2);
        for (const char* name : {"propx-not-mma", "mms-not-mma-weighted"}) {
            Fixture f = named_fixture(name, eps);
            MmsCache cache;
            CHECK(compare(bad, factor(f.instance, *f.pinned, FairnessNotion::MMA1, &cache)
                                   .overall) == Ordering::Equal);
            CHECK(compare(bad, factor(f.instance, *f.pinned, FairnessNotion::MMAX, &cache)
                                   .overall) == Ordering::Equal);
        }
        Fixture pf = named_fixture("mmax-preferred", eps);
        MmsCache cache;
        CHECK(compare(Rational(4, 3),
                      factor(pf.instance, *pf.pinned, FairnessNotion::MMS, &cache).overall) ==
              Ordering::Equal);
        CHECK(compare(Rational(1) / (Rational(4) * eps),
                      factor(pf.instance, *pf.pinned, FairnessNotion::MMAX, &cache).overall) ==
              Ordering::Equal);
    }
    for (const Rational& eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
        CAPTURE(eps.str());
        Fixture t6 = named_fixture("approx-mms-not-mma1", eps);
        MmsCache cache;
        CHECK(compare(Rational(3, 2),
                      factor(t6.instance, *t6.pinned, FairnessNotion::MMS, &cache).overall) ==
              Ordering::Equal);
        CHECK(compare(Rational(1) / eps,
                      factor(t6.instance, *t6.pinned, FairnessNotion::MMA1, &cache).overall) ==
              Ordering::Equal);
        Fixture t7 = named_fixture("mms-not-mmax", eps);
        MmsCache c2;
        CHECK(factor(t7.instance, *t7.pinned, FairnessNotion::MMS, &c2).satisfied_at_one());
        CHECK(factor(t7.instance, *t7.pinned, FairnessNotion::MMA1, &c2).satisfied_at_one());
        CHECK(compare(Rational(1) / eps,
                      factor(t7.instance, *t7.pinned, FairnessNotion::MMAX, &c2).overall) ==
              Ordering::Equal);
    }
}

TEST_CASE("companion agents satisfy the claimed notion even when agent 1 binds") {
    // These fixtures pin rows for the non-focal agents; the side condition is
    // that the pinned allocation satisfies the claimed notion for them at 1.
    MmsCache cache;
    {
        Fixture f = named_fixture("approx-mms-not-mma1", Rational(1, 2));
        FactorResult r = factor(f.instance, *f.pinned, FairnessNotion::MMS, &cache);
        CHECK(compare(Rational(1), r.per_agent[1]) == Ordering::Equal);
    }
    {
        Fixture f = named_fixture("mmax-preferred");
        FactorResult r = factor(f.instance, *f.pinned, FairnessNotion::MMS, &cache);
        CHECK(compare(Rational(1), r.per_agent[1]) == Ordering::Equal);
        CHECK(compare(Rational(1), r.per_agent[2]) == Ordering::Equal);
    }
    {
        Fixture f = named_fixture("propx-not-mma");
        FactorResult r = factor(f.instance, *f.pinned, FairnessNotion::PROPX, &cache);
        CHECK(compare(Rational(1), r.per_agent[1]) == Ordering::Equal);
    }
    {
        Fixture f = named_fixture("mma-not-mms");
        FactorResult r = factor(f.instance, *f.pinned, FairnessNotion::MMA, &cache);
        CHECK(compare(Rational(1), r.per_agent[1]) == Ordering::Equal);
        CHECK(compare(Rational(1), r.per_agent[2]) == Ordering::Equal);
    }
}

TEST_CASE("mmax-preferred: share values recomputed via the oracle") {
    Rational eps(1, 100);
    Fixture f = named_fixture("mmax-preferred", eps);
    Rational den = Rational(4) + Rational(9) * eps;
    MmsCache cache;
    std::uint64_t full = 0b11111;
    CHECK(mms(mms_query_for_agent(f.instance, 0, full, {0, 1, 2}), &cache) == Rational(3) / den);
    CHECK(mms(mms_query_for_agent(f.instance, 1, full, {0, 1, 2}), &cache) ==
          Rational(3) / (Rational(2) * den));
    CHECK(mms(mms_query_for_agent(f.instance, 0, 0b11100, {1, 2}), &cache) ==
          Rational(12) * eps / den);
    CHECK(mms(mms_query_for_agent(f.instance, 1, 0b11100, {0, 2}), &cache) ==
          Rational(3) * eps / den);
}

TEST_CASE("goods non-existence construction: exact sums and the eps guard") {
    Instance inst = goods_nonexistence_instance(4, Rational(1, 100));
    CHECK(inst.n() == 4);
    CHECK(inst.m() == 11);
    CHECK(inst.flavor() == Flavor::Goods);
    Rational wsum;
    for (int i = 0; i < 4; ++i) {
        CHECK(inst.row_total(i) == Rational(1));
        wsum += inst.weight(i);
    }
    CHECK(wsum == Rational(1));
    CHECK(inst.weight(3) == Rational(97, 100));
    CHECK(inst.value(0, 0) == Rational(1, 200));
    CHECK(inst.value(0, 6) == Rational(97, 200));
    CHECK(inst.value(0, 10) == Rational(0));
    CHECK(inst.value(3, 0) == Rational(97, 800));
    CHECK(inst.value(3, 10) == Rational(1, 100));
    // eps = 1/5 violates 1-(n-1)eps >= 2 phi n eps
    CHECK_THROWS_AS(goods_nonexistence_instance(4, Rational(1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(goods_nonexistence_instance(3, Rational(1, 100)), std::invalid_argument);
    CHECK_THROWS_AS(goods_nonexistence_instance(4, Rational(0)), std::invalid_argument);
}

TEST_CASE("fixture errors: unknown names, eps out of range") {
    CHECK_THROWS_AS(named_fixture("no-such-fixture"), std::invalid_argument);
    CHECK_THROWS_AS(named_fixture("propx-not-mma", Rational(1, 6)), std::invalid_argument);
    CHECK_THROWS_AS(named_fixture("propx-not-mma", Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(named_fixture("approx-mms-not-mma1", Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(named_fixture("mmax-preferred", Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("gen_random: determinism and contract") {
    Instance a = gen_random(3, 8, WeightMode::RandomRational, CostMode::UniformRational, 7);
    Instance b = gen_random(3, 8, WeightMode::RandomRational, CostMode::UniformRational, 7);
    CHECK(a.weights() == b.weights());
    for (int i = 0; i < 3; ++i) CHECK(a.row(i) == b.row(i));
    Instance c = gen_random(3, 8, WeightMode::RandomRational, CostMode::UniformRational, 8);
    bool differs = c.weights() != a.weights();
    for (int i = 0; i < 3 && !differs; ++i) differs = c.row(i) != a.row(i);
    CHECK(differs);

    Instance eq = gen_random(3, 4, WeightMode::Equal, CostMode::UniformRational, 1);
    for (int i = 0; i < 3; ++i) CHECK(eq.weight(i) == Rational(1, 3));

    Instance ord = gen_random(2, 6, WeightMode::RandomRational, CostMode::Ordered, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 1; j < 6; ++j) CHECK(ord.value(i, j - 1) >= ord.value(i, j));

    Instance ident = gen_random(4, 5, WeightMode::Equal, CostMode::IdenticalAgents, 3);
    for (int i = 1; i < 4; ++i) CHECK(ident.row(i) == ident.row(0));

    // weights and rows always sum to exactly 1
    std::mt19937_64 rng(313);
    for (int it = 0; it < 20; ++it) {
        int n = 1 + static_cast<int>(rng() % 5);
        int m = static_cast<int>(rng() % 9);
        Instance inst = gen_random(n, m, WeightMode::RandomRational, CostMode::UniformRational,
                                   21000 + it, it % 2 ? Flavor::Goods : Flavor::Chores);
        Rational wsum;
        for (int i = 0; i < n; ++i) wsum += inst.weight(i);
        CHECK(wsum == Rational(1));
        if (m > 0)
            for (int i = 0; i < n; ++i) CHECK(inst.row_total(i) == Rational(1));
    }
    CHECK_THROWS_AS(gen_random(0, 3, WeightMode::Equal, CostMode::UniformRational, 0),
                    std::invalid_argument);
}
