#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/instance.hpp"

#include <random>

using namespace fairdiv;

namespace {

const char* kTable1 = R"({
  "flavor": "chores",
  "items": ["f1", "f2", "f3", "f4", "f5"],
  "agents": [
    {"weight": "1/2", "values": ["19/72", "17/72", "2/9", "11/72", "1/8"]},
    {"weight": "1/3", "values": ["19/72", "17/72", "2/9", "11/72", "1/8"]},
    {"weight": "1/6", "values": ["19/72", "17/72", "2/9", "11/72", "1/8"]}
  ]
})";

}  // namespace

TEST_CASE("table1 document loads with exact row sums") {
    Instance inst = load_instance(kTable1);
    CHECK(inst.n() == 3);
    CHECK(inst.m() == 5);
    CHECK(inst.flavor() == Flavor::Chores);
    CHECK(inst.weight(0) == Rational(1, 2));
    CHECK(inst.weight(2) == Rational(1, 6));
    for (int i = 0; i < 3; ++i) CHECK(inst.row_total(i) == Rational(1));
    CHECK(inst.item_labels()[2] == "f3");
    CHECK(inst.value(1, 2) == Rational(2, 9));
}

TEST_CASE("degenerate but valid instances") {
    // single agent, zero items
    Instance empty = load_instance(R"({"flavor":"chores","agents":[{"weight":"1","values":[]}]})");
    CHECK(empty.n() == 1);
    CHECK(empty.m() == 0);
    // rows need not sum to 1 until normalize() is called
    Instance scaled = load_instance(
        R"({"flavor":"chores","agents":[
            {"weight":"1/2","values":["1/2","1/4","1/8"]},
            {"weight":"1/2","values":["1/2","1/4","1/8"]}]})");
    CHECK(scaled.row_total(0) == Rational(7, 8));
    Instance norm = normalize(scaled);
    CHECK(norm.row_total(0) == Rational(1));
    CHECK(norm.value(0, 0) == Rational(4, 7));
}

TEST_CASE("load errors carry distinct field diagnostics") {
    auto expect_error = [](const char* doc, const char* needle) {
        try {
            load_instance(doc);
            FAIL_CHECK("expected failure for ", doc);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error(R"({"agents":[{"weight":"1","values":[]}]})", "flavor");
    expect_error(R"({"flavor":"fish","agents":[]})", "flavor");
    expect_error(R"({"flavor":"chores"})", "agents");
    expect_error(R"({"flavor":"chores","agents":[]})", "n >= 1");
    expect_error(
        R"({"flavor":"chores","agents":[{"weight":"1/2","values":["1"]},{"weight":"1/3","values":["1"]}]})",
        "weights sum");
    expect_error(R"({"flavor":"chores","agents":[{"weight":"1","values":["-1/2","3/2"]}]})",
                 "negative entry");
    expect_error(
        R"({"flavor":"chores","agents":[{"weight":"1/2","values":["1","0"]},{"weight":"1/2","values":["1"]}]})",
        "row length");
    expect_error(R"({"flavor":"chores","agents":[{"weight":"0","values":[]}]})", "positive");
    expect_error(R"({"flavor":"chores","agents":[{"weight":"1/1.5","values":[]}]})", "rational");
    expect_error(R"({"flavor":"chores","items":["a"],"agents":[{"weight":"1","values":[]}]})",
                 "label count");
    expect_error("not json", "invalid JSON");
}

TEST_CASE("normalize: scaling, zero rows, idempotence") {
    Instance inst(Flavor::Chores, {Rational(1, 2), Rational(1, 2)},
                  {{Rational(1), Rational(1), Rational(2)},
                   {Rational(0), Rational(0), Rational(0)}});
    Instance norm = normalize(inst);
    CHECK(norm.row(0) == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 2)});
    CHECK(norm.row(1) == std::vector<Rational>{Rational(0), Rational(0), Rational(0)});
    Instance twice = normalize(norm);
    for (int i = 0; i < 2; ++i) CHECK(twice.row(i) == norm.row(i));
    // already-normalized rows are untouched
    Instance t1 = load_instance(kTable1);
    CHECK(normalize(t1).row(0) == t1.row(0));
}

TEST_CASE("bundle_value matches hand-computed sums") {
    Instance inst = load_instance(kTable1);
    std::vector<int> b1 = {2};
    CHECK(bundle_value(inst, 0, b1) == Rational(2, 9));
    std::vector<int> b2 = {0, 1};
    CHECK(bundle_value(inst, 1, b2) == Rational(1, 2));
    std::vector<int> none;
    CHECK(bundle_value(inst, 2, none) == Rational(0));
    CHECK(bundle_value(inst, 0, std::uint64_t(0b11011)) ==
          Rational(19, 72) + Rational(17, 72) + Rational(11, 72) + Rational(1, 8));
    std::vector<int> oob = {9};
    CHECK_THROWS(bundle_value(inst, 0, oob));
}

TEST_CASE("bundle_value is additive over disjoint sets (randomized)") {
    Instance inst = load_instance(kTable1);
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        std::uint64_t s = rng() % 32, t = rng() % 32;
        std::uint64_t disjoint_t = t & ~s;
        CHECK(bundle_value(inst, 0, s | disjoint_t) ==
              bundle_value(inst, 0, s) + bundle_value(inst, 0, disjoint_t));
    }
}

TEST_CASE("allocation validation is exactly the partition test") {
    Allocation good{{{2}, {0, 1}, {3, 4}}};
    CHECK_NOTHROW(good.validate(5));
    Allocation dup{{{0, 1}, {1}, {2, 3, 4}}};
    CHECK_THROWS_AS(dup.validate(5), std::invalid_argument);
    Allocation missing{{{0, 1}, {2}, {4}}};
    CHECK_THROWS_AS(missing.validate(5), std::invalid_argument);
    Allocation oob{{{0, 1}, {2}, {3, 7}}};
    CHECK_THROWS_AS(oob.validate(5), std::invalid_argument);
    Allocation empty_ok{{{0, 1, 2, 3, 4}, {}, {}}};
    CHECK_NOTHROW(empty_ok.validate(5));
    // mask round-trip
    CHECK(Allocation::from_masks(good.masks(), 5) == good);
}

TEST_CASE("instance and allocation JSON round-trip exactly") {
    Instance inst = load_instance(kTable1);
    Instance again = instance_from_json(instance_to_json(inst));
    CHECK(again.n() == inst.n());
    CHECK(again.weights() == inst.weights());
    for (int i = 0; i < inst.n(); ++i) CHECK(again.row(i) == inst.row(i));
    CHECK(again.item_labels() == inst.item_labels());
    CHECK(instance_to_json(again) == instance_to_json(inst));

    Allocation alloc{{{2}, {0, 1}, {3, 4}}};
    CHECK(allocation_from_json(allocation_to_json(alloc)) == alloc);
    CHECK(load_allocation(R"({"bundles": [[2], [0,1], [3,4]]})") == alloc);
    CHECK_THROWS_AS(load_allocation(R"({"bundles": "nope"})"), std::invalid_argument);
}

TEST_CASE("notion names round-trip") {
    for (FairnessNotion n :
         {FairnessNotion::EF, FairnessNotion::EF1, FairnessNotion::EFX, FairnessNotion::PROP,
          FairnessNotion::PROP1, FairnessNotion::PROPX, FairnessNotion::MMS, FairnessNotion::MMA,
          FairnessNotion::MMA1, FairnessNotion::MMAX})
        CHECK(notion_from_string(to_string(n)) == n);
    CHECK_THROWS_AS(notion_from_string("nope"), std::invalid_argument);
}
