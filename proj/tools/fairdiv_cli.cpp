// fairdiv: exact fair-division toolbox for weighted chores/goods instances.
// Subcommands: check, allocate, oracle (mms|search), reduce, lift, gen,
// verify-nonexistence, ratios. All decisions are exact; decimals are display.

#include "fairdiv/fairdiv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;
using namespace fairdiv;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json instance_summary(const Instance& inst) {
    json j;
    j["n"] = inst.n();
    j["m"] = inst.m();
    j["flavor"] = to_string(inst.flavor());
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(instance_to_json(inst).dump())));
    j["digest"] = buf;
    return j;
}

json bound_to_json(const FactorBound& b) {
    json j;
    switch (b.kind()) {
        case FactorBound::Kind::ExactRational:
            j["kind"] = "rational";
            j["value"] = b.exact_value().str();
            break;
        case FactorBound::Kind::SurdScaled:
            j["kind"] = "surd";
            j["offset"] = b.offset().str();
            j["scale"] = b.scale().str();
            j["quadratic"] = {b.surd().a().str(), b.surd().b().str(), b.surd().c().str()};
            break;
        case FactorBound::Kind::Infinite:
            j["kind"] = "infinite";
            break;
    }
    j["display"] = decimal_string(b, 12);
    return j;
}

json factor_result_to_json(const FactorResult& r) {
    json j;
    j["notion"] = to_string(r.notion);
    j["flavor"] = to_string(r.flavor);
    j["overall"] = bound_to_json(r.overall);
    json per = json::array();
    for (const FactorBound& b : r.per_agent) per.push_back(bound_to_json(b));
    j["per_agent"] = per;
    json w;
    w["agent"] = r.witness.agent;
    w["removed_item"] = r.witness.removed_item;
    w["rival_agent"] = r.witness.rival_agent;
    w["measured"] = r.witness.measured.str();
    w["benchmark"] = r.witness.benchmark.str();
    j["witness"] = w;
    return j;
}

/// Thresholds: a rational literal, or the named constants tied to the algorithms'
/// guarantees ("lambda"/"1+lambda" for the swap bound at this n, "phi",
/// "1+phi", "phi-1").
FactorBound parse_threshold(const std::string& text, int n) {
    if (text == "lambda") return FactorBound::surd_scaled(lambda_threshold(n), Rational(0), Rational(1));
    if (text == "1+lambda")
        return FactorBound::surd_scaled(lambda_threshold(n), Rational(1), Rational(1));
    if (text == "phi")
        return FactorBound::surd_scaled(SurdThreshold::golden_ratio(), Rational(0), Rational(1));
    if (text == "1+phi")
        return FactorBound::surd_scaled(SurdThreshold::golden_ratio(), Rational(1), Rational(1));
    if (text == "phi-1")
        return FactorBound::surd_scaled(SurdThreshold::golden_ratio(), Rational(-1), Rational(1));
    return FactorBound::exact(Rational::parse(text));
}

std::uint64_t budget_from_env(std::uint64_t fallback) {
    if (const char* env = std::getenv("FAIRDIV_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("FAIRDIV_BUDGET: not an integer");
        }
    }
    return fallback;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(json& report, const Timer& timer) {
    report["elapsed_ms"] = timer.ms();
    std::cout << report.dump(2) << "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        out.push_back(std::stoi(part));
    }
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        out.push_back(Rational::parse(part));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact fair division of indivisible chores and goods with weighted agents"};
    app.require_subcommand(1);

    // ---- check ----
    auto* check = app.add_subcommand("check", "exact fairness factor of an allocation");
    std::string check_instance, check_allocation, check_notion = "mmax";
    std::string check_threshold = "1";
    bool check_normalize = false;
    check->add_option("--instance", check_instance, "instance JSON file")->required();
    check->add_option("--allocation", check_allocation, "allocation JSON file")->required();
    check->add_option("--notion", check_notion, "fairness notion");
    check->add_option("--threshold", check_threshold,
                      "rational or named threshold (e.g. 1, 191/100, 1+lambda, phi-1)");
    check->add_flag("--normalize", check_normalize, "normalize rows before checking");

    // ---- allocate ----
    auto* allocate = app.add_subcommand("allocate", "run an allocation algorithm");
    std::string alg, alloc_instance, propx_input, out_allocation;
    bool alloc_normalize = false;
    allocate->add_option("--alg", alg, "swap|two-agent|propx|ef1|efx-ttc|goods-ece")->required();
    allocate->add_option("--instance", alloc_instance, "instance JSON file")->required();
    allocate->add_option("--propx-input", propx_input, "PROPX allocation file (swap only)");
    allocate->add_option("--out-allocation", out_allocation, "write allocation JSON here");
    allocate->add_flag("--normalize", alloc_normalize, "normalize rows before allocating");

    // ---- oracle ----
    auto* oracle = app.add_subcommand("oracle", "exact brute-force oracles");
    oracle->require_subcommand(1);
    auto* oracle_mms = oracle->add_subcommand("mms", "weighted maximin share of an item set");
    std::string om_instance, om_items, om_recipients;
    int om_agent = 0;
    oracle_mms->add_option("--instance", om_instance)->required();
    oracle_mms->add_option("--agent", om_agent, "agent whose valuation is used")->required();
    oracle_mms->add_option("--items", om_items, "comma-separated item indices")->required();
    oracle_mms->add_option("--recipients", om_recipients,
                           "comma-separated recipient weights (default: other agents)");
    auto* oracle_search = oracle->add_subcommand("search", "best factor over all allocations");
    std::string os_instance, os_notion = "mmax";
    int os_jobs = 1;
    oracle_search->add_option("--instance", os_instance)->required();
    oracle_search->add_option("--notion", os_notion);
    oracle_search->add_option("--jobs", os_jobs, "parallel sweep workers");

    // ---- reduce / lift ----
    auto* reduce = app.add_subcommand("reduce", "ordered instance and rank maps");
    std::string red_instance, red_out;
    reduce->add_option("--instance", red_instance)->required();
    reduce->add_option("--out-instance", red_out, "write ordered instance JSON here");
    auto* lift_cmd = app.add_subcommand("lift", "lift an ordered allocation to the original");
    std::string lift_instance, lift_alloc, lift_out;
    lift_cmd->add_option("--instance", lift_instance)->required();
    lift_cmd->add_option("--ordered-allocation", lift_alloc)->required();
    lift_cmd->add_option("--out-allocation", lift_out, "write lifted allocation JSON here");

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "named fixtures and random instances");
    std::string gen_fixture, gen_eps, gen_weights = "random", gen_costs = "uniform";
    std::string gen_flavor = "chores", gen_out_instance, gen_out_allocation;
    bool gen_random_flag = false;
    int gen_n = 3, gen_m = 6;
    std::uint64_t gen_seed = 0;
    gen->add_option("--fixture", gen_fixture, "fixture name (see --list)");
    gen->add_option("--eps", gen_eps, "rational epsilon for parameterized fixtures");
    gen->add_flag("--random", gen_random_flag, "generate a seeded random instance");
    gen->add_option("--n", gen_n);
    gen->add_option("--m", gen_m);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--weights", gen_weights, "equal|random");
    gen->add_option("--costs", gen_costs, "uniform|identical|ordered");
    gen->add_option("--flavor", gen_flavor, "chores|goods");
    gen->add_option("--out-instance", gen_out_instance, "write instance JSON here");
    gen->add_option("--out-allocation", gen_out_allocation, "write pinned allocation here");
    bool gen_list = false;
    gen->add_flag("--list", gen_list, "list fixture names");

    // ---- verify-nonexistence ----
    auto* nonex = app.add_subcommand("verify-nonexistence",
                                     "sweep all allocations for a satisfying witness");
    std::string ne_instance, ne_notion = "mma1";
    int ne_jobs = 1;
    nonex->add_option("--instance", ne_instance)->required();
    nonex->add_option("--notion", ne_notion);
    nonex->add_option("--jobs", ne_jobs);

    // ---- ratios ----
    auto* ratios = app.add_subcommand("ratios", "swap-threshold table lambda(n), 1+lambda(n)");
    int n_max = 10;
    ratios->add_option("--n-max", n_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Timer timer;
    try {
        if (*check) {
            Instance inst = load_instance(read_file(check_instance));
            if (check_normalize) inst = normalize(inst);
            Allocation alloc = load_allocation(read_file(check_allocation));
            FairnessNotion notion = notion_from_string(check_notion);
            FactorBound threshold = parse_threshold(check_threshold, inst.n());
            MmsCache cache;
            FactorResult r = factor(inst, alloc, notion, &cache);
            bool ok = r.satisfied(threshold);
            json report;
            report["command"] = "check";
            report["instance"] = instance_summary(inst);
            report["threshold"] = bound_to_json(threshold);
            report["result"] = factor_result_to_json(r);
            report["satisfied"] = ok;
            emit(report, timer);
            return ok ? 0 : 1;
        }

        if (*allocate) {
            Instance inst = load_instance(read_file(alloc_instance));
            if (alloc_normalize) inst = normalize(inst);
            json report;
            report["command"] = "allocate";
            report["alg"] = alg;
            report["instance"] = instance_summary(inst);
            MmsCache cache;
            Allocation result;
            FairnessNotion verified_notion;
            FactorBound guarantee = FactorBound::exact(Rational(1));
            if (alg == "propx" || alg == "ef1") {
                ProducerResult pr = alg == "propx" ? propx_allocate(inst) : ef1_allocate(inst);
                result = pr.allocation;
                verified_notion = alg == "propx" ? FairnessNotion::PROPX : FairnessNotion::EF1;
                report["trace"] = {{"path", pr.path == ProducerPath::Heuristic ? "heuristic"
                                                                               : "exhaustive"}};
            } else if (alg == "swap") {
                Allocation input;
                if (!propx_input.empty()) {
                    input = load_allocation(read_file(propx_input));
                } else {
                    input = propx_allocate(inst).allocation;
                }
                auto [out, trace] = swap_mmax(inst, input, &cache);
                result = out;
                verified_notion = FairnessNotion::MMAX;
                guarantee = FactorBound::surd_scaled(lambda_threshold(inst.n()), Rational(1),
                                                     Rational(1));
                json decisions = json::array();
                for (const SwapDecision& d : trace.decisions) {
                    json dj;
                    dj["agent"] = d.agent;
                    dj["kind"] = d.kind == SwapDecision::Kind::NoSwap ? "no-swap"
                                 : d.kind == SwapDecision::Kind::TwoAgentSwap ? "two-agent-swap"
                                                                              : "three-way-swap";
                    if (d.kind != SwapDecision::Kind::NoSwap) {
                        dj["f_min"] = d.f_min;
                        if (d.f_max >= 0) dj["f_max"] = d.f_max;
                        dj["donee_min"] = d.donee_min;
                        if (d.donee_max >= 0) dj["donee_max"] = d.donee_max;
                    }
                    decisions.push_back(dj);
                }
                report["trace"] = {{"input", allocation_to_json(trace.input)},
                                   {"decisions", decisions}};
            } else if (alg == "two-agent") {
                OrderedLift lift = to_ordered(inst);
                auto [ordered_alloc, trace] = two_agent_mmax(lift);
                result = lift_allocation(lift, inst, ordered_alloc).allocation;
                verified_notion = FairnessNotion::MMAX;
                guarantee = FactorBound::exact(Rational(191, 100));
                report["trace"] = {{"break_item", trace.break_item},
                                   {"break_case", trace.break_case},
                                   {"cheaper_agent", trace.cheaper_agent},
                                   {"lambda", trace.lambda.str()},
                                   {"mu", trace.mu.str()},
                                   {"ordered_allocation", allocation_to_json(ordered_alloc)}};
            } else if (alg == "efx-ttc") {
                OrderedLift lift = to_ordered(inst);
                ProducerResult pr = efx_allocate_equal_weights(lift);
                result = lift_allocation(lift, inst, pr.allocation).allocation;
                verified_notion = FairnessNotion::MMAX;
                report["trace"] = {{"path", pr.path == ProducerPath::Heuristic ? "heuristic"
                                                                               : "exhaustive"},
                                   {"ordered_allocation", allocation_to_json(pr.allocation)}};
            } else if (alg == "goods-ece") {
                OrderedLift lift = to_ordered(inst);
                GoodsResult gr = ece_preprocess_mmax(lift);
                result = lift_allocation(lift, inst, gr.allocation).allocation;
                verified_notion = FairnessNotion::MMAX;
                guarantee = FactorBound::surd_scaled(SurdThreshold::golden_ratio(), Rational(-1),
                                                     Rational(1));
                json phase1 = json::array();
                for (std::uint64_t b : gr.trace.phase1_bundles) phase1.push_back(b);
                report["trace"] = {{"locked_count", gr.trace.locked_count},
                                   {"order_labels", gr.trace.order_label},
                                   {"entry_times", gr.trace.entry_time},
                                   {"phase1_bundle_masks", phase1},
                                   {"ordered_allocation", allocation_to_json(gr.allocation)}};
            } else {
                throw std::invalid_argument("allocate: unknown --alg " + alg);
            }
            FactorResult fr = factor(inst, result, verified_notion, &cache);
            bool ok = fr.satisfied(guarantee);
            report["allocation"] = allocation_to_json(result);
            report["guarantee"] = bound_to_json(guarantee);
            report["result"] = factor_result_to_json(fr);
            report["satisfied"] = ok;
            if (!out_allocation.empty()) write_file(out_allocation, allocation_to_json(result));
            emit(report, timer);
            return ok ? 0 : 1;
        }

        if (*oracle_mms) {
            Instance inst = load_instance(read_file(om_instance));
            std::uint64_t mask = 0;
            for (int item : parse_int_list(om_items)) {
                if (item < 0 || item >= inst.m())
                    throw std::invalid_argument("oracle mms: item index out of range");
                mask |= std::uint64_t(1) << item;
            }
            MmsQuery q;
            q.row = inst.row(om_agent);
            q.items = mask;
            q.owner_weight = inst.weight(om_agent);
            q.flavor = inst.flavor();
            if (!om_recipients.empty()) {
                q.recipients = parse_rational_list(om_recipients);
            } else {
                for (int j = 0; j < inst.n(); ++j)
                    if (j != om_agent) q.recipients.push_back(inst.weight(j));
            }
            MmsCache cache;
            Rational value = mms(q, &cache);
            json report;
            report["command"] = "oracle mms";
            report["instance"] = instance_summary(inst);
            report["agent"] = om_agent;
            report["value"] = value.str();
            emit(report, timer);
            return 0;
        }

        if (*oracle_search) {
            Instance inst = load_instance(read_file(os_instance));
            OracleOptions opt;
            opt.budget = budget_from_env(opt.budget);
            opt.jobs = os_jobs;
            MmsCache cache;
            SearchResult r = best_factor_search(inst, notion_from_string(os_notion), &cache, opt);
            json report;
            report["command"] = "oracle search";
            report["instance"] = instance_summary(inst);
            report["notion"] = os_notion;
            report["jobs"] = os_jobs;
            report["examined"] = r.examined;
            report["allocation"] = allocation_to_json(r.allocation);
            report["factor"] = bound_to_json(r.factor);
            emit(report, timer);
            return 0;
        }

        if (*reduce) {
            Instance inst = load_instance(read_file(red_instance));
            OrderedLift lift = to_ordered(inst);
            json report;
            report["command"] = "reduce";
            report["instance"] = instance_summary(inst);
            report["ordered_instance"] = instance_to_json(lift.ordered);
            report["rank_to_original"] = lift.rank_to_original;
            report["original_to_rank"] = lift.original_to_rank;
            if (!red_out.empty()) write_file(red_out, instance_to_json(lift.ordered));
            emit(report, timer);
            return 0;
        }

        if (*lift_cmd) {
            Instance inst = load_instance(read_file(lift_instance));
            OrderedLift lift = to_ordered(inst);
            Allocation ordered_alloc = load_allocation(read_file(lift_alloc));
            LiftOutcome out = lift_allocation(lift, inst, ordered_alloc);
            json report;
            report["command"] = "lift";
            report["instance"] = instance_summary(inst);
            report["allocation"] = allocation_to_json(out.allocation);
            report["picked_for_rank"] = out.picked_for_rank;
            if (!lift_out.empty()) write_file(lift_out, allocation_to_json(out.allocation));
            emit(report, timer);
            return 0;
        }

        if (*gen) {
            json report;
            report["command"] = "gen";
            if (gen_list) {
                report["fixtures"] = fixture_names();
                emit(report, timer);
                return 0;
            }
            Instance inst = [&]() {
                if (!gen_fixture.empty()) {
                    std::optional<Rational> eps;
                    if (!gen_eps.empty()) eps = Rational::parse(gen_eps);
                    Fixture f = named_fixture(gen_fixture, eps);
                    report["fixture"] = f.name;
                    if (!f.eps.is_zero()) report["eps"] = f.eps.str();
                    if (f.pinned) {
                        report["pinned_allocation"] = allocation_to_json(*f.pinned);
                        if (!gen_out_allocation.empty())
                            write_file(gen_out_allocation, allocation_to_json(*f.pinned));
                    }
                    return f.instance;
                }
                if (!gen_random_flag)
                    throw std::invalid_argument("gen: pass --fixture NAME or --random");
                WeightMode wm = gen_weights == "equal" ? WeightMode::Equal
                                                       : WeightMode::RandomRational;
                CostMode cm = gen_costs == "identical" ? CostMode::IdenticalAgents
                              : gen_costs == "ordered" ? CostMode::Ordered
                                                       : CostMode::UniformRational;
                Flavor fl = gen_flavor == "goods" ? Flavor::Goods : Flavor::Chores;
                report["seed"] = gen_seed;
                return gen_random(gen_n, gen_m, wm, cm, gen_seed, fl);
            }();
            report["instance"] = instance_to_json(inst);
            if (!gen_out_instance.empty()) write_file(gen_out_instance, instance_to_json(inst));
            emit(report, timer);
            return 0;
        }

        if (*nonex) {
            Instance inst = load_instance(read_file(ne_instance));
            OracleOptions opt;
            opt.budget = budget_from_env(opt.budget);
            opt.jobs = ne_jobs;
            MmsCache cache;
            NonexistenceResult r =
                verify_nonexistence(inst, notion_from_string(ne_notion), &cache, opt);
            json report;
            report["command"] = "verify-nonexistence";
            report["instance"] = instance_summary(inst);
            report["notion"] = ne_notion;
            report["jobs"] = ne_jobs;
            report["examined"] = r.examined;
            report["verdict"] = r.satisfiable ? "Witness" : "NoAllocationSatisfies";
            if (r.witness) report["witness"] = allocation_to_json(*r.witness);
            emit(report, timer);
            return 0;
        }

        if (*ratios) {
            json rows = json::array();
            for (int n = 2; n <= n_max; ++n) {
                SurdThreshold lam = lambda_threshold(n);
                FactorBound l = FactorBound::surd_scaled(lam, Rational(0), Rational(1));
                FactorBound lp1 = FactorBound::surd_scaled(lam, Rational(1), Rational(1));
                json row;
                row["n"] = n;
                row["lambda"] = decimal_string(l, 12);
                row["one_plus_lambda"] = decimal_string(lp1, 12);
                row["quadratic"] = {lam.a().str(), lam.b().str(), lam.c().str()};
                rows.push_back(row);
            }
            json report;
            report["command"] = "ratios";
            report["note"] = "decimal columns are display only; comparisons stay exact";
            report["rows"] = rows;
            emit(report, timer);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
