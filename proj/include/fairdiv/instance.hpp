#pragma once

#include "fairdiv/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

enum class Flavor { Chores, Goods };

enum class FairnessNotion { EF, EF1, EFX, PROP, PROP1, PROPX, MMS, MMA, MMA1, MMAX };

inline std::string to_string(Flavor f) { return f == Flavor::Chores ? "chores" : "goods"; }

inline std::string to_string(FairnessNotion n) {
    switch (n) {
        case FairnessNotion::EF: return "ef";
        case FairnessNotion::EF1: return "ef1";
        case FairnessNotion::EFX: return "efx";
        case FairnessNotion::PROP: return "prop";
        case FairnessNotion::PROP1: return "prop1";
        case FairnessNotion::PROPX: return "propx";
        case FairnessNotion::MMS: return "mms";
        case FairnessNotion::MMA: return "mma";
        case FairnessNotion::MMA1: return "mma1";
        case FairnessNotion::MMAX: return "mmax";
    }
    return "";
}

inline FairnessNotion notion_from_string(const std::string& s) {
    for (FairnessNotion n :
         {FairnessNotion::EF, FairnessNotion::EF1, FairnessNotion::EFX, FairnessNotion::PROP,
          FairnessNotion::PROP1, FairnessNotion::PROPX, FairnessNotion::MMS, FairnessNotion::MMA,
          FairnessNotion::MMA1, FairnessNotion::MMAX})
        if (to_string(n) == s) return n;
    throw std::invalid_argument("unknown fairness notion \"" + s + "\"");
}

/// Weighted additive instance. Weights are positive and sum to exactly 1;
/// all valuation entries are nonnegative. Rows need not sum to 1 unless
/// normalize() is applied (normalization is opt-in).
class Instance {
public:
    Instance(Flavor flavor, std::vector<Rational> weights,
             std::vector<std::vector<Rational>> values, std::vector<std::string> item_labels = {})
        : flavor_(flavor),
          weights_(std::move(weights)),
          values_(std::move(values)),
          item_labels_(std::move(item_labels)) {
        if (weights_.empty()) throw std::invalid_argument("agents: need n >= 1");
        if (values_.size() != weights_.size())
            throw std::invalid_argument("agents: weights/values count mismatch");
        std::size_t m = values_[0].size();
        if (m > 62)
            throw std::invalid_argument("items: at most 62 items supported (desk scale)");
        Rational wsum;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (!weights_[i].is_positive())
                throw std::invalid_argument("agents[" + std::to_string(i) +
                                            "].weight: must be positive");
            wsum += weights_[i];
            if (values_[i].size() != m)
                throw std::invalid_argument("agents[" + std::to_string(i) +
                                            "].values: row length mismatch");
            for (std::size_t j = 0; j < m; ++j)
                if (values_[i][j].is_negative())
                    throw std::invalid_argument("agents[" + std::to_string(i) + "].values[" +
                                                std::to_string(j) + "]: negative entry");
        }
        if (wsum != Rational(1))
            throw std::invalid_argument("agents[*].weight: weights sum to " + wsum.str() +
                                        ", expected 1");
        if (!item_labels_.empty() && item_labels_.size() != m)
            throw std::invalid_argument("items: label count mismatch");
    }

    Flavor flavor() const { return flavor_; }
    int n() const { return static_cast<int>(weights_.size()); }
    int m() const { return static_cast<int>(values_[0].size()); }
    const Rational& weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }
    const std::vector<Rational>& weights() const { return weights_; }
    const std::vector<Rational>& row(int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const Rational& value(int agent, int item) const {
        return values_.at(static_cast<std::size_t>(agent)).at(static_cast<std::size_t>(item));
    }
    const std::vector<std::string>& item_labels() const { return item_labels_; }

    bool equal_weights() const {
        for (int i = 1; i < n(); ++i)
            if (weights_[static_cast<std::size_t>(i)] != weights_[0]) return false;
        return true;
    }

    Rational row_total(int agent) const {
        Rational t;
        for (const Rational& v : row(agent)) t += v;
        return t;
    }

private:
    Flavor flavor_;
    std::vector<Rational> weights_;
    std::vector<std::vector<Rational>> values_;
    std::vector<std::string> item_labels_;
};

/// Full n-partition of the items; empty bundles allowed.
struct Allocation {
    std::vector<std::vector<int>> bundles;

    /// Throws unless the bundles are pairwise disjoint and cover {0..m-1}.
    void validate(int m) const {
        std::vector<int> seen(static_cast<std::size_t>(m), 0);
        std::size_t total = 0;
        for (std::size_t b = 0; b < bundles.size(); ++b)
            for (int item : bundles[b]) {
                if (item < 0 || item >= m)
                    throw std::invalid_argument("bundles[" + std::to_string(b) +
                                                "]: item index out of range");
                if (seen[static_cast<std::size_t>(item)]++)
                    throw std::invalid_argument("bundles: item " + std::to_string(item) +
                                                " appears twice");
                ++total;
            }
        if (total != static_cast<std::size_t>(m))
            throw std::invalid_argument("bundles: not a full partition of the items");
    }

    std::vector<std::uint64_t> masks() const {
        std::vector<std::uint64_t> out(bundles.size(), 0);
        for (std::size_t b = 0; b < bundles.size(); ++b)
            for (int item : bundles[b]) out[b] |= std::uint64_t(1) << item;
        return out;
    }

    static Allocation from_masks(const std::vector<std::uint64_t>& masks, int m) {
        Allocation a;
        a.bundles.resize(masks.size());
        for (std::size_t b = 0; b < masks.size(); ++b)
            for (int item = 0; item < m; ++item)
                if (masks[b] >> item & 1) a.bundles[b].push_back(item);
        return a;
    }

    friend bool operator==(const Allocation& x, const Allocation& y) {
        return x.bundles == y.bundles;
    }
};

inline Rational bundle_value(const Instance& inst, int agent, std::span<const int> items) {
    Rational t;
    for (int item : items) t += inst.value(agent, item);
    return t;
}

inline Rational bundle_value(const Instance& inst, int agent, std::uint64_t mask) {
    Rational t;
    for (int item = 0; item < inst.m(); ++item)
        if (mask >> item & 1) t += inst.value(agent, item);
    return t;
}

/// Rescales every non-zero row to sum exactly 1; all-zero rows stay zero and
/// weights are untouched. Idempotent.
inline Instance normalize(const Instance& inst) {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(static_cast<std::size_t>(inst.n()));
    for (int i = 0; i < inst.n(); ++i) {
        Rational total = inst.row_total(i);
        std::vector<Rational> r = inst.row(i);
        if (total.is_positive())
            for (Rational& v : r) v /= total;
        rows.push_back(std::move(r));
    }
    return Instance(inst.flavor(), inst.weights(), std::move(rows), inst.item_labels());
}

// ---- JSON serialization (the bit-exact interchange format) ----

inline Instance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("instance: not a JSON object");
    if (!j.contains("flavor") || !j["flavor"].is_string())
        throw std::invalid_argument("flavor: missing or not a string");
    std::string fs = j["flavor"].get<std::string>();
    Flavor flavor;
    if (fs == "chores")
        flavor = Flavor::Chores;
    else if (fs == "goods")
        flavor = Flavor::Goods;
    else
        throw std::invalid_argument("flavor: expected \"chores\" or \"goods\"");
    if (!j.contains("agents") || !j["agents"].is_array())
        throw std::invalid_argument("agents: missing or not an array");
    std::vector<Rational> weights;
    std::vector<std::vector<Rational>> values;
    for (const auto& a : j["agents"]) {
        if (!a.is_object() || !a.contains("weight") || !a.contains("values"))
            throw std::invalid_argument("agents[" + std::to_string(weights.size()) +
                                        "]: expected {weight, values}");
        weights.push_back(Rational::parse(a["weight"].get<std::string>()));
        std::vector<Rational> r;
        for (const auto& v : a["values"]) r.push_back(Rational::parse(v.get<std::string>()));
        values.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("items")) {
        if (!j["items"].is_array()) throw std::invalid_argument("items: not an array");
        for (const auto& s : j["items"]) labels.push_back(s.get<std::string>());
    }
    return Instance(flavor, std::move(weights), std::move(values), std::move(labels));
}

inline Instance load_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("instance: invalid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["flavor"] = to_string(inst.flavor());
    if (!inst.item_labels().empty()) j["items"] = inst.item_labels();
    nlohmann::json agents = nlohmann::json::array();
    for (int i = 0; i < inst.n(); ++i) {
        nlohmann::json a;
        a["weight"] = inst.weight(i).str();
        nlohmann::json vals = nlohmann::json::array();
        for (const Rational& v : inst.row(i)) vals.push_back(v.str());
        a["values"] = vals;
        agents.push_back(std::move(a));
    }
    j["agents"] = std::move(agents);
    return j;
}

inline Allocation allocation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("bundles") || !j["bundles"].is_array())
        throw std::invalid_argument("allocation: expected {\"bundles\": [[...], ...]}");
    Allocation a;
    for (const auto& b : j["bundles"]) {
        std::vector<int> bundle;
        for (const auto& v : b) {
            if (!v.is_number_integer()) throw std::invalid_argument("bundles: non-integer item");
            bundle.push_back(v.get<int>());
        }
        a.bundles.push_back(std::move(bundle));
    }
    return a;
}

inline Allocation load_allocation(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("allocation: invalid JSON: ") + e.what());
    }
    return allocation_from_json(j);
}

inline nlohmann::json allocation_to_json(const Allocation& a) {
    nlohmann::json j;
    j["bundles"] = a.bundles;
    return j;
}

}  // namespace fairdiv
