#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ee::explain {

struct Record {
    std::string id;
    std::string outcome;
    std::string attachment;
    std::map<std::string, nlohmann::json> values;
};

/// One counterfactual step: change `feature` to `to`; `weight` is how far
/// the step moves the instance towards the decision boundary (1 crosses it).
struct Rule {
    std::string feature;
    nlohmann::json to;
    double weight = 0.0;
};

/// Fixture records of one target schema.
struct Corpus {
    std::string schema;
    std::string kind;
    std::string default_target;
    std::vector<std::string> features;
    std::vector<Record> records;
    std::vector<Rule> rules;

    const Record* find(const std::string& id) const;
    /// Record ids sorted lexicographically.
    std::vector<std::string> sorted_ids() const;
};

Corpus corpus_from_json(const nlohmann::json& j);
Corpus load_corpus(const std::string& path);
/// Every `*.json` corpus in `dir`, keyed by schema.
std::map<std::string, Corpus> load_corpora(const std::string& dir);

}  // namespace ee::explain
