#include "ee/dialogue/reactions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ee/bt/text.hpp"
#include "ee/error.hpp"

namespace ee::dialogue {

PhraseClassifier::PhraseClassifier(std::vector<PhraseEntry> table) : table_(std::move(table)) {
    for (auto& e : table_) e.phrase = bt::normalize_text(e.phrase);
}

PhraseClassifier PhraseClassifier::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::SyntaxError, e.what());
    }
    if (!j.is_object() || !j.contains("phrases") || !j["phrases"].is_array()) {
        throw Error(Errc::SchemaError, "phrases");
    }
    std::vector<PhraseEntry> table;
    for (const auto& entry : j["phrases"]) {
        if (!entry.is_object() || !entry.contains("reaction") || !entry.contains("match")) {
            throw Error(Errc::SchemaError, "phrases[]: expected {reaction, match}");
        }
        const auto reaction = entry["reaction"].get<std::string>();
        if (std::find(std::begin(kReactions), std::end(kReactions), reaction) == std::end(kReactions)) {
            throw Error(Errc::SchemaError, "phrases[]: unknown reaction '" + reaction + "'");
        }
        for (const auto& p : entry["match"]) table.push_back({p.get<std::string>(), reaction});
    }
    return PhraseClassifier(std::move(table));
}

PhraseClassifier PhraseClassifier::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

const PhraseClassifier& PhraseClassifier::builtin() {
    static const PhraseClassifier table({
        {"not sure i agree", "disagree"},
        {"i disagree", "disagree"},
        {"dont agree", "disagree"},
        {"do not agree", "disagree"},
        {"disagree", "disagree"},
        {"not right", "disagree"},
        {"wrong", "disagree"},
        {"incorrect", "disagree"},
        {"another question", "new_question"},
        {"different question", "new_question"},
        {"new question", "new_question"},
        {"something else", "new_question"},
        {"what else", "more_of_same"},
        {"tell me more", "more_of_same"},
        {"show me more", "more_of_same"},
        {"more", "more_of_same"},
        {"another explanation", "more_of_same"},
        {"not satisfied", "more_of_same"},
        {"not now", "deny"},
        {"later", "deny"},
        {"no", "deny"},
        {"nope", "deny"},
        {"that answers", "satisfied"},
        {"thanks", "satisfied"},
        {"thank you", "satisfied"},
        {"okay", "satisfied"},
        {"ok", "satisfied"},
        {"got it", "satisfied"},
        {"makes sense", "satisfied"},
        {"great", "satisfied"},
        {"satisfied", "satisfied"},
        {"yes", "affirm"},
        {"yeah", "affirm"},
        {"sure", "affirm"},
        {"of course", "affirm"},
        {"correct", "affirm"},
        {"proceed", "affirm"},
        {"okay", "affirm"},
        {"ok", "affirm"},
    });
    return table;
}

std::optional<std::string> PhraseClassifier::classify(std::string_view text,
                                                      std::span<const std::string> accepted) const {
    const std::string padded = " " + bt::normalize_text(text) + " ";
    for (const auto& e : table_) {
        if (std::find(accepted.begin(), accepted.end(), e.reaction) == accepted.end()) continue;
        if (e.phrase.empty()) continue;
        if (padded.find(" " + e.phrase + " ") != std::string::npos) return e.reaction;
    }
    return std::nullopt;
}

}  // namespace ee::dialogue
