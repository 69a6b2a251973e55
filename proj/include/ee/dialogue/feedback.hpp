#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ee::dialogue {

/// A question or disagreement the strategy could not handle, kept to improve
/// it. `category` is "unmet_need" or "disagreement".
struct FeedbackRecord {
    std::string session_id;
    std::string spec_id;
    std::string category;
    std::string text;
    std::string timestamp;
    bool operator==(const FeedbackRecord&) const = default;
};

nlohmann::json to_json(const FeedbackRecord& r);
FeedbackRecord feedback_from_json(const nlohmann::json& j);

/// `<dir>/<spec_id>.<unmet|disagreements>.ndjson`
std::string feedback_file(const std::string& dir, const std::string& spec_id, const std::string& category);

void append_feedback(const std::string& dir, const FeedbackRecord& r);

}  // namespace ee::dialogue
