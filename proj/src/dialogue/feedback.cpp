#include "ee/dialogue/feedback.hpp"

#include <filesystem>
#include <fstream>

#include "ee/error.hpp"

namespace ee::dialogue {

nlohmann::json to_json(const FeedbackRecord& r) {
    return {{"session_id", r.session_id},
            {"spec_id", r.spec_id},
            {"category", r.category},
            {"text", r.text},
            {"timestamp", r.timestamp}};
}

FeedbackRecord feedback_from_json(const nlohmann::json& j) {
    return FeedbackRecord{j.at("session_id").get<std::string>(), j.at("spec_id").get<std::string>(),
                          j.at("category").get<std::string>(), j.at("text").get<std::string>(),
                          j.at("timestamp").get<std::string>()};
}

std::string feedback_file(const std::string& dir, const std::string& spec_id, const std::string& category) {
    const char* suffix = category == "unmet_need" ? ".unmet.ndjson" : ".disagreements.ndjson";
    return (std::filesystem::path(dir) / (spec_id + suffix)).string();
}

void append_feedback(const std::string& dir, const FeedbackRecord& r) {
    std::filesystem::create_directories(dir);
    const auto path = feedback_file(dir, r.spec_id, r.category);
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error(Errc::Io, "cannot append to " + path);
    out << to_json(r).dump() << '\n';
}

}  // namespace ee::dialogue
