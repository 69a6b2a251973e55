#include "ee/service/wire.hpp"

namespace ee::service {

nlohmann::json event_to_json(const bt::UserEvent& event) {
    return std::visit(
        [](const auto& e) -> nlohmann::json {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, bt::FreeText>) {
                return {{"kind", "free_text"}, {"text", e.text}};
            } else if constexpr (std::is_same_v<T, bt::ChoiceIndex>) {
                return {{"kind", "choice"}, {"index", e.index}};
            } else {
                return {{"kind", "questionnaire_answer"}, {"question_id", e.question_id}, {"option", e.option}};
            }
        },
        event);
}

bt::UserEvent event_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(Errc::SchemaError, "user_event: expected object");
    if (j.contains("type") && j["type"] != "user_event") throw Error(Errc::SchemaError, "type: expected user_event");
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "free_text") return bt::FreeText{j.at("text").get<std::string>()};
        if (kind == "choice") {
            if (!j.at("index").is_number_unsigned()) throw Error(Errc::SchemaError, "index: expected non-negative integer");
            return bt::ChoiceIndex{j["index"].get<std::size_t>()};
        }
        if (kind == "questionnaire_answer") {
            if (!j.at("option").is_number_unsigned()) throw Error(Errc::SchemaError, "option: expected non-negative integer");
            return bt::QuestionnaireAnswer{j.at("question_id").get<std::string>(), j["option"].get<std::size_t>()};
        }
        throw Error(Errc::SchemaError, "kind: unknown event kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("user_event: ") + e.what());
    }
}

nlohmann::json bot_utterance(const bt::Utterance& u) {
    return {{"type", "bot_utterance"},
            {"node_id", u.node_id},
            {"text", u.text},
            {"choices", u.choices},
            {"attachments", u.attachments}};
}

nlohmann::json user_event_message(const bt::UserEvent& event) {
    auto j = event_to_json(event);
    j["type"] = "user_event";
    return j;
}

nlohmann::json session_state(const std::string& session_id, const std::string& status, bool waiting) {
    return {{"type", "session_state"}, {"session_id", session_id}, {"status", status}, {"waiting", waiting}};
}

nlohmann::json error_message(Errc code, const std::string& detail) {
    return {{"type", "error"}, {"code", errc_name(code)}, {"detail", detail}};
}

nlohmann::json error_message(const Error& e) { return error_message(e.code(), e.detail()); }

}  // namespace ee::service
