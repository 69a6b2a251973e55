#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ee/bt/events.hpp"
#include "ee/error.hpp"

namespace ee::service {

/// user_event {kind: "free_text", text} | {kind: "choice", index} |
/// {kind: "questionnaire_answer", question_id, option}
nlohmann::json event_to_json(const bt::UserEvent& event);
/// Accepts the object with or without "type": "user_event". Throws SchemaError.
bt::UserEvent event_from_json(const nlohmann::json& j);

nlohmann::json bot_utterance(const bt::Utterance& u);
nlohmann::json user_event_message(const bt::UserEvent& event);
nlohmann::json session_state(const std::string& session_id, const std::string& status, bool waiting);
nlohmann::json error_message(Errc code, const std::string& detail);
nlohmann::json error_message(const Error& e);

}  // namespace ee::service
