#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ee/bt/engine.hpp"

namespace ee::service {

struct StatusUpdate {
    std::string node;
    std::string status;
    bool operator==(const StatusUpdate&) const = default;
};

/// One line of a transcript. Bot entries carry the node that produced them;
/// user entries carry the event and the node statuses it settled.
struct TranscriptEntry {
    std::size_t seq = 0;
    std::string direction;  // "bot" | "user"
    std::string kind;       // utterance | explanation | feedback | event
    std::string node_id;
    std::string text;
    std::vector<std::string> choices;
    std::vector<std::string> attachments;
    nlohmann::json detail;  // event object, explanation payload or feedback category
    std::vector<StatusUpdate> status_updates;
    bool operator==(const TranscriptEntry&) const = default;
};

struct Transcript {
    std::string session_id;
    std::string spec_id;
    std::string created_at;
    std::string status = "active";
    std::vector<TranscriptEntry> entries;
    /// question_id -> option index
    std::map<std::string, std::size_t> responses;
    bool operator==(const Transcript&) const = default;

    std::size_t bot_count() const;
    std::size_t user_count() const;
    std::vector<bt::UserEvent> user_events() const;
};

nlohmann::json entry_to_json(const TranscriptEntry& e);
TranscriptEntry entry_from_json(const nlohmann::json& j);

TranscriptEntry bot_entry(const bt::Effect& effect);
TranscriptEntry user_entry(const bt::UserEvent& event, const bt::TickResult& result);

/// Line-delimited encoding:
///   {"type":"header","session_id","spec_id","created_at"}
///   {"type":"entry", ...}                    one per entry
///   {"type":"responses","answers":{...}}     when answers exist
///   {"type":"status","status":...}           latest status wins
std::string encode_transcript(const Transcript& t);
Transcript decode_transcript(const std::string& text);

Transcript read_transcript_file(const std::string& path);

}  // namespace ee::service
