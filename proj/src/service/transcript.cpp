#include "ee/service/transcript.hpp"

#include <fstream>
#include <sstream>

#include "ee/error.hpp"
#include "ee/explain/registry.hpp"
#include "ee/service/wire.hpp"

namespace ee::service {

std::size_t Transcript::bot_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.direction == "bot";
    return n;
}

std::size_t Transcript::user_count() const { return entries.size() - bot_count(); }

std::vector<bt::UserEvent> Transcript::user_events() const {
    std::vector<bt::UserEvent> out;
    for (const auto& e : entries) {
        if (e.direction == "user") out.push_back(event_from_json(e.detail));
    }
    return out;
}

nlohmann::json entry_to_json(const TranscriptEntry& e) {
    nlohmann::json j{{"type", "entry"}, {"seq", e.seq}, {"direction", e.direction}, {"kind", e.kind}};
    if (!e.node_id.empty()) j["node_id"] = e.node_id;
    if (!e.text.empty()) j["text"] = e.text;
    if (!e.choices.empty()) j["choices"] = e.choices;
    if (!e.attachments.empty()) j["attachments"] = e.attachments;
    if (!e.detail.is_null()) j["detail"] = e.detail;
    if (!e.status_updates.empty()) {
        auto su = nlohmann::json::array();
        for (const auto& s : e.status_updates) su.push_back({{"node", s.node}, {"status", s.status}});
        j["status_updates"] = su;
    }
    return j;
}

TranscriptEntry entry_from_json(const nlohmann::json& j) {
    TranscriptEntry e;
    e.seq = j.at("seq").get<std::size_t>();
    e.direction = j.at("direction").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    e.node_id = j.value("node_id", std::string{});
    e.text = j.value("text", std::string{});
    e.choices = j.value("choices", std::vector<std::string>{});
    e.attachments = j.value("attachments", std::vector<std::string>{});
    if (j.contains("detail")) e.detail = j["detail"];
    if (j.contains("status_updates")) {
        for (const auto& s : j["status_updates"]) {
            e.status_updates.push_back({s.at("node").get<std::string>(), s.at("status").get<std::string>()});
        }
    }
    return e;
}

TranscriptEntry bot_entry(const bt::Effect& effect) {
    TranscriptEntry e;
    e.direction = "bot";
    e.node_id = bt::effect_node(effect);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bt::Utterance>) {
                e.kind = "utterance";
                e.text = x.text;
                e.choices = x.choices;
                e.attachments = x.attachments;
            } else if constexpr (std::is_same_v<T, bt::ExplainerInvocation>) {
                e.kind = "explanation";
                e.text = x.result.rendering;
                e.attachments = x.result.attachments;
                e.detail = {{"explainer_id", x.explainer_id},
                            {"target", {{"schema", x.target.schema}, {"id", x.target.id}}},
                            {"modality", explain::to_string(x.result.modality)},
                            {"body", x.result.body},
                            {"provenance", x.result.provenance}};
            } else {
                e.kind = "feedback";
                e.text = x.text;
                e.detail = {{"category", x.category}};
            }
        },
        effect);
    return e;
}

TranscriptEntry user_entry(const bt::UserEvent& event, const bt::TickResult& result) {
    TranscriptEntry e;
    e.direction = "user";
    e.kind = "event";
    e.detail = event_to_json(event);
    if (const auto* ft = std::get_if<bt::FreeText>(&event)) e.text = ft->text;
    if (result.resolution) {
        e.node_id = result.resolution->node;
        e.status_updates.push_back({result.resolution->node, std::string(bt::to_string(result.resolution->status))});
    }
    return e;
}

std::string encode_transcript(const Transcript& t) {
    std::ostringstream os;
    os << nlohmann::json{{"type", "header"},
                         {"session_id", t.session_id},
                         {"spec_id", t.spec_id},
                         {"created_at", t.created_at}}
              .dump()
       << '\n';
    for (const auto& e : t.entries) os << entry_to_json(e).dump() << '\n';
    if (!t.responses.empty()) os << nlohmann::json{{"type", "responses"}, {"answers", t.responses}}.dump() << '\n';
    os << nlohmann::json{{"type", "status"}, {"status", t.status}}.dump() << '\n';
    return os.str();
}

Transcript decode_transcript(const std::string& text) {
    Transcript t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "header") {
                t.session_id = j.at("session_id").get<std::string>();
                t.spec_id = j.at("spec_id").get<std::string>();
                t.created_at = j.value("created_at", std::string{});
                header = true;
            } else if (type == "entry") {
                t.entries.push_back(entry_from_json(j));
            } else if (type == "responses") {
                t.responses = j.at("answers").get<std::map<std::string, std::size_t>>();
            } else if (type == "status") {
                t.status = j.at("status").get<std::string>();
            } else {
                throw Error(Errc::SchemaError, "line " + std::to_string(lineno) + ": unknown record '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::SyntaxError, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!header) throw Error(Errc::SchemaError, "transcript header missing");
    return t;
}

Transcript read_transcript_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_transcript(ss.str());
}

}  // namespace ee::service
