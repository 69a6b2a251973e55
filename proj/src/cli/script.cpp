#include "ee/cli/script.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ee/error.hpp"
#include "ee/service/wire.hpp"

namespace ee::cli {

std::optional<bt::Status> status_from_string(std::string_view s) {
    if (s == "Success") return bt::Status::Success;
    if (s == "Failure" || s == "Fail") return bt::Status::Failure;
    if (s == "Waiting") return bt::Status::Waiting;
    return std::nullopt;
}

namespace {

using nlohmann::json;

std::string str_field(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw Error(Errc::SchemaError, path + "." + key);
    if (!j[key].is_string()) throw Error(Errc::SchemaError, path + "." + key + ": expected string");
    return j[key].get<std::string>();
}

ScriptEvent event_from(const json& j, const std::string& path) {
    if (!j.is_object()) throw Error(Errc::SchemaError, path + ": expected object");
    ScriptEvent ev;
    int kinds = 0;
    if (j.contains("kind")) {
        json wire = j;
        wire.erase("expect_node");
        wire.erase("expect_status");
        ev.event = service::event_from_json(wire);
        ++kinds;
    }
    if (j.contains("text")) {
        ev.event = bt::FreeText{str_field(j, "text", path)};
        ++kinds;
    }
    if (j.contains("choice")) {
        if (!j["choice"].is_number_unsigned()) throw Error(Errc::SchemaError, path + ".choice: expected non-negative integer");
        ev.event = bt::ChoiceIndex{j["choice"].get<std::size_t>()};
        ++kinds;
    }
    if (j.contains("answer")) {
        const auto& a = j["answer"];
        if (!a.is_object() || !a.contains("option") || !a["option"].is_number_unsigned()) {
            throw Error(Errc::SchemaError, path + ".answer: expected {question_id, option}");
        }
        ev.event = bt::QuestionnaireAnswer{str_field(a, "question_id", path + ".answer"), a["option"].get<std::size_t>()};
        ++kinds;
    }
    if (kinds != 1) throw Error(Errc::SchemaError, path + ": expected exactly one of text, choice, answer, kind");
    for (const auto& [key, _] : j.items()) {
        static const char* known[] = {"kind", "text", "choice", "answer", "expect_node", "expect_status",
                                      "index", "option", "question_id", "type", "note"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw Error(Errc::SchemaError, path + "." + key + ": unknown field");
    }
    if (j.contains("expect_node")) ev.expect_node = str_field(j, "expect_node", path);
    if (j.contains("expect_status")) {
        const auto s = str_field(j, "expect_status", path);
        ev.expect_status = status_from_string(s);
        if (!ev.expect_status) throw Error(Errc::SchemaError, path + ".expect_status: unknown status '" + s + "'");
    }
    return ev;
}

}  // namespace

Script parse_script(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::SyntaxError, e.what());
    }
    if (!j.is_object()) throw Error(Errc::SchemaError, "script: expected object");
    Script s;
    s.spec_id = str_field(j, "spec_id", "script");
    if (j.contains("annotations")) {
        if (!j["annotations"].is_array()) throw Error(Errc::SchemaError, "script.annotations: expected array");
        for (std::size_t i = 0; i < j["annotations"].size(); ++i) {
            const auto path = "script.annotations[" + std::to_string(i) + "]";
            const auto& a = j["annotations"][i];
            if (!a.is_object()) throw Error(Errc::SchemaError, path + ": expected object");
            s.annotations.emplace_back(str_field(a, "label", path), str_field(a, "node", path));
        }
    }
    if (j.contains("expect_rows")) {
        if (!j["expect_rows"].is_array()) throw Error(Errc::SchemaError, "script.expect_rows: expected array");
        for (const auto& r : j["expect_rows"]) {
            if (!r.is_string()) throw Error(Errc::SchemaError, "script.expect_rows: expected strings");
            s.expect_rows.push_back(r.get<std::string>());
        }
    }
    if (!j.contains("events") || !j["events"].is_array()) throw Error(Errc::SchemaError, "script.events: expected array");
    for (std::size_t i = 0; i < j["events"].size(); ++i) {
        s.events.push_back(event_from(j["events"][i], "script.events[" + std::to_string(i) + "]"));
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "spec_id" && key != "annotations" && key != "expect_rows" && key != "events" && key != "comment") {
            throw Error(Errc::SchemaError, "script." + key + ": unknown field");
        }
    }
    return s;
}

Script load_script(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_script(ss.str());
}

}  // namespace ee::cli
