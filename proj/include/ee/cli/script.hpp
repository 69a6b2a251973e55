#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ee/bt/engine.hpp"

namespace ee::cli {

struct ScriptEvent {
    bt::UserEvent event;
    /// Node the event is delivered to (the waiting node).
    std::optional<std::string> expect_node;
    /// Status that node reports for the event: Success, Failure or Waiting
    /// (a re-prompt).
    std::optional<bt::Status> expect_status;
};

/// A conversation as an executable script.
///
///   {"spec_id": "...",
///    "annotations": [{"label": "a", "node": "greet.work"}, ...],
///    "expect_rows": ["a Success", ...],
///    "events": [{"text": "..."} | {"choice": 1} |
///               {"answer": {"question_id": "q1", "option": 1}},
///               optional "expect_node", "expect_status"]}
///
/// Labels of the form "j->k" stand for a path through two figure nodes and
/// contribute both letters to the visited sequence.
struct Script {
    std::string spec_id;
    std::vector<std::pair<std::string, std::string>> annotations;
    std::vector<std::string> expect_rows;
    std::vector<ScriptEvent> events;
};

/// Throws SyntaxError / SchemaError.
Script parse_script(std::string_view text);
/// Throws Io as well.
Script load_script(const std::string& path);

std::optional<bt::Status> status_from_string(std::string_view s);

}  // namespace ee::cli
