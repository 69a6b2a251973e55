#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ee/cli/script.hpp"
#include "ee/service/manager.hpp"

namespace ee::cli {

/// A terminal status reported by an annotated node, as in the status column
/// of a printed conversation.
struct Row {
    std::string label;
    std::string node;
    bt::Status status = bt::Status::Success;
    /// 0 for the opening tick, i for the tick driven by event i.
    std::size_t tick = 0;
};

struct Simulation {
    std::vector<Row> rows;
    /// Annotation letters in row order; "j->k" contributes j and k.
    std::vector<std::string> sequence;
    /// Conversation and rows as printed by `simulate`.
    std::vector<std::string> lines;
    /// Failed expectations, one readable line each.
    std::vector<std::string> mismatches;
    std::vector<bt::TickResult> ticks;
    bt::Status root = bt::Status::Waiting;
    service::Transcript transcript;
    /// Engine trace, line-delimited.
    std::string trace;
};

struct SimulateOptions {
    /// Every event must carry expect_node and expect_status.
    bool strict = false;
};

/// Tracks which annotated nodes report a new terminal status after each tick.
class RowTracker {
public:
    explicit RowTracker(const std::vector<std::pair<std::string, std::string>>& annotations);
    std::vector<Row> observe(std::size_t tick_no, const bt::TickResult& result);

private:
    std::vector<std::pair<std::string, std::string>> annotations_;
    std::map<std::string, std::optional<bt::Status>> last_;
    const std::string* label_of(const std::string& node) const;
};

std::vector<std::string> expand_label(const std::string& label);

/// Runs the script against a fresh session of `manager`. The script's spec
/// must already be loaded.
Simulation run_script(service::SessionManager& manager, const Script& script, const SimulateOptions& options = {});

std::string row_string(const Row& row);

}  // namespace ee::cli
