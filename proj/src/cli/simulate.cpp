#include "ee/cli/simulate.hpp"

#include <sstream>

#include "ee/bt/trace.hpp"
#include "ee/error.hpp"
#include "ee/service/wire.hpp"

namespace ee::cli {

RowTracker::RowTracker(const std::vector<std::pair<std::string, std::string>>& annotations)
    : annotations_(annotations) {}

const std::string* RowTracker::label_of(const std::string& node) const {
    for (const auto& [label, id] : annotations_) {
        if (id == node) return &label;
    }
    return nullptr;
}

std::vector<Row> RowTracker::observe(std::size_t tick_no, const bt::TickResult& result) {
    std::vector<Row> rows;
    auto report = [&](const std::string& node, bt::Status status, bool force) {
        const auto* label = label_of(node);
        if (!label) return;
        auto& last = last_[node];
        if (status == bt::Status::Waiting) {
            last.reset();
            return;
        }
        if (force || last != status) rows.push_back({*label, node, status, tick_no});
        last = status;
    };
    if (result.resolution) report(result.resolution->node, result.resolution->status, true);
    for (const auto& v : result.visited) report(v.node, v.status, false);
    return rows;
}

std::vector<std::string> expand_label(const std::string& label) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = label.find("->", start);
        out.push_back(label.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 2;
    }
    return out;
}

std::string row_string(const Row& row) {
    return row.label + " " + std::string(bt::to_string(row.status));
}

namespace {

std::string one_line(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '\n') {
            out += " | ";
        } else {
            out += c;
        }
    }
    return out;
}

std::string event_text(const bt::UserEvent& e) {
    return std::visit(
        [](const auto& ev) -> std::string {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, bt::FreeText>) {
                return ev.text;
            } else if constexpr (std::is_same_v<T, bt::ChoiceIndex>) {
                return "<choice " + std::to_string(ev.index) + ">";
            } else {
                return "<answer " + ev.question_id + " " + std::to_string(ev.option) + ">";
            }
        },
        e);
}

}  // namespace

Simulation run_script(service::SessionManager& manager, const Script& script, const SimulateOptions& options) {
    Simulation sim;
    const auto loaded = manager.spec(script.spec_id);
    const auto& tree = loaded->tree.tree;

    for (const auto& [label, node] : script.annotations) {
        if (!tree.find(node)) sim.mismatches.push_back("annotation " + label + ": unknown node " + node);
    }
    for (std::size_t i = 0; i < script.events.size(); ++i) {
        const auto& ev = script.events[i];
        if (ev.expect_node && !tree.find(*ev.expect_node)) {
            sim.mismatches.push_back("event " + std::to_string(i + 1) + ": unknown node " + *ev.expect_node);
        }
        if (options.strict && (!ev.expect_node || !ev.expect_status)) {
            sim.mismatches.push_back("event " + std::to_string(i + 1) + ": missing expectation");
        }
    }
    if (!sim.mismatches.empty()) return sim;

    RowTracker tracker(script.annotations);
    std::ostringstream trace;
    auto absorb = [&](std::size_t tick_no, const service::Turn& turn) {
        bt::write_trace(trace, tick_no, turn.result);
        for (const auto& effect : turn.effects) {
            if (const auto* u = std::get_if<bt::Utterance>(&effect)) {
                std::string line = "bot  [" + u->node_id + "] " + one_line(u->text);
                for (std::size_t c = 0; c < u->choices.size(); ++c) {
                    line += " (" + std::to_string(c) + ") " + u->choices[c];
                }
                for (const auto& a : u->attachments) line += " <" + a + ">";
                sim.lines.push_back(line);
            } else if (const auto* f = std::get_if<bt::FeedbackRecorded>(&effect)) {
                sim.lines.push_back("note [" + f->node_id + "] recorded " + f->category);
            }
        }
        for (auto& row : tracker.observe(tick_no, turn.result)) {
            sim.lines.push_back("row  " + row_string(row) + " (" + row.node + ")");
            for (auto& letter : expand_label(row.label)) sim.sequence.push_back(letter);
            sim.rows.push_back(std::move(row));
        }
        sim.root = turn.result.status;
        sim.ticks.push_back(turn.result);
    };

    auto created = manager.create_session(script.spec_id);
    const auto& sid = created.session_id;
    absorb(0, created.turn);

    for (std::size_t i = 0; i < script.events.size(); ++i) {
        const auto& ev = script.events[i];
        const auto tag = "event " + std::to_string(i + 1);
        const auto waiting = sim.ticks.back().waiting_node;
        sim.lines.push_back("user " + event_text(ev.event));
        if (ev.expect_node && waiting != ev.expect_node) {
            sim.mismatches.push_back(tag + ": expected node " + *ev.expect_node + ", got " + waiting.value_or("<none>"));
        }
        service::Turn turn;
        try {
            turn = manager.post_event(sid, ev.event);
        } catch (const Error& e) {
            sim.mismatches.push_back(tag + ": " + e.what());
            break;
        }
        if (ev.expect_status) {
            const auto got = turn.result.resolution ? turn.result.resolution->status : bt::Status::Waiting;
            if (got != *ev.expect_status) {
                sim.mismatches.push_back(tag + ": expected status " + std::string(bt::to_string(*ev.expect_status)) +
                                         ", got " + std::string(bt::to_string(got)));
            }
        }
        absorb(i + 1, turn);
    }

    if (!script.expect_rows.empty()) {
        std::vector<std::string> got;
        for (const auto& r : sim.rows) got.push_back(row_string(r));
        const auto n = std::max(got.size(), script.expect_rows.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto exp = i < script.expect_rows.size() ? script.expect_rows[i] : std::string("<none>");
            const auto act = i < got.size() ? got[i] : std::string("<none>");
            if (exp != act) sim.mismatches.push_back("row " + std::to_string(i + 1) + ": expected " + exp + ", got " + act);
        }
    }

    sim.transcript = manager.transcript(sid);
    sim.trace = trace.str();
    return sim;
}

}  // namespace ee::cli
