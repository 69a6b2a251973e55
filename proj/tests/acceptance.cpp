#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "ee/bt/splice.hpp"
#include "ee/cli/commands.hpp"
#include "ee/cli/script.hpp"
#include "ee/cli/simulate.hpp"
#include "ee/dialogue/model.hpp"
#include "ee/explain/registry.hpp"
#include "ee/service/verdict.hpp"
#include "ee/spec/codec.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace ee;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<bt::UserEvent> script_events(const std::string& name) {
    std::vector<bt::UserEvent> out;
    for (const auto& e : cli::load_script(test::source_path("data/scripts/" + name)).events) out.push_back(e.event);
    return out;
}

Outcome transcript_replay() {
    Outcome o;
    const auto start = Clock::now();
    cli::SimulateArgs args;
    args.spec_path = test::source_path("data/specs/radiograph.xaispec.json");
    args.script_path = test::source_path("data/scripts/clinician.script");
    args.fixtures_dir = test::source_path("data/fixtures");
    args.strict = true;
    std::ostringstream out, err;
    const int code = cli::cmd_simulate(args, out, err);
    const double elapsed = seconds_since(start);
    o.require(code == 0, "exit code " + std::to_string(code));

    // Node and Success/Fail columns of the printed clinician conversation.
    const std::vector<std::string> table{"a Success", "b Success",   "c Success", "j->k Failure", "g->h Failure",
                                         "e Success", "f Failure",   "j->k Success", "f Success"};
    auto manager = test::make_manager();
    const auto sim = cli::run_script(*manager, cli::load_script(args.script_path));
    std::vector<std::string> rows;
    for (const auto& r : sim.rows) rows.push_back(cli::row_string(r));
    o.require(rows == table, "clinician row statuses differ");
    o.require(sim.sequence == std::vector<std::string>{"a", "b", "c", "j", "k", "g", "h", "e", "f", "j", "k", "f"},
              "visited sequence differs");
    o.require(out.str().find("sequence: a,b,c,j,k,g,h,e,f,j,k,f\n") != std::string::npos, "printed sequence differs");
    o.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
    return o;
}

Outcome composite_oracle() {
    Outcome o;
    const auto start = Clock::now();
    const auto trees = test::enumerate_trees(3, 3, {test::OKind::S, test::OKind::F});
    std::size_t discrepancies = 0;
    std::string first;
    for (const auto& t : trees) {
        const auto d = test::compare_with_oracle(t);
        if (!d.empty()) {
            if (first.empty()) first = d;
            ++discrepancies;
        }
    }
    const double elapsed = seconds_since(start);
    o.require(trees.size() == 55862, "enumerated " + std::to_string(trees.size()) + " trees");
    o.require(discrepancies == 0, std::to_string(discrepancies) + " discrepancies, first: " + first);
    o.require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    if (o.pass) o.detail = std::to_string(trees.size()) + " trees";
    return o;
}

Outcome memory_economy() {
    Outcome o;
    auto manager = test::make_manager();
    const auto loaded = manager->spec("radiograph");
    const auto& tree = loaded->tree.tree;
    const auto& root = tree.root();

    // Greeting, persona, a first need, then a new question after every explanation.
    const std::vector<bt::UserEvent> opening{bt::FreeText{"Yes"}, bt::FreeText{"novice"}, bt::FreeText{"expert"},
                                             bt::ChoiceIndex{0}, bt::FreeText{"yes"}};
    const std::vector<bt::UserEvent> cycle{bt::FreeText{"I have another question"}, bt::ChoiceIndex{0},
                                           bt::FreeText{"yes"}};
    std::vector<bt::UserEvent> events = opening;
    while (events.size() < 100) events.push_back(cycle[(events.size() - opening.size()) % cycle.size()]);

    const auto id = manager->create_session("radiograph").session_id;
    // Stage index -> tick after which it has completed.
    std::map<std::size_t, std::size_t> completed_at;
    std::set<std::string> completed_prompts;
    std::size_t repeated = 0;
    std::string previous_prompt;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto turn = manager->post_event(id, events[i]);
        o.require(turn.status == service::SessionStatus::Active, "session ended at tick " + std::to_string(i));
        if (!o.pass) return o;
        for (const auto& [stage, since] : completed_at) {
            const auto& sub = root.children[stage];
            std::vector<std::string> inside;
            for (const auto& v : turn.result.visited) {
                if (v.node != sub.id && tree.contains_in_subtree(sub.id, v.node)) inside.push_back(v.node);
            }
            o.require(inside == std::vector<std::string>{sub.children.front().id},
                      "tick " + std::to_string(i) + " visited " + std::to_string(inside.size()) + " nodes of " +
                          sub.id);
        }
        for (const auto& e : turn.effects) {
            const auto* u = std::get_if<bt::Utterance>(&e);
            if (!u) continue;
            const auto key = u->node_id + "|" + u->text;
            if (completed_prompts.count(u->node_id) || key == previous_prompt) ++repeated;
            previous_prompt = key;
        }
        // Greet and persona are gated stages that never reopen in this conversation.
        for (std::size_t stage : {0u, 1u}) {
            if (completed_at.count(stage)) continue;
            bool done = false;
            for (const auto& v : turn.result.visited) {
                if (v.node == root.children[stage].id && v.status == bt::Status::Success) done = true;
            }
            if (done) {
                completed_at[stage] = i;
                std::function<void(const bt::TreeNode&)> collect = [&](const bt::TreeNode& n) {
                    completed_prompts.insert(n.id);
                    for (const auto& c : n.children) collect(c);
                };
                collect(root.children[stage]);
            }
        }
    }
    o.require(completed_at.size() == 2, "greet or persona never completed");
    o.require(repeated == 0, std::to_string(repeated) + " repeated prompts");
    if (o.pass) o.detail = std::to_string(events.size()) + " ticks";
    return o;
}

Outcome personalization() {
    Outcome o;
    const auto catalog = explain::mock_registry(test::source_path("data/fixtures"));
    const auto abstract = dialogue::build_abstract_tree();
    const auto loan = dialogue::personalize(abstract, test::fixture_spec("loan"), catalog);
    const auto trainee = dialogue::personalize(abstract, test::fixture_spec("loan_trainee"), catalog);
    const auto diff = bt::structural_diff(loan.tree.root(), trainee.tree.root());
    o.require(!diff.empty(), "trees are identical");
    const std::string slot(dialogue::kStrategySlot);
    for (const auto& d : diff) {
        o.require(d.left != slot && loan.tree.contains_in_subtree(slot, d.left) &&
                      trainee.tree.contains_in_subtree(slot, d.right),
                  "difference at " + d.left + " (" + d.field + ")");
    }
    const auto again = dialogue::personalize(abstract, test::fixture_spec("loan"), catalog);
    o.require(again.tree == loan.tree && bt::structural_diff(again.tree.root(), loan.tree.root()).empty(),
              "personalization is not deterministic");
    if (o.pass) o.detail = std::to_string(diff.size()) + " differences, all below " + slot;
    return o;
}

Outcome disagreement_scenario() {
    Outcome o;
    auto manager = test::make_manager();
    const auto loaded = manager->spec("radiograph");
    const auto events = script_events("disagreement.script");
    const auto id = manager->create_session("radiograph").session_id;
    std::vector<std::string> order;
    bool disagreed = false;
    service::Turn last;
    for (const auto& e : events) {
        last = manager->post_event(id, e);
        if (const auto* t = std::get_if<bt::FreeText>(&e); t && t->text == "I'm not sure I agree") disagreed = true;
        if (!disagreed) continue;
        for (const auto& eff : last.effects) {
            const auto* u = std::get_if<bt::Utterance>(&eff);
            if (!u) continue;
            const auto stage = dialogue::stage_of(loaded->tree.tree, u->node_id);
            if (!stage) continue;
            const std::string name(dialogue::to_string(*stage));
            if (order.empty() || order.back() != name) order.push_back(name);
        }
    }
    o.require(events.size() == 18, "script has " + std::to_string(events.size()) + " events");
    o.require(last.result.status == bt::Status::Success, "root " + std::string(bt::to_string(last.result.status)));
    const std::vector<std::string> expected{"disagreement",         "explanation_need", "explanation_strategy",
                                            "explanation_need",     "explanation_strategy", "evaluation"};
    std::string got;
    for (const auto& s : order) got += (got.empty() ? "" : ",") + s;
    o.require(order == expected, "activation order " + got);
    return o;
}

Outcome spec_fidelity() {
    Outcome o;
    const std::map<std::string, double> assessment{{"radiograph", 0.834}, {"loan", 0.99}, {"recidivism", 0.636}};
    std::size_t checked = 0;
    for (const auto& [name, value] : assessment) {
        const auto s = test::fixture_spec(name);
        const auto dump = spec::field_dump(s);
        const std::set<std::string> have(dump.begin(), dump.end());
        std::istringstream golden(test::read_file(test::source_path("tests/golden/" + name + ".fields.txt")));
        std::string line;
        std::size_t statements = 0;
        while (std::getline(golden, line)) {
            if (line.empty()) continue;
            ++checked;
            if (line.rfind("evaluation.questionnaire[", 0) == 0 && line.find("].text = ") != std::string::npos) ++statements;
            o.require(have.count(line) == 1, name + " missing: " + line);
        }
        o.require(statements == s.evaluation.questionnaire.size() && statements > 0, name + " questionnaire texts");
        o.require(std::abs(s.system.assessment.value - value) < 1e-12, name + " assessment value");
    }
    o.require(checked > 60, "golden files too small");
    if (o.pass) o.detail = std::to_string(checked) + " golden fields";
    return o;
}

Outcome policy_arithmetic() {
    Outcome o;
    const auto path = test::source_path("data/responses/synthetic.ndjson");
    // Hand-computed from the fixture: loan fractions 3/4, 2/4, 1/4 with one
    // partial session; recidivism 3/3, 2/3, 1/3. Threshold 0.5 in both.
    struct Expect {
        std::string spec;
        std::vector<double> fractions;
        std::size_t partial;
        bool pass;
        std::string summary;
    };
    const std::vector<Expect> expected{
        {"loan", {0.75, 0.5, 0.25}, 1, true, "pass (2/3 positive)"},
        {"recidivism", {1.0, 2.0 / 3.0, 1.0 / 3.0}, 0, false, "needs_modification (2/3 positive)"},
    };
    for (const auto& e : expected) {
        const auto v = service::aggregate_responses(test::fixture_spec(e.spec), service::load_responses(path, e.spec));
        o.require(v.pass == e.pass, e.spec + " verdict");
        o.require(v.partial == e.partial, e.spec + " partial count");
        o.require(v.summary() == e.summary, e.spec + " summary " + v.summary());
        o.require(v.questions.size() == e.fractions.size(), e.spec + " question count");
        for (std::size_t i = 0; i < v.questions.size() && i < e.fractions.size(); ++i) {
            o.require(v.questions[i].fraction == e.fractions[i], e.spec + " fraction " + v.questions[i].question_id);
        }
    }
    return o;
}

Outcome session_isolation() {
    Outcome o;
    const std::vector<std::pair<std::string, std::vector<bt::UserEvent>>> plan{
        {"radiograph", script_events("clinician.script")},
        {"radiograph", script_events("disagreement.script")},
        {"loan", script_events("loan.script")}};
    auto serial = test::make_manager();
    std::vector<service::Transcript> expected;
    for (const auto& [spec_id, events] : plan) {
        const auto id = serial->create_session(spec_id).session_id;
        for (const auto& e : events) serial->post_event(id, e);
        expected.push_back(serial->transcript(id));
    }
    auto mixed = test::make_manager();
    std::vector<std::string> ids;
    for (const auto& p : plan) ids.push_back(mixed->create_session(p.first).session_id);
    std::size_t longest = 0;
    for (const auto& p : plan) longest = std::max(longest, p.second.size());
    for (std::size_t step = 0; step < longest; ++step) {
        for (std::size_t s = 0; s < plan.size(); ++s) {
            if (step < plan[s].second.size()) mixed->post_event(ids[s], plan[s].second[step]);
        }
    }
    for (std::size_t s = 0; s < plan.size(); ++s) {
        auto got = mixed->transcript(ids[s]);
        got.session_id = expected[s].session_id;
        o.require(got == expected[s], "session " + std::to_string(s) + " differs");
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"transcript replay", transcript_replay},
        {"composite semantics oracle", composite_oracle},
        {"memory economy", memory_economy},
        {"dynamic personalization", personalization},
        {"disagreement scenario", disagreement_scenario},
        {"spec fidelity", spec_fidelity},
        {"policy arithmetic", policy_arithmetic},
        {"session isolation", session_isolation},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << (o.detail.empty() ? "" : " (" + o.detail + ")") << "\n";
    }
    return failures == 0 ? 0 : 1;
}
