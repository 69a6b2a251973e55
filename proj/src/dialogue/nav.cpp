#include "ee/dialogue/nav.hpp"

#include "ee/error.hpp"

namespace ee::dialogue {

const std::vector<NavRule>& nav_rules() {
    static const std::vector<NavRule> rules = {
        {Stage::Strategy, Stage::ExplanationNeed, "new_question", {bt::Write{"need_done", false}}},
        {Stage::Disagreement, Stage::ExplanationNeed, "new_question", {bt::Write{"need_done", false}}},
        {Stage::Strategy,
         Stage::Evaluation,
         "satisfied",
         {bt::Write{"satisfied", true}, bt::Write{"strategy_done", true}}},
        {Stage::Strategy, Stage::Disagreement, "disagree", {bt::Write{"disagree_active", true}}},
    };
    return rules;
}

bool has_nav_rules(Stage stage) {
    for (const auto& r : nav_rules()) {
        if (r.from == stage) return true;
    }
    return false;
}

std::vector<bt::Write> apply_nav_rules(const NavContext& ctx) {
    if (!has_nav_rules(ctx.stage)) throw Error(Errc::UnknownContext, std::string(to_string(ctx.stage)));
    std::vector<bt::Write> out;
    for (const auto& r : nav_rules()) {
        if (r.from == ctx.stage && r.reaction == ctx.reaction) out.insert(out.end(), r.action.begin(), r.action.end());
    }
    return out;
}

std::function<void(const bt::Resolution&, bt::Blackboard&)> nav_hook(const bt::Tree& tree) {
    return [&tree](const bt::Resolution& res, bt::Blackboard& bb) {
        if (res.status == bt::Status::Waiting || res.reactions.empty()) return;
        auto stage = stage_of(tree, res.node);
        if (!stage || !has_nav_rules(*stage)) return;
        for (const auto& w : apply_nav_rules({*stage, res.reactions.front()})) bb.set(w.key, w.value);
    };
}

}  // namespace ee::dialogue
