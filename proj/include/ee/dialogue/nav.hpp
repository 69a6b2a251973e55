#pragma once

#include <string>
#include <vector>

#include "ee/bt/engine.hpp"
#include "ee/dialogue/model.hpp"

namespace ee::dialogue {

struct NavRule {
    Stage from;
    Stage to;
    std::string reaction;
    std::vector<bt::Write> action;
};

const std::vector<NavRule>& nav_rules();

struct NavContext {
    Stage stage;
    std::string reaction;
};

/// Flag mutations for a classified reaction inside the active stage. Only
/// the strategy and disagreement stages carry rules; any other stage throws
/// UnknownContext.
std::vector<bt::Write> apply_nav_rules(const NavContext& ctx);

/// True if `stage` has navigation rules at all.
bool has_nav_rules(Stage stage);

/// Engine hook: applies the rules for a resolved event before the traversal.
std::function<void(const bt::Resolution&, bt::Blackboard&)> nav_hook(const bt::Tree& tree);

}  // namespace ee::dialogue
