#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ee/bt/blackboard.hpp"
#include "ee/bt/engine.hpp"
#include "ee/bt/tree.hpp"
#include "ee/spec/types.hpp"

namespace ee::dialogue {

enum class Stage { Greet, Persona, ExplanationNeed, Strategy, Disagreement, Evaluation };

std::string_view to_string(Stage stage) noexcept;
/// Root child id of each stage, in root order.
std::string_view stage_root_id(Stage stage) noexcept;
inline constexpr Stage kStages[] = {Stage::Greet,    Stage::Persona,      Stage::ExplanationNeed,
                                    Stage::Strategy, Stage::Disagreement, Stage::Evaluation};

/// Stage whose sub-tree contains `node_id`.
std::optional<Stage> stage_of(const bt::Tree& tree, std::string_view node_id);

inline constexpr std::string_view kStrategySlot = "strategy_slot";
inline constexpr std::string_view kEvalSlot = "eval_slot";
inline constexpr std::string_view kStrategyBody = "strategy_slot.body";
inline constexpr std::string_view kEvalBody = "eval_slot.body";

struct EeTree {
    bt::Tree tree;
    std::vector<std::string> flag_registry;
};

std::vector<std::string> flag_registry();

EeTree build_abstract_tree();

/// Sequence of an intro, one question per questionnaire item and a thank-you.
bt::Tree build_evaluation_subtree(const spec::EvaluationStrategy& eval);

/// Splices the compiled strategy and the evaluation sub-tree into the slots
/// and fills the persona and need questions from the spec. Throws InvalidSpec.
EeTree personalize(const EeTree& abstract, const spec::XaiSpec& spec, const bt::ExplainerCatalog& catalog);

struct MatchResult {
    std::optional<std::size_t> need;
    std::optional<std::string> intent;
    bool matched() const { return intent.has_value(); }
};

MatchResult match_question(const bt::UserEvent& event, const std::vector<spec::ExplanationNeed>& needs);

/// Entity the session is about, as shown in the target confirmation.
struct TargetDescriptor {
    std::string schema;
    std::string id;
    std::string kind;
    std::string outcome;
    std::string attachment;
};

/// Blackboard keys the dialogue templates read: system.*, target.*.
bt::Blackboard seed_blackboard(const spec::XaiSpec& spec, const TargetDescriptor& target);

/// Questionnaire answers (option indices) recorded on a blackboard.
std::optional<std::size_t> recorded_answer(const bt::Blackboard& bb, std::string_view question_id);
std::string answer_key(std::string_view question_id);

}  // namespace ee::dialogue
