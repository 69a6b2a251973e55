#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ee/explain/payload.hpp"

namespace ee::bt {

struct FreeText {
    std::string text;
    bool operator==(const FreeText&) const = default;
};

struct ChoiceIndex {
    std::size_t index = 0;
    bool operator==(const ChoiceIndex&) const = default;
};

struct QuestionnaireAnswer {
    std::string question_id;
    std::size_t option = 0;
    bool operator==(const QuestionnaireAnswer&) const = default;
};

using UserEvent = std::variant<FreeText, ChoiceIndex, QuestionnaireAnswer>;

struct Utterance {
    std::string node_id;
    std::string text;
    std::vector<std::string> choices;
    std::vector<std::string> attachments;
    bool operator==(const Utterance&) const = default;
};

struct ExplainerInvocation {
    std::string node_id;
    std::string explainer_id;
    explain::Target target;
    explain::ExplanationPayload result;
    bool operator==(const ExplainerInvocation&) const = default;
};

struct FeedbackRecorded {
    std::string node_id;
    std::string category;
    std::string text;
    bool operator==(const FeedbackRecorded&) const = default;
};

using Effect = std::variant<Utterance, ExplainerInvocation, FeedbackRecorded>;

const std::string& effect_node(const Effect& effect);

}  // namespace ee::bt
