#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ee/bt/value.hpp"

namespace ee::bt {

enum class NodeKind { Sequence, Priority, Condition, QuestionAnswer, Information, Explainer };

std::string_view to_string(NodeKind kind) noexcept;
bool is_composite(NodeKind kind) noexcept;

struct Write {
    std::string key;
    Value value;
    bool operator==(const Write&) const = default;
};

/// What a user reply does to the node that asked for it.
enum class Outcome { Success, Failure, Reprompt };

struct Choice {
    std::string label;
    Outcome outcome = Outcome::Success;
    std::vector<Write> writes;
    /// Reaction tags this button stands for; free text classified into one of
    /// these tags selects the button.
    std::vector<std::string> reactions;
    bool operator==(const Choice&) const = default;
};

enum class FreeTextMode {
    None,          // buttons only
    MatchChoices,  // normalized equality against button labels
    Classify,      // label equality, then the reaction phrase table
    Accept,        // any text is an answer
};

struct ConditionPayload {
    std::string key;
    Value expected{true};
    bool negate = false;
    bool operator==(const ConditionPayload&) const = default;
};

struct QuestionPayload {
    std::string prompt;
    std::string repeat_prompt;
    std::vector<Choice> choices;
    FreeTextMode free_text = FreeTextMode::None;
    std::string answer_key;
    Outcome accept_outcome = Outcome::Success;
    std::vector<Write> accept_writes;
    std::string feedback_category;
    std::string unmatched_reply;
    std::string question_id;
    std::vector<std::string> attachments;
    bool operator==(const QuestionPayload&) const = default;
};

struct InformationPayload {
    std::string text;
    std::vector<std::string> attachments;
    bool placeholder = false;
    bool operator==(const InformationPayload&) const = default;
};

struct ExplainerPayload {
    std::string explainer_id;
    std::string intent;
    std::map<std::string, Value> params;
    std::string target_key = "target";
    std::string utterance;
    std::string repeat_utterance;
    QuestionPayload probe;
    std::string executed_key;
    bool operator==(const ExplainerPayload&) const = default;
};

using Payload =
    std::variant<std::monostate, ConditionPayload, QuestionPayload, InformationPayload, ExplainerPayload>;

struct TreeNode {
    std::string id;
    NodeKind kind = NodeKind::Sequence;
    std::string label;
    std::vector<TreeNode> children;
    Payload payload;
    /// Applied when a composite (or Information leaf) reports Success.
    std::vector<Write> on_success;

    bool operator==(const TreeNode&) const = default;
};

/// Immutable, shareable behaviour tree with an id index.
///
/// Besides id lookup the index precomputes, for every node, its guard keys:
/// the blackboard keys read by Condition nodes anywhere inside the left
/// siblings of the node and of its ancestors, i.e. every condition a tick may
/// evaluate before reaching the node. Leaf latches are invalidated when a
/// guard changes.
class Tree {
public:
    explicit Tree(TreeNode root);

    const TreeNode& root() const noexcept { return *root_; }
    const TreeNode* find(std::string_view id) const;
    const TreeNode* parent(std::string_view id) const;
    const std::vector<std::string>& guards(std::string_view id) const;
    /// Ancestor ids from the root down to (excluding) `id`.
    std::vector<std::string> path_to(std::string_view id) const;
    bool contains_in_subtree(std::string_view ancestor, std::string_view id) const;

    const std::vector<std::string>& duplicate_ids() const noexcept { return duplicates_; }
    std::size_t size() const noexcept { return order_.size(); }
    /// Node ids in pre-order.
    const std::vector<std::string>& ids() const noexcept { return order_; }

    bool operator==(const Tree& other) const { return root() == other.root(); }

private:
    struct IndexEntry {
        const TreeNode* node = nullptr;
        const TreeNode* parent = nullptr;
        std::vector<std::string> guards;
    };
    void index(const TreeNode& node, const TreeNode* parent, const std::vector<std::string>& guards);

    std::shared_ptr<const TreeNode> root_;
    std::unordered_map<std::string, IndexEntry> index_;
    std::vector<std::string> order_;
    std::vector<std::string> duplicates_;
};

namespace build {

TreeNode sequence(std::string id, std::vector<TreeNode> children, std::vector<Write> on_success = {});
TreeNode priority(std::string id, std::vector<TreeNode> children, std::vector<Write> on_success = {});
TreeNode condition(std::string id, std::string key, Value expected = true, bool negate = false);
TreeNode information(std::string id, std::string text, std::vector<Write> on_success = {});
TreeNode placeholder(std::string id);
TreeNode question(std::string id, QuestionPayload payload);
TreeNode explainer(std::string id, ExplainerPayload payload);

}  // namespace build

}  // namespace ee::bt
