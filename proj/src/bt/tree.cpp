#include "ee/bt/tree.hpp"

#include <algorithm>

namespace ee::bt {

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Sequence: return "sequence";
        case NodeKind::Priority: return "priority";
        case NodeKind::Condition: return "condition";
        case NodeKind::QuestionAnswer: return "question";
        case NodeKind::Information: return "information";
        case NodeKind::Explainer: return "explainer";
    }
    return "?";
}

bool is_composite(NodeKind kind) noexcept {
    return kind == NodeKind::Sequence || kind == NodeKind::Priority;
}

namespace {

void collect_condition_keys(const TreeNode& node, std::vector<std::string>& keys) {
    if (node.kind == NodeKind::Condition) {
        const auto& key = std::get<ConditionPayload>(node.payload).key;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& child : node.children) collect_condition_keys(child, keys);
}

}  // namespace

Tree::Tree(TreeNode root) : root_(std::make_shared<const TreeNode>(std::move(root))) {
    index(*root_, nullptr, {});
}

void Tree::index(const TreeNode& node, const TreeNode* parent, const std::vector<std::string>& guards) {
    order_.push_back(node.id);
    if (index_.contains(node.id)) {
        duplicates_.push_back(node.id);
    } else {
        index_.emplace(node.id, IndexEntry{&node, parent, guards});
    }
    std::vector<std::string> child_guards = guards;
    for (const auto& child : node.children) {
        index(child, &node, child_guards);
        collect_condition_keys(child, child_guards);
    }
}

const TreeNode* Tree::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : it->second.node;
}

const TreeNode* Tree::parent(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : it->second.parent;
}

const std::vector<std::string>& Tree::guards(std::string_view id) const {
    static const std::vector<std::string> none;
    auto it = index_.find(std::string(id));
    return it == index_.end() ? none : it->second.guards;
}

std::vector<std::string> Tree::path_to(std::string_view id) const {
    std::vector<std::string> path;
    for (const TreeNode* p = parent(id); p != nullptr; p = parent(p->id)) path.push_back(p->id);
    std::reverse(path.begin(), path.end());
    return path;
}

bool Tree::contains_in_subtree(std::string_view ancestor, std::string_view id) const {
    if (ancestor == id) return find(id) != nullptr;
    for (const TreeNode* p = parent(id); p != nullptr; p = parent(p->id)) {
        if (p->id == ancestor) return true;
    }
    return false;
}

namespace build {

TreeNode sequence(std::string id, std::vector<TreeNode> children, std::vector<Write> on_success) {
    return TreeNode{std::move(id), NodeKind::Sequence, {}, std::move(children), {}, std::move(on_success)};
}

TreeNode priority(std::string id, std::vector<TreeNode> children, std::vector<Write> on_success) {
    return TreeNode{std::move(id), NodeKind::Priority, {}, std::move(children), {}, std::move(on_success)};
}

TreeNode condition(std::string id, std::string key, Value expected, bool negate) {
    return TreeNode{std::move(id), NodeKind::Condition, {}, {},
                    ConditionPayload{std::move(key), std::move(expected), negate}, {}};
}

TreeNode information(std::string id, std::string text, std::vector<Write> on_success) {
    return TreeNode{std::move(id), NodeKind::Information, {}, {},
                    InformationPayload{std::move(text), {}, false}, std::move(on_success)};
}

TreeNode placeholder(std::string id) {
    std::string text = "[" + id + "]";
    return TreeNode{std::move(id), NodeKind::Information, {}, {}, InformationPayload{std::move(text), {}, true}, {}};
}

TreeNode question(std::string id, QuestionPayload payload) {
    return TreeNode{std::move(id), NodeKind::QuestionAnswer, {}, {}, std::move(payload), {}};
}

TreeNode explainer(std::string id, ExplainerPayload payload) {
    return TreeNode{std::move(id), NodeKind::Explainer, {}, {}, std::move(payload), {}};
}

}  // namespace build

}  // namespace ee::bt
