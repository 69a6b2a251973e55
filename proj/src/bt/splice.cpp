#include "ee/bt/splice.hpp"

#include <algorithm>
#include <set>

#include "ee/error.hpp"

namespace ee::bt {

namespace {

void ids_outside(const TreeNode& node, std::string_view skip, std::set<std::string>& out) {
    if (node.id == skip) return;
    out.insert(node.id);
    for (const auto& c : node.children) ids_outside(c, skip, out);
}

bool replace(TreeNode& node, std::string_view target, const TreeNode& replacement) {
    for (auto& child : node.children) {
        if (child.id == target) {
            child = replacement;
            return true;
        }
        if (replace(child, target, replacement)) return true;
    }
    return false;
}

void diff(const TreeNode& l, const TreeNode& r, std::vector<DiffEntry>& out) {
    auto report = [&](const char* field) { out.push_back({l.id, r.id, field}); };
    if (l.id != r.id) report("id");
    if (l.kind != r.kind) report("kind");
    if (l.label != r.label) report("label");
    if (!(l.payload == r.payload)) report("payload");
    if (l.on_success != r.on_success) report("on_success");
    if (l.children.size() != r.children.size()) report("children");
    const std::size_t n = std::min(l.children.size(), r.children.size());
    for (std::size_t i = 0; i < n; ++i) diff(l.children[i], r.children[i], out);
}

}  // namespace

Tree splice_subtree(const Tree& tree, std::string_view target_id, const Tree& replacement) {
    if (tree.find(target_id) == nullptr) throw Error(Errc::UnknownTarget, std::string(target_id));
    if (!replacement.duplicate_ids().empty()) {
        throw Error(Errc::IdCollision, replacement.duplicate_ids().front());
    }
    std::set<std::string> kept;
    ids_outside(tree.root(), target_id, kept);
    for (const auto& id : replacement.ids()) {
        if (kept.contains(id)) throw Error(Errc::IdCollision, id);
    }
    if (tree.root().id == target_id) return Tree(replacement.root());
    TreeNode root = tree.root();
    replace(root, target_id, replacement.root());
    return Tree(std::move(root));
}

std::vector<DiffEntry> structural_diff(const TreeNode& left, const TreeNode& right) {
    std::vector<DiffEntry> out;
    diff(left, right, out);
    return out;
}

}  // namespace ee::bt
