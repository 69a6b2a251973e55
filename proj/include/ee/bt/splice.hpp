#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ee/bt/tree.hpp"

namespace ee::bt {

/// Returns a copy of `tree` where node `target_id` is replaced by the root of
/// `replacement`. Throws UnknownTarget / IdCollision.
Tree splice_subtree(const Tree& tree, std::string_view target_id, const Tree& replacement);

struct DiffEntry {
    std::string left;   // node id in the left tree
    std::string right;  // node id at the same position in the right tree
    std::string field;  // id, kind, label, payload, on_success, children
    bool operator==(const DiffEntry&) const = default;
};

/// Positional structural comparison: nodes are paired by their child index
/// path, and every pair that differs in one of its own fields is reported.
std::vector<DiffEntry> structural_diff(const TreeNode& left, const TreeNode& right);

}  // namespace ee::bt
