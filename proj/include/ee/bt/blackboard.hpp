#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ee/bt/value.hpp"

namespace ee::bt {

/// Per-session key/value memory shared by every node of a tree.
///
/// Each write bumps a monotone revision. Entries remember both the revision of
/// their last write and the revision at which their value last changed; action
/// leaf latches compare against the latter to decide whether a guard flag has
/// moved since the latch was taken.
class Blackboard {
public:
    struct Entry {
        Value value;
        std::uint64_t written_at = 0;
        std::uint64_t changed_at = 0;
    };

    /// Absent keys read as `false`.
    Value get(std::string_view key) const;
    std::optional<Value> find(std::string_view key) const;
    bool contains(std::string_view key) const { return find(key).has_value(); }

    void set(std::string_view key, Value value);

    std::uint64_t revision() const noexcept { return revision_; }
    std::uint64_t written_at(std::string_view key) const;
    std::uint64_t changed_at(std::string_view key) const;

    const std::map<std::string, Entry, std::less<>>& entries() const noexcept { return entries_; }

    bool operator==(const Blackboard&) const = default;

private:
    std::map<std::string, Entry, std::less<>> entries_;
    std::uint64_t revision_ = 0;
};

inline Value get_flag(const Blackboard& bb, std::string_view key) { return bb.get(key); }
inline void set_flag(Blackboard& bb, std::string_view key, Value value) { bb.set(key, std::move(value)); }

}  // namespace ee::bt
