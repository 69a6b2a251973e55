#include "ee/bt/blackboard.hpp"

#include <cmath>
#include <sstream>

namespace ee::bt {

std::string to_string(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    const double d = std::get<double>(v);
    if (std::floor(d) == d && std::abs(d) < 1e15) {
        return std::to_string(static_cast<long long>(d));
    }
    std::ostringstream os;
    os << d;
    return os.str();
}

Value Blackboard::get(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? Value{false} : it->second.value;
}

std::optional<Value> Blackboard::find(std::string_view key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

void Blackboard::set(std::string_view key, Value value) {
    ++revision_;
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        // An absent key already reads as false, so creating it with false is
        // not a change of the observable value.
        const std::uint64_t changed = value == Value{false} ? 0 : revision_;
        entries_.emplace(std::string(key), Entry{std::move(value), revision_, changed});
        return;
    }
    if (!(it->second.value == value)) {
        it->second.value = std::move(value);
        it->second.changed_at = revision_;
    }
    it->second.written_at = revision_;
}

std::uint64_t Blackboard::written_at(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.written_at;
}

std::uint64_t Blackboard::changed_at(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.changed_at;
}

}  // namespace ee::bt
