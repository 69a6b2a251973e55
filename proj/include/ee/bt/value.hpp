#pragma once

#include <string>
#include <variant>

namespace ee::bt {

/// Scalar stored on the blackboard and compared by Condition nodes.
using Value = std::variant<bool, double, std::string>;

inline Value make_value(const char* s) { return Value{std::string(s)}; }

std::string to_string(const Value& v);

}  // namespace ee::bt
