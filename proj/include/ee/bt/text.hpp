#pragma once

#include <string>
#include <string_view>

#include "ee/bt/blackboard.hpp"

namespace ee::bt {

/// Lowercase, drop punctuation, collapse runs of whitespace.
std::string normalize_text(std::string_view text);

/// Replaces `{key}` with the blackboard value of `key`; unknown keys are left
/// untouched.
std::string render_template(std::string_view text, const Blackboard& blackboard);

}  // namespace ee::bt
