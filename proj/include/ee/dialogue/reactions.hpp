#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ee/bt/engine.hpp"

namespace ee::dialogue {

inline constexpr std::string_view kReactions[] = {"satisfied", "more_of_same", "new_question",
                                                  "disagree",  "affirm",       "deny"};

struct PhraseEntry {
    std::string phrase;
    std::string reaction;
};

/// Ordered phrase table: the first entry whose reaction is accepted and whose
/// phrase occurs as whole words in the normalized text wins.
class PhraseClassifier : public bt::ReactionClassifier {
public:
    explicit PhraseClassifier(std::vector<PhraseEntry> table);

    static PhraseClassifier from_json_text(std::string_view text);
    static PhraseClassifier load(const std::string& path);
    /// The table shipped in data/phrases.json, compiled in.
    static const PhraseClassifier& builtin();

    std::optional<std::string> classify(std::string_view text, std::span<const std::string> accepted) const override;

    const std::vector<PhraseEntry>& table() const noexcept { return table_; }

private:
    std::vector<PhraseEntry> table_;
};

}  // namespace ee::dialogue
