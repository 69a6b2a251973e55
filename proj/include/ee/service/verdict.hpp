#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ee/spec/types.hpp"

namespace ee::service {

/// question_id -> chosen option index
using Responses = std::map<std::string, std::size_t>;

struct QuestionVerdict {
    std::string question_id;
    std::size_t positive = 0;
    std::size_t respondents = 0;
    double fraction = 0.0;
    bool positive_question = false;
};

struct StrategyVerdict {
    std::string spec_id;
    std::vector<QuestionVerdict> questions;
    bool pass = false;
    std::size_t respondents = 0;
    /// Sessions that answered only part of the questionnaire; excluded.
    std::size_t partial = 0;
    std::size_t positive_count = 0;
    std::size_t policy_size = 0;

    std::string result() const { return pass ? "pass" : "needs_modification"; }
    /// e.g. "pass (2/3 positive)"
    std::string summary() const;
};

/// Throws NoEvaluations when no response set answers every question.
StrategyVerdict aggregate_responses(const spec::XaiSpec& spec, const std::vector<Responses>& responses);

nlohmann::json to_json(const StrategyVerdict& v);

/// Line-delimited {"spec_id", "session_id", "answers": {qid: option}}; lines
/// for other specs are skipped.
std::vector<Responses> load_responses(const std::string& path, const std::string& spec_id);

}  // namespace ee::service
