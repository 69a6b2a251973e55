#include "ee/service/verdict.hpp"

#include <algorithm>
#include <fstream>

#include "ee/error.hpp"

namespace ee::service {

std::string StrategyVerdict::summary() const {
    return result() + " (" + std::to_string(positive_count) + "/" + std::to_string(policy_size) + " positive)";
}

StrategyVerdict aggregate_responses(const spec::XaiSpec& spec, const std::vector<Responses>& responses) {
    const auto& eval = spec.evaluation;
    StrategyVerdict v;
    v.spec_id = spec.spec_id;

    std::vector<const Responses*> complete;
    for (const auto& r : responses) {
        const bool all = std::all_of(eval.questionnaire.begin(), eval.questionnaire.end(),
                                     [&](const auto& q) { return r.contains(q.question_id); });
        if (all) {
            complete.push_back(&r);
        } else if (!r.empty()) {
            ++v.partial;
        }
    }
    if (complete.empty()) throw Error(Errc::NoEvaluations, spec.spec_id);
    v.respondents = complete.size();

    for (const auto& q : eval.questionnaire) {
        QuestionVerdict qv;
        qv.question_id = q.question_id;
        qv.respondents = complete.size();
        for (const auto* r : complete) {
            const std::size_t option = r->at(q.question_id);
            if (option < q.scale.size() &&
                std::find(q.positive_set.begin(), q.positive_set.end(), q.scale[option]) != q.positive_set.end()) {
                ++qv.positive;
            }
        }
        qv.fraction = static_cast<double>(qv.positive) / static_cast<double>(qv.respondents);
        qv.positive_question = qv.fraction >= eval.policy.positive_threshold;
        v.questions.push_back(qv);
    }

    v.policy_size = eval.policy.questions.size();
    for (const auto& id : eval.policy.questions) {
        auto it = std::find_if(v.questions.begin(), v.questions.end(),
                               [&](const QuestionVerdict& q) { return q.question_id == id; });
        if (it != v.questions.end() && it->positive_question) ++v.positive_count;
    }
    v.pass = eval.policy.kind == spec::PolicyKind::AtLeastKofN ? v.positive_count >= eval.policy.k
                                                               : v.positive_count == v.policy_size;
    return v;
}

nlohmann::json to_json(const StrategyVerdict& v) {
    auto qs = nlohmann::json::array();
    for (const auto& q : v.questions) {
        qs.push_back({{"question_id", q.question_id},
                      {"positive", q.positive},
                      {"respondents", q.respondents},
                      {"fraction", q.fraction},
                      {"positive_question", q.positive_question}});
    }
    return {{"spec_id", v.spec_id},     {"result", v.result()},         {"summary", v.summary()},
            {"questions", qs},          {"respondents", v.respondents}, {"partial", v.partial},
            {"positive_count", v.positive_count}, {"policy_size", v.policy_size}};
}

std::vector<Responses> load_responses(const std::string& path, const std::string& spec_id) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    std::vector<Responses> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            auto j = nlohmann::json::parse(line);
            if (j.at("spec_id").get<std::string>() != spec_id) continue;
            out.push_back(j.at("answers").get<Responses>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::SyntaxError, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ee::service
