#include "ee/dialogue/model.hpp"

#include <cmath>

#include "ee/bt/splice.hpp"
#include "ee/bt/text.hpp"
#include "ee/error.hpp"
#include "ee/spec/compile.hpp"

namespace ee::dialogue {

using namespace bt::build;
using bt::Choice;
using bt::Outcome;
using bt::QuestionPayload;
using bt::Write;

std::string_view to_string(Stage stage) noexcept {
    switch (stage) {
        case Stage::Greet: return "greet";
        case Stage::Persona: return "persona";
        case Stage::ExplanationNeed: return "explanation_need";
        case Stage::Strategy: return "explanation_strategy";
        case Stage::Disagreement: return "disagreement";
        case Stage::Evaluation: return "evaluation";
    }
    return "?";
}

std::string_view stage_root_id(Stage stage) noexcept {
    switch (stage) {
        case Stage::Greet: return "greet";
        case Stage::Persona: return "persona";
        case Stage::ExplanationNeed: return "explanation_need";
        case Stage::Strategy: return kStrategySlot;
        case Stage::Disagreement: return "disagreement";
        case Stage::Evaluation: return kEvalSlot;
    }
    return "?";
}

std::optional<Stage> stage_of(const bt::Tree& tree, std::string_view node_id) {
    for (Stage s : kStages) {
        if (tree.contains_in_subtree(stage_root_id(s), node_id)) return s;
    }
    return std::nullopt;
}

std::vector<std::string> flag_registry() {
    return {"greet_done",      "persona_done", "need_done", "strategy_done",
            "disagree_active", "eval_done",    "intent",    "target_confirmed",
            "satisfied"};
}

namespace {

bt::TreeNode gated(std::string id, const std::string& flag, std::vector<bt::TreeNode> work,
                   std::vector<Write> done) {
    return priority(id, {condition(id + ".gate", flag, true),
                         sequence(id + ".work", std::move(work), std::move(done))});
}

QuestionPayload persona_question(std::string prompt, std::string key) {
    QuestionPayload q;
    q.prompt = std::move(prompt);
    q.free_text = bt::FreeTextMode::Accept;
    q.answer_key = std::move(key);
    return q;
}

std::vector<Choice> need_choices(const std::vector<spec::ExplanationNeed>& needs) {
    std::vector<Choice> out;
    for (const auto& n : needs) {
        out.push_back(Choice{n.question, Outcome::Success, {Write{"intent", n.intent}}, {}});
    }
    return out;
}

QuestionPayload need_question(std::vector<Choice> choices) {
    QuestionPayload q;
    q.prompt =
        "Next I want to understand what kind of explanation you want. Please select a question below if it is "
        "similar to what you would like to know, or tell me what you would like to know.";
    q.repeat_prompt =
        "What else would you like to know? Please select a question below or tell me what you would like to know.";
    q.choices = std::move(choices);
    q.free_text = bt::FreeTextMode::MatchChoices;
    q.answer_key = "need.question";
    q.feedback_category = "unmet_need";
    q.unmatched_reply =
        "Thanks, I have noted your question so that future explanations can cover it. I cannot answer it yet.";
    return q;
}

bt::TreeNode greet_stage() {
    QuestionPayload consent;
    consent.prompt = "First I need to ask few questions to establish your persona. Would you like to proceed?";
    consent.choices = {Choice{"Yes", Outcome::Success, {}, {"affirm"}}, Choice{"No", Outcome::Failure, {}, {"deny"}}};
    consent.free_text = bt::FreeTextMode::Classify;
    consent.unmatched_reply = "Sorry, I did not catch that. Please answer yes or no.";
    return gated("greet", "greet_done",
                 {information("greet.hello", "Hello! I am the EE chatbot for the {system.name}."),
                  question("greet.consent", std::move(consent))},
                 {Write{"greet_done", true}});
}

bt::TreeNode persona_stage() {
    return gated("persona", "persona_done",
                 {question("persona.ai_knowledge",
                           persona_question("What is your level of knowledge on AI?", "persona.ai_knowledge")),
                  question("persona.domain_knowledge",
                           persona_question("What is your level of knowledge in the domain of {system.domain}?",
                                            "persona.domain_knowledge")),
                  information("persona.thanks", "Thank you for answering the questions.")},
                 {Write{"persona_done", true}});
}

bt::TreeNode need_stage() {
    // Until personalized, a single generic question keeps the intent flag
    // written.
    auto generic = std::vector<Choice>{
        Choice{"Why did the system produce this outcome?", Outcome::Success, {Write{"intent", "transparency"}}, {}}};

    QuestionPayload target;
    target.prompt =
        "Thanks. Can you confirm this is the {target.kind} for which you need an explanation? and the outcome you "
        "received is \"{target.outcome}\"?";
    target.attachments = {"{target.attachment}"};
    target.choices = {Choice{"Yes", Outcome::Success, {Write{"target_confirmed", true}}, {"affirm"}},
                      Choice{"No", Outcome::Reprompt, {}, {"deny"}}};
    target.free_text = bt::FreeTextMode::Classify;
    target.unmatched_reply = "Sorry, please answer yes or no.";

    return gated("explanation_need", "need_done",
                 {question("need.question", need_question(std::move(generic))),
                  condition("need.has_intent", "intent", false, true), question("need.target", std::move(target)),
                  information("need.ack", "Thanks, Let me find an explanation for you.")},
                 {Write{"need_done", true}, Write{std::string(spec::kMoreKey), false}});
}

bt::TreeNode strategy_stage() {
    return priority(std::string(kStrategySlot),
                    {condition("strategy.gate", "strategy_done", true),
                     condition("strategy.yield", "disagree_active", true),
                     sequence("strategy.run", {condition("strategy.target", "target_confirmed", true),
                                               placeholder(std::string(kStrategyBody))}),
                     information("strategy.exhausted",
                                 "I have shown you all the explanations I have for this question.",
                                 {Write{"strategy_done", true}})});
}

bt::TreeNode disagreement_stage() {
    QuestionPayload details;
    details.prompt = "I see... can you tell me a bit more about why you think so?";
    details.free_text = bt::FreeTextMode::Accept;
    details.answer_key = "disagreement.details";
    details.feedback_category = "disagreement";

    QuestionPayload clarify;
    clarify.prompt =
        "Thank you for that information. At the moment the system is correct {system.accuracy_pct}% of the time. "
        "We will use your feedback to improve the system.";
    clarify.choices = {Choice{"Okay", Outcome::Success, {}, {"satisfied"}},
                       Choice{"I have another question", Outcome::Failure, {Write{"disagree_active", false}},
                              {"new_question"}}};
    clarify.free_text = bt::FreeTextMode::Classify;
    clarify.unmatched_reply = "Sorry, I did not catch that.";

    return priority("disagreement",
                    {condition("disagreement.gate", "disagree_active", false),
                     sequence("disagreement.work",
                              {question("disagreement.details", std::move(details)),
                               question("disagreement.clarify", std::move(clarify))},
                              {Write{"disagree_active", false}, Write{"strategy_done", true}})});
}

bt::TreeNode evaluation_stage() {
    QuestionPayload entry;
    entry.prompt =
        "Anything else I can help with you today? Or would you like to take a few questions to evaluate your "
        "experience?";
    entry.repeat_prompt = "would you like to take the questionnaire now?";
    const std::string more(spec::kMoreKey);
    entry.choices = {
        Choice{"Take the questionnaire", Outcome::Success, {Write{"satisfied", true}}, {"satisfied", "affirm"}},
        Choice{"Show me more",
               Outcome::Failure,
               {Write{"strategy_done", false}, Write{"satisfied", false}, Write{more, false}},
               {"more_of_same"}},
        Choice{"I have another question",
               Outcome::Failure,
               {Write{"need_done", false}, Write{"strategy_done", false}, Write{"satisfied", false}},
               {"new_question"}},
        Choice{"Not now", Outcome::Reprompt, {}, {"deny"}},
    };
    entry.free_text = bt::FreeTextMode::Classify;
    entry.unmatched_reply = "Sorry, I did not catch that.";

    return gated(std::string(kEvalSlot), "eval_done",
                 {priority("eval.ready", {condition("eval.ready.done", "strategy_done", true),
                                          condition("eval.ready.satisfied", "satisfied", true)}),
                  question("eval.entry", std::move(entry)), placeholder(std::string(kEvalBody))},
                 {Write{"eval_done", true}});
}

std::string count_word(std::size_t n) {
    static const char* words[] = {"no", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};
    return n < std::size(words) ? words[n] : std::to_string(n);
}

void set_question(bt::TreeNode& root, std::string_view id, const std::function<void(QuestionPayload&)>& edit) {
    if (root.id == id) {
        edit(std::get<QuestionPayload>(root.payload));
        return;
    }
    for (auto& c : root.children) set_question(c, id, edit);
}

}  // namespace

EeTree build_abstract_tree() {
    auto root = sequence("root", {greet_stage(), persona_stage(), need_stage(), strategy_stage(),
                                  disagreement_stage(), evaluation_stage()});
    return EeTree{bt::Tree(std::move(root)), flag_registry()};
}

std::string answer_key(std::string_view question_id) { return "eval.answer." + std::string(question_id); }

bt::Tree build_evaluation_subtree(const spec::EvaluationStrategy& eval) {
    if (eval.questionnaire.empty()) throw Error(Errc::InvalidSpec, "empty questionnaire");
    const auto& first = eval.questionnaire.front().scale;
    bool shared_scale = true;
    for (const auto& q : eval.questionnaire) shared_scale = shared_scale && q.scale == first;

    std::string intro = "I have " + count_word(eval.questionnaire.size()) +
                        (eval.questionnaire.size() == 1 ? " statement" : " statements") +
                        ", for each one please answer with a response from the following.";
    if (shared_scale) {
        std::string options;
        for (auto it = first.rbegin(); it != first.rend(); ++it) options += (options.empty() ? " " : ", ") + *it;
        intro += options;
    } else {
        intro += " The options are listed with each statement.";
    }

    std::vector<bt::TreeNode> nodes;
    nodes.push_back(information("eval.intro", intro));
    for (std::size_t i = 0; i < eval.questionnaire.size(); ++i) {
        const auto& item = eval.questionnaire[i];
        QuestionPayload q;
        q.prompt = "Statement " + std::to_string(i + 1) + ": " + item.text;
        for (const auto& label : item.scale) q.choices.push_back(Choice{label, Outcome::Success, {}, {}});
        q.free_text = bt::FreeTextMode::MatchChoices;
        q.question_id = item.question_id;
        q.answer_key = answer_key(item.question_id);
        q.unmatched_reply = "Please answer with one of the options.";
        nodes.push_back(question("eval.q." + item.question_id, std::move(q)));
    }
    nodes.push_back(information("eval.thanks", "Thank you for your feedback. Have a nice day!"));
    return bt::Tree(sequence("eval.questionnaire", std::move(nodes)));
}

EeTree personalize(const EeTree& abstract, const spec::XaiSpec& spec, const bt::ExplainerCatalog& catalog) {
    bt::Tree strategy = spec::compile_strategy(spec, catalog);
    bt::Tree evaluation = build_evaluation_subtree(spec.evaluation);
    bt::Tree spliced = bt::splice_subtree(abstract.tree, kStrategyBody, strategy);
    spliced = bt::splice_subtree(spliced, kEvalBody, evaluation);

    bt::TreeNode root = spliced.root();
    std::vector<Choice> levels;
    for (auto level : spec::kKnowledgeLevels) levels.push_back(Choice{std::string(level), Outcome::Success, {}, {}});
    for (const char* id : {"persona.ai_knowledge", "persona.domain_knowledge"}) {
        set_question(root, id, [&](QuestionPayload& q) { q.choices = levels; });
    }
    set_question(root, "need.question", [&](QuestionPayload& q) { q.choices = need_choices(spec.needs); });
    return EeTree{bt::Tree(std::move(root)), abstract.flag_registry};
}

MatchResult match_question(const bt::UserEvent& event, const std::vector<spec::ExplanationNeed>& needs) {
    MatchResult r;
    if (const auto* ci = std::get_if<bt::ChoiceIndex>(&event)) {
        if (ci->index >= needs.size()) {
            throw Error(Errc::ChoiceOutOfRange, std::to_string(ci->index) + " >= " + std::to_string(needs.size()));
        }
        r.need = ci->index;
        r.intent = needs[ci->index].intent;
        return r;
    }
    const auto* ft = std::get_if<bt::FreeText>(&event);
    if (ft == nullptr) return r;
    const std::string norm = bt::normalize_text(ft->text);
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < needs.size(); ++i) {
        if (bt::normalize_text(needs[i].question) == norm) {
            if (hit) return r;  // ambiguous
            hit = i;
        }
    }
    if (hit) {
        r.need = *hit;
        r.intent = needs[*hit].intent;
    }
    return r;
}

bt::Blackboard seed_blackboard(const spec::XaiSpec& spec, const TargetDescriptor& target) {
    bt::Blackboard bb;
    bb.set("system.name", spec.system.name);
    bb.set("system.domain", spec.system.domain);
    bb.set("system.accuracy_pct", std::round(spec.system.assessment.value * 100.0));
    bb.set("target.schema", target.schema);
    bb.set("target.id", target.id);
    bb.set("target.kind", target.kind);
    bb.set("target.outcome", target.outcome);
    bb.set("target.attachment", target.attachment);
    return bb;
}

std::optional<std::size_t> recorded_answer(const bt::Blackboard& bb, std::string_view question_id) {
    auto v = bb.find(answer_key(question_id));
    if (!v) return std::nullopt;
    const auto* d = std::get_if<double>(&*v);
    if (d == nullptr) return std::nullopt;
    return static_cast<std::size_t>(*d);
}

}  // namespace ee::dialogue
