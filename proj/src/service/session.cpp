#include "ee/service/session.hpp"

#include "ee/dialogue/nav.hpp"
#include "ee/error.hpp"
#include "ee/service/wire.hpp"

namespace ee::service {

std::string_view to_string(SessionStatus s) noexcept {
    switch (s) {
        case SessionStatus::Active: return "active";
        case SessionStatus::Completed: return "completed";
        case SessionStatus::Aborted: return "aborted";
        case SessionStatus::Unevaluated: return "unevaluated";
    }
    return "?";
}

namespace {

bt::TickContext make_context(const LoadedSpec& spec, const bt::ExplainerSource& explainers,
                             const bt::ReactionClassifier& classifier) {
    bt::TickContext ctx;
    ctx.explainers = &explainers;
    ctx.classifier = &classifier;
    ctx.after_resolution = dialogue::nav_hook(spec.tree.tree);
    return ctx;
}

}  // namespace

Session::Session(std::string id, std::shared_ptr<const LoadedSpec> spec, const bt::ExplainerSource& explainers,
                 const bt::ReactionClassifier& classifier, std::string created_at)
    : last_activity(std::chrono::steady_clock::now()),
      spec_(std::move(spec)),
      runner_(spec_->tree.tree, make_context(*spec_, explainers, classifier),
              dialogue::seed_blackboard(spec_->spec, spec_->target)) {
    transcript_.session_id = std::move(id);
    transcript_.spec_id = spec_->spec.spec_id;
    transcript_.created_at = std::move(created_at);
}

Turn Session::start() {
    auto result = runner_.start();
    std::vector<TranscriptEntry> entries;
    return finish(result, std::move(entries));
}

Turn Session::post(const bt::UserEvent& event) {
    if (status_ != SessionStatus::Active) throw Error(Errc::SessionClosed, id() + " is " + std::string(to_string(status_)));
    if (!runner_.waiting()) throw Error(Errc::SessionNotWaiting, id());
    auto result = runner_.deliver(event);
    messages_.push_back(user_event_message(event));
    std::vector<TranscriptEntry> entries;
    entries.push_back(user_entry(event, result));
    return finish(result, std::move(entries));
}

Turn Session::finish(const bt::TickResult& result, std::vector<TranscriptEntry> entries) {
    Turn turn;
    turn.result = result;
    turn.effects = result.effects;
    for (const auto& effect : result.effects) {
        entries.push_back(bot_entry(effect));
        if (const auto* u = std::get_if<bt::Utterance>(&effect)) turn.messages.push_back(bot_utterance(*u));
    }
    for (auto& e : entries) {
        e.seq = transcript_.entries.size();
        transcript_.entries.push_back(std::move(e));
    }
    if (result.status == bt::Status::Success) {
        status_ = SessionStatus::Completed;
    } else if (result.status == bt::Status::Failure) {
        status_ = SessionStatus::Aborted;
    }
    if (status_ != SessionStatus::Active) collect_responses();
    transcript_.status = std::string(to_string(status_));
    turn.status = status_;
    turn.waiting = runner_.waiting().has_value() && status_ == SessionStatus::Active;
    turn.messages.push_back(session_state(id(), transcript_.status, turn.waiting));
    messages_.insert(messages_.end(), turn.messages.begin(), turn.messages.end());
    last_activity = std::chrono::steady_clock::now();
    return turn;
}

Turn Session::close() {
    Turn turn;
    if (status_ == SessionStatus::Active) {
        const auto& waiting = runner_.waiting();
        const bool in_evaluation =
            waiting && dialogue::stage_of(spec_->tree.tree, *waiting) == dialogue::Stage::Evaluation;
        status_ = in_evaluation ? SessionStatus::Unevaluated : SessionStatus::Aborted;
        collect_responses();
        transcript_.status = std::string(to_string(status_));
        turn.messages.push_back(session_state(id(), transcript_.status, false));
        messages_.insert(messages_.end(), turn.messages.begin(), turn.messages.end());
    }
    turn.status = status_;
    return turn;
}

void Session::collect_responses() {
    for (const auto& q : spec_->spec.evaluation.questionnaire) {
        if (auto a = dialogue::recorded_answer(runner_.blackboard(), q.question_id)) {
            transcript_.responses[q.question_id] = *a;
        }
    }
}

std::vector<TranscriptEntry> Session::take_new_entries() {
    std::vector<TranscriptEntry> out(transcript_.entries.begin() + static_cast<std::ptrdiff_t>(persisted_),
                                     transcript_.entries.end());
    persisted_ = transcript_.entries.size();
    return out;
}

}  // namespace ee::service
