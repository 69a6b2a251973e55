#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ee/bt/engine.hpp"
#include "ee/dialogue/model.hpp"
#include "ee/service/transcript.hpp"
#include "ee/service/verdict.hpp"
#include "ee/spec/types.hpp"

namespace ee::service {

enum class SessionStatus { Active, Completed, Aborted, Unevaluated };

std::string_view to_string(SessionStatus s) noexcept;

/// A validated spec with its personalized tree, shared by every session.
struct LoadedSpec {
    spec::XaiSpec spec;
    dialogue::EeTree tree;
    dialogue::TargetDescriptor target;
};

/// Effects of one call plus the wire messages they map to.
struct Turn {
    bt::TickResult result;
    std::vector<bt::Effect> effects;
    std::vector<nlohmann::json> messages;
    SessionStatus status = SessionStatus::Active;
    bool waiting = false;
};

/// One conversation episode. Not thread-safe by itself; the manager
/// serializes access through mutex().
class Session {
public:
    Session(std::string id, std::shared_ptr<const LoadedSpec> spec, const bt::ExplainerSource& explainers,
            const bt::ReactionClassifier& classifier, std::string created_at);

    Turn start();
    /// Throws SessionClosed, SessionNotWaiting, ChoiceOutOfRange.
    Turn post(const bt::UserEvent& event);
    /// Ends an episode that did not complete: unevaluated if it stopped inside
    /// the evaluation stage, aborted otherwise.
    Turn close();

    const std::string& id() const noexcept { return transcript_.session_id; }
    const std::string& spec_id() const noexcept { return transcript_.spec_id; }
    SessionStatus status() const noexcept { return status_; }
    bool waiting() const noexcept { return runner_.waiting().has_value(); }
    const std::optional<std::string>& waiting_node() const noexcept { return runner_.waiting(); }
    const Transcript& transcript() const noexcept { return transcript_; }
    const bt::Blackboard& blackboard() const noexcept { return runner_.blackboard(); }
    const LoadedSpec& loaded() const noexcept { return *spec_; }
    /// Entries appended since the last call (for incremental persistence).
    std::vector<TranscriptEntry> take_new_entries();

    /// Every wire message produced so far, in order.
    const std::vector<nlohmann::json>& messages() const noexcept { return messages_; }

    std::mutex& mutex() noexcept { return mutex_; }
    std::condition_variable& changed() noexcept { return changed_; }

    std::chrono::steady_clock::time_point last_activity;

private:
    Turn finish(const bt::TickResult& result, std::vector<TranscriptEntry> entries);
    void collect_responses();

    std::shared_ptr<const LoadedSpec> spec_;
    bt::Runner runner_;
    Transcript transcript_;
    SessionStatus status_ = SessionStatus::Active;
    std::vector<nlohmann::json> messages_;
    std::size_t persisted_ = 0;
    std::mutex mutex_;
    std::condition_variable changed_;
};

}  // namespace ee::service
