#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ee/explain/corpus.hpp"
#include "ee/explain/registry.hpp"
#include "ee/service/session.hpp"

namespace ee::service {

struct ManagerConfig {
    /// Transcripts, index and feedback files go here; empty keeps everything
    /// in memory.
    std::string data_dir;
    std::chrono::milliseconds idle_timeout{0};
    std::function<std::chrono::system_clock::time_point()> clock;
    std::function<std::string()> next_id;
};

struct SessionSummary {
    std::string session_id;
    std::string spec_id;
    std::string status;
    std::string created_at;
    std::size_t entries = 0;
};

nlohmann::json to_json(const SessionSummary& s);

struct Created {
    std::string session_id;
    Turn turn;
};

std::string iso8601(std::chrono::system_clock::time_point t);

/// Owns the loaded specs and every live session. Sessions share nothing but
/// the immutable specs, trees and fixtures; each has its own blackboard.
class SessionManager {
public:
    SessionManager(std::shared_ptr<const std::map<std::string, explain::Corpus>> corpora, ManagerConfig config = {});

    /// Validates, personalizes and registers a spec. Throws InvalidSpec.
    void add_spec(spec::XaiSpec spec);
    /// Loads every `*.xaispec.json` in `dir`; returns the spec ids loaded.
    std::vector<std::string> load_specs_dir(const std::string& dir);
    std::vector<std::string> spec_ids() const;
    std::shared_ptr<const LoadedSpec> spec(const std::string& spec_id) const;

    /// Throws UnknownSpec.
    Created create_session(const std::string& spec_id);
    /// Throws UnknownSession, SessionClosed, SessionNotWaiting, ChoiceOutOfRange.
    Turn post_event(const std::string& session_id, const bt::UserEvent& event);
    /// Throws UnknownSession.
    Transcript transcript(const std::string& session_id) const;
    std::vector<SessionSummary> list_sessions(const std::string& spec_id = "") const;
    /// Wire messages with index >= after; blocks up to `timeout` when none.
    std::vector<nlohmann::json> messages(const std::string& session_id, std::size_t after,
                                         std::chrono::milliseconds timeout) const;

    /// Closes sessions idle for longer than the configured timeout and
    /// returns their ids.
    std::vector<std::string> sweep_idle();
    /// Closes one session as if it had gone idle.
    void close_session(const std::string& session_id);

    /// Aggregates every completed questionnaire for `spec_id`, live and
    /// persisted. Throws UnknownSpec / NoEvaluations.
    StrategyVerdict verdict(const std::string& spec_id) const;

    const explain::Registry& registry() const noexcept { return registry_; }

private:
    std::shared_ptr<Session> find(const std::string& session_id) const;
    std::chrono::system_clock::time_point now() const;
    void persist(Session& session);
    void record_feedback(const Session& session, const Turn& turn);

    std::shared_ptr<const std::map<std::string, explain::Corpus>> corpora_;
    ManagerConfig config_;
    explain::Registry registry_;
    dialogue::EeTree abstract_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const LoadedSpec>> specs_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex io_mutex_;
};

}  // namespace ee::service
