#include "ee/service/manager.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include "ee/dialogue/feedback.hpp"
#include "ee/dialogue/reactions.hpp"
#include "ee/error.hpp"
#include "ee/spec/codec.hpp"
#include "ee/spec/compile.hpp"

namespace fs = std::filesystem;

namespace ee::service {

std::string iso8601(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json to_json(const SessionSummary& s) {
    return {{"session_id", s.session_id},
            {"spec_id", s.spec_id},
            {"status", s.status},
            {"created_at", s.created_at},
            {"entries", s.entries}};
}

namespace {

std::string random_id() {
    static std::mutex m;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(m);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

dialogue::TargetDescriptor target_for(const spec::XaiSpec& spec, const std::map<std::string, explain::Corpus>& corpora) {
    dialogue::TargetDescriptor t;
    if (spec.needs.empty()) return t;
    const auto& schema = spec.needs.front().target_schema;
    t.schema = schema.schema;
    t.kind = schema.kind;
    auto it = corpora.find(schema.schema);
    if (it == corpora.end()) return t;
    t.id = it->second.default_target;
    if (const auto* r = it->second.find(t.id)) {
        t.outcome = r->outcome;
        t.attachment = r->attachment;
    }
    return t;
}

void append_line(const fs::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << line << '\n';
}

}  // namespace

SessionManager::SessionManager(std::shared_ptr<const std::map<std::string, explain::Corpus>> corpora,
                               ManagerConfig config)
    : corpora_(std::move(corpora)), config_(std::move(config)), abstract_(dialogue::build_abstract_tree()) {
    explain::register_mocks(registry_, corpora_);
    if (!config_.next_id) config_.next_id = random_id;
    if (!config_.data_dir.empty()) {
        std::error_code ec;
        fs::create_directories(fs::path(config_.data_dir) / "transcripts", ec);
        if (ec) throw Error(Errc::Io, "cannot create " + config_.data_dir);
    }
}

std::chrono::system_clock::time_point SessionManager::now() const {
    return config_.clock ? config_.clock() : std::chrono::system_clock::now();
}

void SessionManager::add_spec(spec::XaiSpec s) {
    auto violations = spec::validate_spec(s, registry_);
    if (!violations.empty()) {
        std::string detail = s.spec_id;
        for (const auto& v : violations) detail += "; " + bt::to_string(v);
        throw Error(Errc::InvalidSpec, detail);
    }
    auto tree = dialogue::personalize(abstract_, s, registry_);
    auto target = target_for(s, *corpora_);
    auto loaded = std::make_shared<const LoadedSpec>(LoadedSpec{std::move(s), std::move(tree), std::move(target)});
    std::unique_lock lock(mutex_);
    specs_[loaded->spec.spec_id] = std::move(loaded);
}

std::vector<std::string> SessionManager::load_specs_dir(const std::string& dir) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        const auto name = e.path().filename().string();
        if (name.size() > 14 && name.ends_with(".xaispec.json")) files.push_back(e.path());
    }
    if (ec) throw Error(Errc::Io, "cannot read " + dir);
    std::sort(files.begin(), files.end());
    std::vector<std::string> ids;
    for (const auto& f : files) {
        auto s = spec::load_spec_file(f.string());
        ids.push_back(s.spec_id);
        add_spec(std::move(s));
    }
    return ids;
}

std::vector<std::string> SessionManager::spec_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, _] : specs_) ids.push_back(id);
    return ids;
}

std::shared_ptr<const LoadedSpec> SessionManager::spec(const std::string& spec_id) const {
    std::shared_lock lock(mutex_);
    auto it = specs_.find(spec_id);
    if (it == specs_.end()) throw Error(Errc::UnknownSpec, spec_id);
    return it->second;
}

std::shared_ptr<Session> SessionManager::find(const std::string& session_id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(Errc::UnknownSession, session_id);
    return it->second;
}

Created SessionManager::create_session(const std::string& spec_id) {
    auto loaded = spec(spec_id);
    std::string id;
    {
        std::shared_lock lock(mutex_);
        do {
            id = config_.next_id();
        } while (sessions_.count(id));
    }
    auto session = std::make_shared<Session>(id, loaded, registry_, dialogue::PhraseClassifier::builtin(),
                                             iso8601(now()));
    Created created{id, {}};
    {
        std::lock_guard slock(session->mutex());
        created.turn = session->start();
        {
            std::unique_lock lock(mutex_);
            if (sessions_.count(id)) throw Error(Errc::DuplicateId, id);
            sessions_[id] = session;
        }
        persist(*session);
        record_feedback(*session, created.turn);
    }
    session->changed().notify_all();
    return created;
}

Turn SessionManager::post_event(const std::string& session_id, const bt::UserEvent& event) {
    auto session = find(session_id);
    Turn turn;
    {
        std::lock_guard slock(session->mutex());
        turn = session->post(event);
        persist(*session);
        record_feedback(*session, turn);
    }
    session->changed().notify_all();
    return turn;
}

Transcript SessionManager::transcript(const std::string& session_id) const {
    auto session = find(session_id);
    std::lock_guard slock(session->mutex());
    return session->transcript();
}

std::vector<SessionSummary> SessionManager::list_sessions(const std::string& spec_id) const {
    std::vector<std::shared_ptr<Session>> all;
    {
        std::shared_lock lock(mutex_);
        for (const auto& [_, s] : sessions_) all.push_back(s);
    }
    std::vector<SessionSummary> out;
    for (const auto& s : all) {
        std::lock_guard slock(s->mutex());
        const auto& t = s->transcript();
        if (!spec_id.empty() && t.spec_id != spec_id) continue;
        out.push_back({t.session_id, t.spec_id, t.status, t.created_at, t.entries.size()});
    }
    return out;
}

std::vector<nlohmann::json> SessionManager::messages(const std::string& session_id, std::size_t after,
                                                     std::chrono::milliseconds timeout) const {
    auto session = find(session_id);
    std::unique_lock slock(session->mutex());
    session->changed().wait_for(slock, timeout, [&] { return session->messages().size() > after; });
    const auto& all = session->messages();
    if (after >= all.size()) return {};
    return {all.begin() + static_cast<std::ptrdiff_t>(after), all.end()};
}

void SessionManager::close_session(const std::string& session_id) {
    auto session = find(session_id);
    {
        std::lock_guard slock(session->mutex());
        session->close();
        persist(*session);
    }
    session->changed().notify_all();
}

std::vector<std::string> SessionManager::sweep_idle() {
    std::vector<std::string> closed;
    if (config_.idle_timeout.count() <= 0) return closed;
    std::vector<std::shared_ptr<Session>> all;
    {
        std::shared_lock lock(mutex_);
        for (const auto& [_, s] : sessions_) all.push_back(s);
    }
    const auto cutoff = std::chrono::steady_clock::now() - config_.idle_timeout;
    for (const auto& s : all) {
        {
            std::lock_guard slock(s->mutex());
            if (s->status() != SessionStatus::Active || s->last_activity > cutoff) continue;
            s->close();
            persist(*s);
            closed.push_back(s->id());
        }
        s->changed().notify_all();
    }
    return closed;
}

StrategyVerdict SessionManager::verdict(const std::string& spec_id) const {
    auto loaded = spec(spec_id);
    std::vector<Responses> responses;
    std::map<std::string, bool> seen;
    for (const auto& summary : list_sessions(spec_id)) {
        auto t = transcript(summary.session_id);
        seen[t.session_id] = true;
        if (!t.responses.empty()) responses.push_back(t.responses);
    }
    if (!config_.data_dir.empty()) {
        std::error_code ec;
        for (const auto& e : fs::directory_iterator(fs::path(config_.data_dir) / "transcripts", ec)) {
            auto t = read_transcript_file(e.path().string());
            if (t.spec_id != spec_id || seen.count(t.session_id)) continue;
            if (!t.responses.empty()) responses.push_back(t.responses);
        }
    }
    return aggregate_responses(loaded->spec, responses);
}

void SessionManager::persist(Session& session) {
    if (config_.data_dir.empty()) return;
    std::lock_guard lock(io_mutex_);
    const fs::path dir(config_.data_dir);
    const auto path = dir / "transcripts" / (session.id() + ".ndjson");
    const auto& t = session.transcript();
    const bool fresh = !fs::exists(path);
    if (fresh) {
        append_line(path, nlohmann::json{{"type", "header"},
                                         {"session_id", t.session_id},
                                         {"spec_id", t.spec_id},
                                         {"created_at", t.created_at}}
                              .dump());
    }
    for (const auto& e : session.take_new_entries()) {
        auto j = entry_to_json(e);
        j["type"] = "entry";
        append_line(path, j.dump());
    }
    if (session.status() != SessionStatus::Active) {
        if (!t.responses.empty()) {
            nlohmann::json answers = nlohmann::json::object();
            for (const auto& [q, a] : t.responses) answers[q] = a;
            append_line(path, nlohmann::json{{"type", "responses"}, {"answers", answers}}.dump());
        }
        append_line(path, nlohmann::json{{"type", "status"}, {"status", t.status}}.dump());
    }
    if (fresh || session.status() != SessionStatus::Active) {
        append_line(dir / "index.ndjson", nlohmann::json{{"session_id", t.session_id},
                                                         {"spec_id", t.spec_id},
                                                         {"created_at", t.created_at},
                                                         {"status", t.status}}
                                              .dump());
    }
}

void SessionManager::record_feedback(const Session& session, const Turn& turn) {
    if (config_.data_dir.empty()) return;
    std::lock_guard lock(io_mutex_);
    for (const auto& effect : turn.effects) {
        const auto* f = std::get_if<bt::FeedbackRecorded>(&effect);
        if (!f) continue;
        dialogue::append_feedback(config_.data_dir,
                                  {session.id(), session.spec_id(), f->category, f->text, iso8601(now())});
    }
}

}  // namespace ee::service
