#include "ee/cli/commands.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "ee/cli/simulate.hpp"
#include "ee/error.hpp"
#include "ee/explain/registry.hpp"
#include "ee/service/http.hpp"
#include "ee/spec/codec.hpp"
#include "ee/spec/compile.hpp"

namespace fs = std::filesystem;

namespace ee::cli {

namespace {

int exit_code(const Error& e) { return e.code() == Errc::Io ? kExitUsage : kExitFailure; }

std::shared_ptr<const std::map<std::string, explain::Corpus>> corpora_from(const std::string& dir) {
    if (!fs::is_directory(dir)) throw Error(Errc::Io, "fixtures directory not found: " + dir);
    return std::make_shared<const std::map<std::string, explain::Corpus>>(explain::load_corpora(dir));
}

spec::XaiSpec find_spec(const ReportArgs& args) {
    if (fs::is_regular_file(args.spec)) return spec::load_spec_file(args.spec);
    if (args.specs_dir.empty()) throw Error(Errc::Io, "spec not found: " + args.spec);
    std::error_code ec;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(args.specs_dir, ec)) {
        if (e.path().string().ends_with(".xaispec.json")) files.push_back(e.path());
    }
    if (ec) throw Error(Errc::Io, "cannot read " + args.specs_dir);
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        auto s = spec::load_spec_file(f.string());
        if (s.spec_id == args.spec) return s;
    }
    throw Error(Errc::UnknownSpec, args.spec);
}

std::atomic<service::HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
    if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int cmd_validate(const std::vector<std::string>& paths, const std::string& fixtures_dir, std::ostream& out,
                 std::ostream& err) {
    try {
        const auto registry = explain::mock_registry(fixtures_dir);
        int code = kExitOk;
        for (const auto& path : paths) {
            spec::XaiSpec s;
            try {
                s = spec::load_spec_file(path);
            } catch (const Error& e) {
                if (e.code() == Errc::Io) throw;
                out << path << ": " << e.what() << "\n";
                code = kExitFailure;
                continue;
            }
            const auto violations = spec::validate_spec(s, registry);
            if (violations.empty()) {
                out << "ok " << s.spec_id << "\n";
                continue;
            }
            code = kExitFailure;
            for (const auto& v : violations) out << s.spec_id << ": " << bt::to_string(v) << "\n";
        }
        return code;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e);
    }
}

int cmd_dump(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        for (const auto& line : spec::field_dump(spec::load_spec_file(path))) out << line << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e);
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        auto s = spec::load_spec_file(args.spec_path);
        const auto script = load_script(args.script_path);
        if (script.spec_id != s.spec_id) {
            err << "script is for spec " << script.spec_id << ", not " << s.spec_id << "\n";
            return kExitFailure;
        }
        service::ManagerConfig config;
        config.clock = [] { return std::chrono::system_clock::time_point{}; };
        config.next_id = [] { return std::string("simulation"); };
        service::SessionManager manager(corpora_from(args.fixtures_dir), config);
        manager.add_spec(std::move(s));

        const auto sim = run_script(manager, script, {args.strict});
        for (const auto& line : sim.lines) out << line << "\n";
        out << "sequence: ";
        for (std::size_t i = 0; i < sim.sequence.size(); ++i) out << (i ? "," : "") << sim.sequence[i];
        out << "\nroot: " << bt::to_string(sim.root) << "\n";
        for (const auto& m : sim.mismatches) out << "mismatch: " << m << "\n";

        if (!args.trace_out.empty()) {
            std::ofstream trace(args.trace_out, std::ios::binary);
            if (!trace) throw Error(Errc::Io, "cannot write " + args.trace_out);
            trace << sim.trace;
        }
        return sim.mismatches.empty() ? kExitOk : kExitFailure;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e);
    }
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const auto s = find_spec(args);
        std::vector<service::Responses> responses;
        if (!args.responses_path.empty()) responses = service::load_responses(args.responses_path, s.spec_id);
        if (!args.data_dir.empty()) {
            const auto dir = fs::path(args.data_dir) / "transcripts";
            std::error_code ec;
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(dir, ec)) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                const auto t = service::read_transcript_file(f.string());
                if (t.spec_id == s.spec_id && !t.responses.empty()) responses.push_back(t.responses);
            }
        }
        const auto v = service::aggregate_responses(s, responses);
        out << v.summary() << "\n";
        for (const auto& q : v.questions) {
            out << q.question_id << ": " << q.positive << "/" << q.respondents << " positive answers, "
                << (q.positive_question ? "positive" : "not positive") << "\n";
        }
        if (v.partial) out << "partial sessions excluded: " << v.partial << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e);
    }
}

int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const auto colon = args.listen.rfind(':');
        if (colon == std::string::npos) {
            err << "--listen expects host:port\n";
            return kExitUsage;
        }
        const auto host = args.listen.substr(0, colon);
        int port = 0;
        try {
            port = std::stoi(args.listen.substr(colon + 1));
        } catch (const std::exception&) {
            err << "--listen expects host:port\n";
            return kExitUsage;
        }

        service::ManagerConfig config;
        config.data_dir = args.data_dir;
        config.idle_timeout = args.idle_timeout;
        service::SessionManager manager(corpora_from(args.fixtures_dir), config);
        const auto ids = manager.load_specs_dir(args.specs_dir);

        service::HttpServer server(manager);
        const int bound = server.bind(host, port);
        if (bound < 0) {
            err << "cannot listen on " << args.listen << "\n";
            return kExitUsage;
        }
        out << "listening on " << host << ":" << bound << " (" << ids.size() << " specs)" << std::endl;

        std::atomic<bool> running{true};
        std::thread sweeper([&] {
            while (running) {
                std::this_thread::sleep_for(std::chrono::milliseconds(500));
                manager.sweep_idle();
            }
        });
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        server.serve();
        g_server = nullptr;
        running = false;
        sweeper.join();
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e);
    }
}

}  // namespace ee::cli
