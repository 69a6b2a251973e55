#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

namespace ee::cli {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Validates spec files; prints "ok <spec_id>" or one violation per line.
int cmd_validate(const std::vector<std::string>& paths, const std::string& fixtures_dir, std::ostream& out,
                 std::ostream& err);

/// Prints the sorted `path = value` field dump of a spec file.
int cmd_dump(const std::string& path, std::ostream& out, std::ostream& err);

struct SimulateArgs {
    std::string spec_path;
    std::string script_path;
    std::string fixtures_dir;
    std::string trace_out;
    bool strict = false;
};

/// Replays a script headlessly; exit 0 iff every expectation holds.
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
    /// A spec id found in specs_dir, or a path to a spec file.
    std::string spec;
    std::string specs_dir;
    std::string responses_path;
    std::string data_dir;
};

/// Prints the verdict summary line followed by one line per question.
int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

struct ServeArgs {
    std::string specs_dir;
    std::string fixtures_dir;
    std::string listen = "127.0.0.1:8080";
    std::string data_dir;
    std::chrono::seconds idle_timeout{1800};
};

/// Runs the HTTP service until SIGINT/SIGTERM.
int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err);

}  // namespace ee::cli
